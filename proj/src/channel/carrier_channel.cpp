#include "mcsim/channel/carrier_channel.hpp"

#include <cmath>
#include <string>

namespace mcsim::channel {

namespace {
std::string
LinkLabel (const char* what, int cellId, int ueId)
{
  return std::string (what) + "/cell" + std::to_string (cellId) + "/ue" + std::to_string (ueId);
}
} // namespace

CarrierChannel::CarrierChannel (CarrierConfig carrier, ChannelParams params, LinkGeometry geometry, int cellId,
                                int ueId, std::uint64_t masterSeed)
  : m_carrier (std::move (carrier)),
    m_params (params),
    m_geometry (geometry),
    m_cellId (cellId),
    m_ueId (ueId),
    m_fadingRng ("fading/cell" + std::to_string (cellId) + "/cc" + std::to_string (m_carrier.cc_id) + "/ue" +
                   std::to_string (ueId),
                 masterSeed),
    m_shadowRng (LinkLabel ("shadowing", cellId, ueId), masterSeed),
    m_blockageRng (LinkLabel ("blockage", cellId, ueId), masterSeed),
    m_losRng (LinkLabel ("los", cellId, ueId), masterSeed)
{
  m_shadowZ = m_shadowRng.normal (0.0, 1.0);
  DrawLos ();

  m_state.blockage.attenuation_db = m_params.blockage_attenuation_db;
  m_state.blockage.enabled_for_carrier = m_params.blockage_enabled;
  if (m_params.blockage_enabled)
    {
      // Start from the stationary distribution.
      m_state.blockage.active =
        m_blockageRng.uniform () < m_params.blockage_dynamics.stationary_blocked_probability ();
    }
  m_state.subband_fading_db = resample_fading (m_carrier, m_params.fading, m_fadingRng);
  m_nextFadingTime = m_params.fading_period_s;
  Recompute ();
}

void
CarrierChannel::DrawLos ()
{
  switch (m_params.los_mode)
    {
    case LosMode::Nlos:
      m_state.los = false;
      break;
    case LosMode::Los:
      m_state.los = true;
      break;
    case LosMode::Probabilistic:
      m_state.los = m_losRng.uniform () < los_probability (m_geometry.distance_2d_m);
      break;
    }
  m_losDrawDistance = m_geometry.distance_2d_m;
}

void
CarrierChannel::update (double now, double dt, const LinkGeometry& geometry)
{
  m_geometry = geometry;
  if (m_params.los_mode == LosMode::Probabilistic &&
      std::abs (m_geometry.distance_2d_m - m_losDrawDistance) >= m_params.los_decorrelation_m)
    {
      DrawLos ();
    }
  if (dt > 0.0)
    {
      m_state.blockage = update_blockage (m_state.blockage, dt, m_params.blockage_dynamics, m_blockageRng);
    }
  if (m_blockageOverride)
    {
      m_state.blockage.active = *m_blockageOverride && m_state.blockage.enabled_for_carrier;
    }
  if (now + 1e-12 >= m_nextFadingTime)
    {
      m_state.subband_fading_db = resample_fading (m_carrier, m_params.fading, m_fadingRng);
      while (m_nextFadingTime <= now + 1e-12)
        {
          m_nextFadingTime += m_params.fading_period_s;
        }
    }
  Recompute ();
}

void
CarrierChannel::set_blockage_override (std::optional<bool> active)
{
  m_blockageOverride = active;
  if (active)
    {
      m_state.blockage.active = *active && m_state.blockage.enabled_for_carrier;
      Recompute ();
    }
}

void
CarrierChannel::Recompute ()
{
  m_state.pathloss_db = pathloss_db (m_carrier, m_geometry, m_state.los);
  const double sigma = m_state.los ? m_params.shadowing_sigma_los_db : m_params.shadowing_sigma_nlos_db;
  m_state.shadowing_db = m_shadowZ * sigma;
  m_subbandSinr = subband_sinr (m_carrier, m_state, m_params.tx_power_dbm, m_params.noise_figure_db, m_geometry);
  m_state.wideband_sinr_db = wideband_sinr (m_subbandSinr);
  m_effectiveSinr = effective_sinr (m_subbandSinr);
}

} // namespace mcsim::channel
