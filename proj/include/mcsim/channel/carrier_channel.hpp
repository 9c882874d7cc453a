#pragma once

#include "mcsim/channel/carrier.hpp"
#include "mcsim/channel/propagation.hpp"
#include "mcsim/sim/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mcsim::channel {

enum class LosMode
{
  Nlos,
  Los,
  Probabilistic
};

/// Per-link radio parameters shared by every carrier of a cell.
struct ChannelParams
{
  double tx_power_dbm = 30.0; ///< power available to this carrier
  double noise_figure_db = 5.0;
  double shadowing_sigma_los_db = 4.0;
  double shadowing_sigma_nlos_db = 6.0;
  LosMode los_mode = LosMode::Nlos;
  double los_decorrelation_m = 10.0;
  FadingParams fading;
  double fading_period_s = 0.01;
  BlockageDynamics blockage_dynamics;
  double blockage_attenuation_db = 30.0;
  bool blockage_enabled = false;
};

/// Radio channel between one cell and one UE on one component carrier.
///
/// Streams: small-scale fading is per carrier ("fading/cell<c>/cc<k>/ue<u>");
/// shadowing, LOS and blockage are link-level ("<what>/cell<c>/ue<u>"), so all
/// carriers of a link see the same obstacles. Each instance owns its streams,
/// so one carrier's configuration never perturbs another's draws.
class CarrierChannel
{
public:
  CarrierChannel (CarrierConfig carrier, ChannelParams params, LinkGeometry geometry, int cellId, int ueId,
                  std::uint64_t masterSeed);

  /// Advances blockage and LOS by dt, redraws fading when its period elapsed,
  /// and recomputes the SINR vector for the given geometry.
  void update (double now, double dt, const LinkGeometry& geometry);

  /// Scripted blockage: forces the blockage state while set; std::nullopt
  /// returns control to the random process.
  void set_blockage_override (std::optional<bool> active);

  const CarrierConfig& carrier () const { return m_carrier; }
  const ChannelParams& params () const { return m_params; }
  const LinkState& state () const { return m_state; }
  const LinkGeometry& geometry () const { return m_geometry; }
  const std::vector<double>& subband_sinr_db () const { return m_subbandSinr; }
  double wideband_sinr_db () const { return m_state.wideband_sinr_db; }
  double effective_sinr_db () const { return m_effectiveSinr; }
  int cell_id () const { return m_cellId; }
  const std::string& fading_stream_label () const { return m_fadingRng.label (); }
  int ue_id () const { return m_ueId; }

private:
  void Recompute ();
  void DrawLos ();

  CarrierConfig m_carrier;
  ChannelParams m_params;
  LinkGeometry m_geometry;
  int m_cellId;
  int m_ueId;
  sim::RngStream m_fadingRng;
  sim::RngStream m_shadowRng;
  sim::RngStream m_blockageRng;
  sim::RngStream m_losRng;
  double m_shadowZ = 0.0;
  double m_losDrawDistance = -1.0;
  double m_nextFadingTime = 0.0;
  std::optional<bool> m_blockageOverride;
  LinkState m_state;
  std::vector<double> m_subbandSinr;
  double m_effectiveSinr = 0.0;
};

} // namespace mcsim::channel
