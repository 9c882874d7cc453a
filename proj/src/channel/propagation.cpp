#include "mcsim/channel/propagation.hpp"

#include "mcsim/sim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mcsim::channel {

namespace {
constexpr double kBoltzmannDbmPerHz = -174.0;

double
ToLinear (double db)
{
  return std::pow (10.0, db / 10.0);
}

double
ToDb (double linear)
{
  return 10.0 * std::log10 (linear);
}
} // namespace

double
pathloss_db (const CarrierConfig& carrier, const LinkGeometry& geom, bool los)
{
  const double d = geom.distance_2d_m;
  const double f = carrier.center_freq_ghz;
  if (!(d > 0.0))
    {
      throw ConfigError ("pathloss requires a positive distance");
    }
  if (!(f >= 0.5 && f <= 100.0))
    {
      throw ConfigError ("pathloss frequency outside [0.5, 100] GHz");
    }
  const double plLos = 28.0 + 22.0 * std::log10 (d) + 20.0 * std::log10 (f);
  if (los)
    {
      return plLos;
    }
  const double plNlos = 13.54 + 39.08 * std::log10 (d) + 20.0 * std::log10 (f);
  return std::max (plLos, plNlos);
}

double
los_probability (double distance_2d_m)
{
  const double d = distance_2d_m;
  if (d <= 18.0)
    {
      return 1.0;
    }
  return 18.0 / d + std::exp (-d / 63.0) * (1.0 - 18.0 / d);
}

BlockageState
update_blockage (const BlockageState& state, double dt, const BlockageDynamics& dynamics, sim::RngStream& rng)
{
  if (!(dt > 0.0))
    {
      throw ConfigError ("blockage update requires dt > 0");
    }
  BlockageState next = state;
  if (!state.enabled_for_carrier)
    {
      next.active = false;
      return next;
    }
  const double toBlocked = 1.0 / dynamics.mean_free_s;
  const double toFree = 1.0 / dynamics.mean_blocked_s;
  const double p = dynamics.stationary_blocked_probability ();
  const double decay = std::exp (-(toBlocked + toFree) * dt);
  const double pBlockedNext = state.active ? p + (1.0 - p) * decay : p * (1.0 - decay);
  next.active = rng.uniform () < pBlockedNext;
  return next;
}

double
beamforming_gain_db (const LinkGeometry& geom)
{
  if (geom.bs_antenna_elements < 1 || geom.ue_antenna_elements < 1)
    {
      throw ConfigError ("antenna element counts must be >= 1");
    }
  return ToDb (geom.bs_antenna_elements) + ToDb (geom.ue_antenna_elements);
}

double
thermal_noise_dbm (double bandwidth_hz)
{
  return kBoltzmannDbmPerHz + ToDb (bandwidth_hz);
}

std::vector<double>
subband_sinr (const CarrierConfig& carrier, const LinkState& link, double txPowerDbm, double noiseFigureDb,
              const LinkGeometry& geom)
{
  const int n = carrier.n_subbands;
  const double powerShareDbm = txPowerDbm - ToDb (n);
  const double noiseDbm = thermal_noise_dbm (carrier.bandwidth_hz () / n) + noiseFigureDb;
  const double blockDb = link.blockage.active ? link.blockage.attenuation_db : 0.0;
  const double common =
    powerShareDbm - link.pathloss_db - link.shadowing_db - blockDb + beamforming_gain_db (geom) - noiseDbm;

  std::vector<double> out (static_cast<std::size_t> (n), common);
  if (!link.subband_fading_db.empty ())
    {
      for (int i = 0; i < n; ++i)
        {
          out[i] += link.subband_fading_db.at (i);
        }
    }
  return out;
}

double
wideband_sinr (std::span<const double> subbandsDb)
{
  if (subbandsDb.empty ())
    {
      throw ConfigError ("wideband_sinr of an empty subband vector");
    }
  double sum = 0.0;
  for (double s : subbandsDb)
    {
      sum += ToLinear (s);
    }
  return ToDb (sum / static_cast<double> (subbandsDb.size ()));
}

double
effective_sinr (std::span<const double> subbandsDb)
{
  if (subbandsDb.empty ())
    {
      throw ConfigError ("effective_sinr of an empty subband vector");
    }
  double bits = 0.0;
  for (double s : subbandsDb)
    {
      bits += std::log2 (1.0 + ToLinear (s));
    }
  bits /= static_cast<double> (subbandsDb.size ());
  // exp2(bits) - 1 loses precision for tiny rates.
  return ToDb (std::expm1 (bits * std::log (2.0)));
}

std::vector<double>
resample_fading (const CarrierConfig& carrier, const FadingParams& params, sim::RngStream& rng)
{
  const auto n = static_cast<std::size_t> (std::max (carrier.n_subbands, 1));
  std::vector<double> out (n, 0.0);
  if (!params.enabled || params.sigma_db <= 0.0)
    {
      return out;
    }
  double rho = 0.0;
  if (params.coherence_bandwidth_mhz > 0.0)
    {
      const double spacingMhz = carrier.bandwidth_mhz / static_cast<double> (n);
      rho = std::exp (-spacingMhz / params.coherence_bandwidth_mhz);
    }
  const double innovation = std::sqrt (1.0 - rho * rho);
  out[0] = rng.normal (0.0, params.sigma_db);
  for (std::size_t i = 1; i < n; ++i)
    {
      out[i] = rho * out[i - 1] + innovation * rng.normal (0.0, params.sigma_db);
    }
  return out;
}

} // namespace mcsim::channel
