#pragma once

#include "mcsim/channel/carrier.hpp"
#include "mcsim/sim/rng.hpp"

#include <span>
#include <vector>

namespace mcsim::channel {

struct LinkGeometry
{
  double distance_2d_m = 100.0;
  int bs_antenna_elements = 64;
  int ue_antenna_elements = 16;
};

struct BlockageState
{
  bool active = false;
  double attenuation_db = 30.0;
  bool enabled_for_carrier = false;
};

/// Mean sojourn times of the two-state (free/blocked) blockage process.
struct BlockageDynamics
{
  double mean_blocked_s = 0.5;
  double mean_free_s = 1.5;

  double stationary_blocked_probability () const
  {
    return mean_blocked_s / (mean_blocked_s + mean_free_s);
  }
};

struct FadingParams
{
  bool enabled = true;
  double sigma_db = 4.0;
  /// 0 draws subbands independently; otherwise adjacent subbands of one
  /// carrier are correlated by exp(-spacing / coherence bandwidth).
  double coherence_bandwidth_mhz = 0.0;
};

struct LinkState
{
  bool los = false;
  double pathloss_db = 0.0;
  double shadowing_db = 0.0;
  std::vector<double> subband_fading_db;
  BlockageState blockage;
  double wideband_sinr_db = 0.0;
};

/// UMa-style pathloss in dB with the 2D distance in metres and frequency in GHz.
///   LOS:  28.0  + 22    log10(d) + 20 log10(f)
///   NLOS: 13.54 + 39.08 log10(d) + 20 log10(f), floored at the LOS value
double pathloss_db (const CarrierConfig& carrier, const LinkGeometry& geom, bool los);

/// LOS probability for the probabilistic LOS mode (3GPP UMa, short UE).
double los_probability (double distance_2d_m);

/// Advances the blockage process by dt using the exact transition
/// probabilities of the continuous-time chain. A carrier with blockage
/// disabled never becomes active and consumes no randomness.
BlockageState update_blockage (const BlockageState& state, double dt, const BlockageDynamics& dynamics,
                               sim::RngStream& rng);

/// Array gain of a BS/UE element pair: 10 log10(n_bs) + 10 log10(n_ue).
double beamforming_gain_db (const LinkGeometry& geom);

/// kTB in dBm for the given bandwidth (T = 290 K).
double thermal_noise_dbm (double bandwidth_hz);

/// Per-subband SINR in dB; tx power and thermal noise are split evenly over
/// the carrier's subbands. Single-cell, so no interference term.
std::vector<double> subband_sinr (const CarrierConfig& carrier, const LinkState& link, double txPowerDbm,
                                  double noiseFigureDb, const LinkGeometry& geom);

/// 10 log10 of the linear mean. Throws ConfigError on an empty input.
double wideband_sinr (std::span<const double> subbandsDb);

/// Capacity-equivalent SINR: the flat SINR whose Shannon rate equals the mean
/// Shannon rate over the subbands. Never exceeds wideband_sinr().
double effective_sinr (std::span<const double> subbandsDb);

/// Draws a fresh per-subband fading vector (dB). Zero vector when disabled.
std::vector<double> resample_fading (const CarrierConfig& carrier, const FadingParams& params,
                                     sim::RngStream& rng);

} // namespace mcsim::channel
