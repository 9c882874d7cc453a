#pragma once

#include "mcsim/channel/carrier.hpp"

#include <cstdint>

namespace mcsim::mac {

/// 29-entry MCS table. Thresholds are spaced 1.6 dB from -6 dB; spectral
/// efficiency is truncated Shannon, min(0.75 log2(1 + threshold), 7.4).
inline constexpr int kNumMcs = 29;
inline constexpr double kFirstThresholdDb = -6.0;
inline constexpr double kThresholdStepDb = 1.6;
inline constexpr double kShannonFraction = 0.75;
inline constexpr double kMaxSpectralEfficiency = 7.4;

struct McsChoice
{
  int mcs = 0;
  /// SINR below the lowest threshold: nothing can be sent.
  bool zero_rate = true;
};

double mcs_threshold_db (int mcs);
double spectral_efficiency (int mcs);

/// Highest MCS whose threshold does not exceed the SINR. Monotone step function.
McsChoice select_mcs (double widebandSinrDb);

/// Block error rate: logistic in dB, 0.1 at the MCS threshold, falling one
/// decade per dB above it.
double bler (double sinrDb, int mcs);

/// floor(SE * B * n_symbols * T_symbol / 8).
std::uint64_t tb_size_bytes (double spectralEfficiency, int nSymbols, const channel::CarrierConfig& carrier);
std::uint64_t tb_size_bytes (const McsChoice& mcs, int nSymbols, const channel::CarrierConfig& carrier);

} // namespace mcsim::mac
