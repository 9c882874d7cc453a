#include "mcsim/mac/amc.hpp"

#include "mcsim/sim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mcsim::mac {

double
mcs_threshold_db (int mcs)
{
  if (mcs < 0 || mcs >= kNumMcs)
    {
      throw ConfigError ("MCS index out of range: " + std::to_string (mcs));
    }
  return kFirstThresholdDb + kThresholdStepDb * mcs;
}

double
spectral_efficiency (int mcs)
{
  const double thr = std::pow (10.0, mcs_threshold_db (mcs) / 10.0);
  return std::min (kShannonFraction * std::log2 (1.0 + thr), kMaxSpectralEfficiency);
}

McsChoice
select_mcs (double widebandSinrDb)
{
  if (!(widebandSinrDb >= kFirstThresholdDb))
    {
      return McsChoice{0, true};
    }
  const int idx = static_cast<int> (std::floor ((widebandSinrDb - kFirstThresholdDb) / kThresholdStepDb));
  int mcs = std::clamp (idx, 0, kNumMcs - 1);
  // Guard the floor against rounding right at a threshold.
  while (mcs + 1 < kNumMcs && mcs_threshold_db (mcs + 1) <= widebandSinrDb)
    {
      ++mcs;
    }
  while (mcs > 0 && mcs_threshold_db (mcs) > widebandSinrDb)
    {
      --mcs;
    }
  return McsChoice{mcs, false};
}

double
bler (double sinrDb, int mcs)
{
  // 1 / (1 + 9 * 10^(margin)): equals 0.1 at zero margin, ~10^-(margin+1) above.
  const double margin = sinrDb - mcs_threshold_db (mcs);
  if (margin > 30.0)
    {
      return 0.0;
    }
  return 1.0 / (1.0 + 9.0 * std::pow (10.0, margin));
}

std::uint64_t
tb_size_bytes (double spectralEfficiency, int nSymbols, const channel::CarrierConfig& carrier)
{
  if (nSymbols < 1)
    {
      throw ConfigError ("tb_size_bytes needs at least one symbol");
    }
  const double bits = spectralEfficiency * carrier.bandwidth_hz () * nSymbols * carrier.symbol_duration_s ();
  // The epsilon keeps exact products (e.g. 1040.0) from flooring to n-1.
  return static_cast<std::uint64_t> (std::floor (bits / 8.0 + 1e-9));
}

std::uint64_t
tb_size_bytes (const McsChoice& mcs, int nSymbols, const channel::CarrierConfig& carrier)
{
  if (mcs.zero_rate)
    {
      return 0;
    }
  return tb_size_bytes (spectral_efficiency (mcs.mcs), nSymbols, carrier);
}

} // namespace mcsim::mac
