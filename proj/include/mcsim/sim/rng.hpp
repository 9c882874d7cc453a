#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace mcsim::sim {

/// A labeled random substream. The draw sequence depends only on
/// (label, master seed): std::mt19937_64 output is fixed by the standard and
/// the transforms below avoid the implementation-defined std distributions,
/// so sequences match across platforms.
class RngStream
{
public:
  RngStream (std::string label, std::uint64_t masterSeed);

  const std::string& label () const { return m_label; }
  std::uint64_t seed () const { return m_seed; }
  std::uint64_t draw_count () const { return m_draws; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform ();
  /// Uniform on (0, 1], safe for log().
  double uniform_open0 ();
  double uniform (double lo, double hi);
  double normal (double mean, double stddev);
  double exponential (double mean);
  bool bernoulli (double p);

private:
  std::uint64_t next ();

  std::string m_label;
  std::uint64_t m_seed;
  std::uint64_t m_draws = 0;
  std::mt19937_64 m_engine;
  bool m_haveSpareNormal = false;
  double m_spareNormal = 0.0;
};

/// Derives the per-label generator seed from the label and master seed.
std::uint64_t derive_substream_seed (const std::string& label, std::uint64_t masterSeed);

/// Convenience constructor mirroring the engine API.
RngStream rng_stream (const std::string& label, std::uint64_t masterSeed);

} // namespace mcsim::sim
