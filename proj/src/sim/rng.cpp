#include "mcsim/sim/rng.hpp"

#include "mcsim/sim/errors.hpp"

#include <cmath>
#include <numbers>

namespace mcsim::sim {

namespace {

std::uint64_t
SplitMix64 (std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t
Fnv1a64 (const std::string& s)
{
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s)
    {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
  return h;
}

} // namespace

std::uint64_t
derive_substream_seed (const std::string& label, std::uint64_t masterSeed)
{
  return SplitMix64 (Fnv1a64 (label) ^ SplitMix64 (masterSeed));
}

RngStream::RngStream (std::string label, std::uint64_t masterSeed)
  : m_label (std::move (label)),
    m_seed (masterSeed),
    m_engine (derive_substream_seed (m_label, masterSeed))
{
  if (m_label.empty ())
    {
      throw ConfigError ("rng stream label must be non-empty");
    }
}

std::uint64_t
RngStream::next ()
{
  ++m_draws;
  return m_engine ();
}

double
RngStream::uniform ()
{
  return static_cast<double> (next () >> 11) * 0x1.0p-53;
}

double
RngStream::uniform_open0 ()
{
  return (static_cast<double> (next () >> 11) + 1.0) * 0x1.0p-53;
}

double
RngStream::uniform (double lo, double hi)
{
  return lo + (hi - lo) * uniform ();
}

double
RngStream::normal (double mean, double stddev)
{
  if (m_haveSpareNormal)
    {
      m_haveSpareNormal = false;
      return mean + stddev * m_spareNormal;
    }
  // Box-Muller: two normals per pair of uniforms.
  const double u1 = uniform_open0 ();
  const double u2 = uniform ();
  const double r = std::sqrt (-2.0 * std::log (u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  m_spareNormal = r * std::sin (theta);
  m_haveSpareNormal = true;
  return mean + stddev * r * std::cos (theta);
}

double
RngStream::exponential (double mean)
{
  return -mean * std::log (uniform_open0 ());
}

bool
RngStream::bernoulli (double p)
{
  return uniform () < p;
}

RngStream
rng_stream (const std::string& label, std::uint64_t masterSeed)
{
  return RngStream (label, masterSeed);
}

} // namespace mcsim::sim
