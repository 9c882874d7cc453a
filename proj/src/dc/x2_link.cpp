#include "mcsim/dc/x2_link.hpp"

#include "mcsim/sim/errors.hpp"

#include <algorithm>

namespace mcsim::dc {

X2Link::X2Link (double latencyS, double datarateBps) : m_latency (latencyS), m_rate (datarateBps)
{
  if (!(latencyS >= 0.0))
    {
      throw ConfigError ("X2 latency must be >= 0");
    }
  if (!(datarateBps > 0.0))
    {
      throw ConfigError ("X2 datarate must be > 0");
    }
}

double
X2Link::backlog_bytes (double t) const
{
  return std::max (0.0, m_busyUntil - t) * m_rate / 8.0;
}

double
X2Link::x2_deliver (std::uint64_t pduBytes, double sendTime)
{
  if (pduBytes == 0)
    {
      throw ConfigError ("X2 PDU with zero bytes");
    }
  const double start = std::max (sendTime, m_busyUntil);
  m_busyUntil = start + static_cast<double> (pduBytes) * 8.0 / m_rate;
  ++m_pdus;
  return m_busyUntil + m_latency;
}

} // namespace mcsim::dc
