#pragma once

#include <cstdint>

namespace mcsim::dc {

/// Point-to-point inter-cell link with a fixed latency and a serialization
/// rate. PDUs are serialized one after the other (FIFO); the backlog is the
/// data still being serialized when a new PDU is handed over.
class X2Link
{
public:
  explicit X2Link (double latencyS = 1e-3, double datarateBps = 10e9);

  /// Arrival time of a PDU of pduBytes handed to the link at sendTime:
  /// send + latency + (backlog + bytes) * 8 / rate.
  double x2_deliver (std::uint64_t pduBytes, double sendTime);

  /// Bytes not yet serialized at time t.
  double backlog_bytes (double t) const;

  double latency_s () const { return m_latency; }
  double datarate_bps () const { return m_rate; }
  std::uint64_t delivered_pdus () const { return m_pdus; }

private:
  double m_latency;
  double m_rate;
  double m_busyUntil = 0.0;
  std::uint64_t m_pdus = 0;
};

} // namespace mcsim::dc
