#pragma once

#include "mcsim/rlc/types.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mcsim::rlc {

enum class RoutingPolicy
{
  MmwaveWithFallback,
  Split
};

RoutingPolicy parse_routing_policy (const std::string& name);
std::string to_string (RoutingPolicy policy);

/// Availability of the two legs as seen by the anchor when routing an SDU.
struct LegStatus
{
  bool lte_available = true;
  bool mmwave_available = true;
  bool mmwave_outage = false;
};

struct ReorderResult
{
  std::vector<PdcpPdu> delivered;
  std::vector<std::uint64_t> lost_sns;
  bool duplicate = false;
};

/// One PDCP entity controlling an LTE-leg and a mmWave-leg RLC. The transmit
/// half numbers and routes SDUs; the receive half reorders and delivers them
/// in SN order.
class SplitBearer
{
public:
  SplitBearer (int bearerId, RoutingPolicy policy, double splitWeightMmwave = 0.5,
               double reorderingTimeoutS = 0.100);

  /// Assigns the next SN; numbering is independent of the leg chosen later.
  PdcpPdu assign_sn (std::uint32_t payloadBytes, double now);

  /// Picks the leg for an SDU. Fallback policy: mmWave unless it is flagged in
  /// outage, then LTE. Split policy: smooth weighted alternation over the
  /// usable legs. Returns std::nullopt when no leg can take the SDU now (it
  /// stays at the PDCP).
  std::optional<Leg> route (const LegStatus& legs);

  /// Receive side: buffers out-of-order SNs and releases the in-order prefix.
  /// SNs already delivered or buffered are discarded as duplicates.
  ReorderResult receive (const PdcpPdu& pdu, double now);

  /// Deadline of the running reordering timer, if any.
  std::optional<double> reorder_deadline () const;

  /// Timer expiry: gives up every missing SN below the reordering boundary
  /// (highest SN received + 1 when the timer started), delivers what is
  /// buffered below it plus the in-order run after it, and restarts the timer
  /// if a gap remains.
  /// Calls before the deadline are no-ops.
  ReorderResult on_reorder_timeout (double now);

  int bearer_id () const { return m_bearerId; }
  RoutingPolicy policy () const { return m_policy; }
  std::uint64_t next_tx_sn () const { return m_nextTxSn; }
  std::uint64_t rx_expected_sn () const { return m_rxExpected; }
  std::size_t reorder_buffer_size () const { return m_reorder.size (); }
  std::uint64_t duplicates () const { return m_duplicates; }
  std::uint64_t routed (Leg leg) const { return leg == Leg::Lte ? m_routedLte : m_routedMmwave; }

private:
  void DeliverInOrder (ReorderResult& r);

  int m_bearerId;
  RoutingPolicy m_policy;
  double m_splitWeight;
  double m_reorderTimeout;
  std::uint64_t m_nextTxSn = 0;
  std::uint64_t m_routedLte = 0;
  std::uint64_t m_routedMmwave = 0;
  std::uint64_t m_rxExpected = 0;
  std::map<std::uint64_t, PdcpPdu> m_reorder;
  std::optional<double> m_timerStart;
  std::uint64_t m_reorderBoundary = 0; // highest SN seen + 1 when the timer started
  std::uint64_t m_duplicates = 0;
};

} // namespace mcsim::rlc
