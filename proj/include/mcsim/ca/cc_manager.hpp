#pragma once

#include "mcsim/channel/carrier.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mcsim::ca {

/// Per-bearer queue report from an RLC entity.
struct BufferStatusReport
{
  int ue_id = 0;
  int bearer_id = 0;
  std::uint64_t tx_queue_bytes = 0;
  std::uint64_t retx_queue_bytes = 0;
  std::uint64_t status_pdu_bytes = 0;

  std::uint64_t total () const { return tx_queue_bytes + retx_queue_bytes + status_pdu_bytes; }
  bool operator== (const BufferStatusReport&) const = default;
};

/// Carriers of one cell that a UE may be scheduled on.
class CarrierSet
{
public:
  CarrierSet () = default;
  /// Throws ConfigError if the list is empty, has duplicate ids or lacks the primary.
  CarrierSet (std::vector<channel::CarrierConfig> carriers, int primaryCcId);

  const std::vector<channel::CarrierConfig>& carriers () const { return m_carriers; }
  int primary_cc_id () const { return m_primary; }
  std::size_t size () const { return m_carriers.size (); }
  bool contains (int ccId) const;
  const channel::CarrierConfig& carrier (int ccId) const;

private:
  std::vector<channel::CarrierConfig> m_carriers; // sorted by cc_id
  int m_primary = 0;
};

using BsrSplit = std::map<int, BufferStatusReport>;

enum class CcManagerPolicy
{
  NoOp,
  RoundRobin,
  BandwidthAware
};

CcManagerPolicy parse_policy (const std::string& name);
std::string to_string (CcManagerPolicy policy);

/// Single-carrier manager: the whole report goes to the only carrier.
BsrSplit split_bsr_noop (const BufferStatusReport& bsr, const CarrierSet& set);

/// Equal split; remainder bytes go one each to the lowest cc_ids.
BsrSplit split_bsr_round_robin (const BufferStatusReport& bsr, const CarrierSet& set);

/// Split proportional to bandwidth with largest-remainder rounding (ties to
/// the lower cc_id). Every byte field is conserved exactly.
BsrSplit split_bsr_bandwidth_aware (const BufferStatusReport& bsr, const CarrierSet& set);

BsrSplit split_bsr (CcManagerPolicy policy, const BufferStatusReport& bsr, const CarrierSet& set);

enum class ControlMessage
{
  Bsr,
  MeasurementReport,
  HarqFeedback,
  RrcReconfiguration
};

std::string to_string (ControlMessage msg);

/// Signaling radio bearers exist only on the primary carrier, so every control
/// message is carried there.
int route_control (ControlMessage msg, const CarrierSet& set);

/// A pending or applied carrier reconfiguration for one UE.
struct Reconfiguration
{
  int ue_id = 0;
  CarrierSet new_set;
  double requested_at = 0.0;
  double effective_at = 0.0;
};

/// Tracks each UE's active carrier set and applies RRC-style add/remove
/// requests after a fixed procedure delay.
class CarrierReconfigurator
{
public:
  explicit CarrierReconfigurator (double delaySeconds = 0.010);

  void attach (int ueId, CarrierSet initial);
  bool attached (int ueId) const { return m_active.count (ueId) != 0; }

  /// Validates and queues the change; it takes effect at atTime + delay.
  /// Throws ConfigError for unattached UEs or a changed/removed primary.
  Reconfiguration reconfigure_carriers (int ueId, const CarrierSet& newSet, double atTime);

  /// Applies queued reconfigurations whose effective time has passed and
  /// returns the set in force for the UE at `now`.
  const CarrierSet& active_set (int ueId, double now);

  double delay () const { return m_delay; }

private:
  double m_delay;
  std::map<int, CarrierSet> m_active;
  std::map<int, std::vector<Reconfiguration>> m_pending;
};

} // namespace mcsim::ca
