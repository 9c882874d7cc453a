#pragma once

#include "mcsim/channel/carrier.hpp"
#include "mcsim/mac/amc.hpp"
#include "mcsim/mac/dci.hpp"
#include "mcsim/mac/harq.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace mcsim::mac {

/// Bytes a flow (UE, bearer) has queued for this carrier, as split by the
/// component-carrier manager.
struct FlowDemand
{
  int ue_id = 0;
  int bearer_id = 0;
  std::uint64_t bytes = 0;
};

/// Header allowance added to a demand when sizing a grant, so a queue of n
/// payload bytes fits in one grant.
inline constexpr std::uint64_t kGrantHeaderAllowance = 2;

/// Round-robin TDMA scheduler for one carrier. Carriers are scheduled
/// independently; this object only sees its own carrier's demand split.
class CarrierScheduler
{
public:
  CarrierScheduler (channel::CarrierConfig carrier, HarqConfig harq = {});

  /// Builds the grants of one subframe. Pending HARQ retransmissions go first
  /// with their original size; remaining data symbols are dealt one at a time
  /// to flows with queued bytes, starting from a position that rotates every
  /// subframe, capped by each flow's demand. HARQ state is not modified:
  /// the caller commits each grant through harq(ue).start()/retransmit().
  std::vector<Dci> schedule_subframe (std::span<const FlowDemand> demand, const std::map<int, double>& sinrByUe);

  HarqEntity& harq (int ueId);
  bool has_harq (int ueId) const { return m_harq.count (ueId) != 0; }
  std::map<int, HarqEntity>& harq_entities () { return m_harq; }

  const channel::CarrierConfig& carrier () const { return m_carrier; }
  std::uint64_t subframes () const { return m_subframes; }

private:
  channel::CarrierConfig m_carrier;
  HarqConfig m_harqConfig;
  std::map<int, HarqEntity> m_harq;
  std::uint64_t m_rrOffset = 0;
  std::uint64_t m_subframes = 0;
};

} // namespace mcsim::mac
