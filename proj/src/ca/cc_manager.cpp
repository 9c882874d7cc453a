#include "mcsim/ca/cc_manager.hpp"

#include "mcsim/sim/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mcsim::ca {

CarrierSet::CarrierSet (std::vector<channel::CarrierConfig> carriers, int primaryCcId)
  : m_carriers (std::move (carriers)),
    m_primary (primaryCcId)
{
  if (m_carriers.empty ())
    {
      throw ConfigError ("carrier set must not be empty");
    }
  std::sort (m_carriers.begin (), m_carriers.end (),
             [] (const auto& a, const auto& b) { return a.cc_id < b.cc_id; });
  std::set<int> ids;
  for (const auto& c : m_carriers)
    {
      if (!ids.insert (c.cc_id).second)
        {
          throw ConfigError ("duplicate cc_id " + std::to_string (c.cc_id) + " in carrier set");
        }
    }
  if (!ids.count (primaryCcId))
    {
      throw ConfigError ("primary cc" + std::to_string (primaryCcId) + " missing from carrier set");
    }
}

bool
CarrierSet::contains (int ccId) const
{
  return std::any_of (m_carriers.begin (), m_carriers.end (), [ccId] (const auto& c) { return c.cc_id == ccId; });
}

const channel::CarrierConfig&
CarrierSet::carrier (int ccId) const
{
  for (const auto& c : m_carriers)
    {
      if (c.cc_id == ccId)
        {
          return c;
        }
    }
  throw ConfigError ("cc" + std::to_string (ccId) + " not in carrier set");
}

CcManagerPolicy
parse_policy (const std::string& name)
{
  if (name == "noop")
    {
      return CcManagerPolicy::NoOp;
    }
  if (name == "round_robin")
    {
      return CcManagerPolicy::RoundRobin;
    }
  if (name == "bandwidth_aware")
    {
      return CcManagerPolicy::BandwidthAware;
    }
  throw ConfigError ("unknown cc_manager policy '" + name + "' (expected noop, round_robin or bandwidth_aware)");
}

std::string
to_string (CcManagerPolicy policy)
{
  switch (policy)
    {
    case CcManagerPolicy::NoOp:
      return "noop";
    case CcManagerPolicy::RoundRobin:
      return "round_robin";
    case CcManagerPolicy::BandwidthAware:
      return "bandwidth_aware";
    }
  return "?";
}

namespace {

/// Splits one integer quantity by weights, largest remainder first.
std::vector<std::uint64_t>
ApportionLargestRemainder (std::uint64_t total, const std::vector<double>& weights)
{
  const double wsum = std::accumulate (weights.begin (), weights.end (), 0.0);
  const std::size_t n = weights.size ();
  std::vector<std::uint64_t> out (n, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i)
    {
      // long double keeps byte counts up to 2^63 exact enough for the floor.
      const long double exact = static_cast<long double> (total) * weights[i] / wsum;
      const auto floored = static_cast<std::uint64_t> (exact);
      out[i] = floored;
      assigned += floored;
      remainders.emplace_back (static_cast<double> (exact - static_cast<long double> (floored)), i);
    }
  std::stable_sort (remainders.begin (), remainders.end (),
                    [] (const auto& a, const auto& b) { return a.first > b.first; });
  std::uint64_t left = total - assigned;
  for (std::size_t k = 0; left > 0; k = (k + 1) % n)
    {
      ++out[remainders[k].second];
      --left;
    }
  return out;
}

BsrSplit
SplitByWeights (const BufferStatusReport& bsr, const CarrierSet& set, const std::vector<double>& weights)
{
  const auto tx = ApportionLargestRemainder (bsr.tx_queue_bytes, weights);
  const auto retx = ApportionLargestRemainder (bsr.retx_queue_bytes, weights);
  const auto status = ApportionLargestRemainder (bsr.status_pdu_bytes, weights);
  BsrSplit out;
  for (std::size_t i = 0; i < set.size (); ++i)
    {
      BufferStatusReport part = bsr;
      part.tx_queue_bytes = tx[i];
      part.retx_queue_bytes = retx[i];
      part.status_pdu_bytes = status[i];
      out.emplace (set.carriers ()[i].cc_id, part);
    }
  return out;
}

} // namespace

BsrSplit
split_bsr_noop (const BufferStatusReport& bsr, const CarrierSet& set)
{
  if (set.size () != 1)
    {
      throw ConfigError ("noop carrier manager requires exactly one carrier, got " + std::to_string (set.size ()));
    }
  return BsrSplit{{set.carriers ().front ().cc_id, bsr}};
}

BsrSplit
split_bsr_round_robin (const BufferStatusReport& bsr, const CarrierSet& set)
{
  // Equal weights: the largest-remainder pass then degenerates to one extra
  // byte for each of the lowest cc_ids.
  return SplitByWeights (bsr, set, std::vector<double> (set.size (), 1.0));
}

BsrSplit
split_bsr_bandwidth_aware (const BufferStatusReport& bsr, const CarrierSet& set)
{
  std::vector<double> weights;
  for (const auto& c : set.carriers ())
    {
      if (!(c.bandwidth_mhz > 0.0))
        {
          throw ConfigError ("bandwidth-aware split needs positive bandwidths");
        }
      weights.push_back (c.bandwidth_mhz);
    }
  return SplitByWeights (bsr, set, weights);
}

BsrSplit
split_bsr (CcManagerPolicy policy, const BufferStatusReport& bsr, const CarrierSet& set)
{
  switch (policy)
    {
    case CcManagerPolicy::NoOp:
      return split_bsr_noop (bsr, set);
    case CcManagerPolicy::RoundRobin:
      return split_bsr_round_robin (bsr, set);
    case CcManagerPolicy::BandwidthAware:
      return split_bsr_bandwidth_aware (bsr, set);
    }
  throw ConfigError ("unknown policy");
}

std::string
to_string (ControlMessage msg)
{
  switch (msg)
    {
    case ControlMessage::Bsr:
      return "BSR";
    case ControlMessage::MeasurementReport:
      return "MEAS_REPORT";
    case ControlMessage::HarqFeedback:
      return "HARQ_FEEDBACK";
    case ControlMessage::RrcReconfiguration:
      return "RRC_RECONF";
    }
  return "?";
}

int
route_control (ControlMessage /*msg*/, const CarrierSet& set)
{
  return set.primary_cc_id ();
}

CarrierReconfigurator::CarrierReconfigurator (double delaySeconds)
  : m_delay (delaySeconds)
{
  if (!(delaySeconds >= 0.0))
    {
      throw ConfigError ("reconfiguration delay must be >= 0");
    }
}

void
CarrierReconfigurator::attach (int ueId, CarrierSet initial)
{
  m_active[ueId] = std::move (initial);
  m_pending.erase (ueId);
}

Reconfiguration
CarrierReconfigurator::reconfigure_carriers (int ueId, const CarrierSet& newSet, double atTime)
{
  auto it = m_active.find (ueId);
  if (it == m_active.end ())
    {
      throw ConfigError ("reconfiguration for unattached UE " + std::to_string (ueId));
    }
  // Compare against the last queued set so chained requests are checked too.
  const CarrierSet& latest = m_pending[ueId].empty () ? it->second : m_pending[ueId].back ().new_set;
  if (!newSet.contains (latest.primary_cc_id ()))
    {
      throw ConfigError ("reconfiguration would remove the primary carrier cc" +
                         std::to_string (latest.primary_cc_id ()));
    }
  if (newSet.primary_cc_id () != latest.primary_cc_id ())
    {
      throw ConfigError ("the primary carrier cannot change mid-session");
    }
  Reconfiguration r{ueId, newSet, atTime, atTime + m_delay};
  m_pending[ueId].push_back (r);
  return r;
}

const CarrierSet&
CarrierReconfigurator::active_set (int ueId, double now)
{
  auto it = m_active.find (ueId);
  if (it == m_active.end ())
    {
      throw ConfigError ("UE " + std::to_string (ueId) + " not attached");
    }
  auto& queue = m_pending[ueId];
  while (!queue.empty () && queue.front ().effective_at <= now + 1e-12)
    {
      it->second = queue.front ().new_set;
      queue.erase (queue.begin ());
    }
  return it->second;
}

} // namespace mcsim::ca
