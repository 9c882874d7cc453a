#include "mcsim/rlc/pdcp.hpp"

#include "mcsim/sim/errors.hpp"

namespace mcsim::rlc {

RoutingPolicy
parse_routing_policy (const std::string& name)
{
  if (name == "mmwave_with_fallback")
    {
      return RoutingPolicy::MmwaveWithFallback;
    }
  if (name == "split")
    {
      return RoutingPolicy::Split;
    }
  throw ConfigError ("unknown routing_policy '" + name + "' (expected mmwave_with_fallback or split)");
}

std::string
to_string (RoutingPolicy policy)
{
  return policy == RoutingPolicy::MmwaveWithFallback ? "mmwave_with_fallback" : "split";
}

SplitBearer::SplitBearer (int bearerId, RoutingPolicy policy, double splitWeightMmwave, double reorderingTimeoutS)
  : m_bearerId (bearerId),
    m_policy (policy),
    m_splitWeight (splitWeightMmwave),
    m_reorderTimeout (reorderingTimeoutS)
{
  if (!(splitWeightMmwave >= 0.0 && splitWeightMmwave <= 1.0))
    {
      throw ConfigError ("split weight must lie in [0, 1]");
    }
  if (!(reorderingTimeoutS > 0.0))
    {
      throw ConfigError ("PDCP reordering timeout must be > 0");
    }
}

PdcpPdu
SplitBearer::assign_sn (std::uint32_t payloadBytes, double now)
{
  if (payloadBytes == 0)
    {
      throw ConfigError ("PDCP SDU with zero payload");
    }
  return PdcpPdu{m_nextTxSn++, m_bearerId, payloadBytes, now};
}

std::optional<Leg>
SplitBearer::route (const LegStatus& legs)
{
  const bool mmUsable = legs.mmwave_available && !legs.mmwave_outage;
  std::optional<Leg> chosen;
  if (m_policy == RoutingPolicy::MmwaveWithFallback)
    {
      // A mmWave leg that is only interrupted (handover) holds data at the
      // PDCP; the LTE leg takes over only on outage.
      if (mmUsable)
        {
          chosen = Leg::Mmwave;
        }
      else if (legs.mmwave_outage && legs.lte_available)
        {
          chosen = Leg::Lte;
        }
    }
  else
    {
      const double total = static_cast<double> (m_routedLte + m_routedMmwave);
      const bool preferMm = static_cast<double> (m_routedMmwave) + 0.5 <= m_splitWeight * (total + 1.0);
      if (preferMm && mmUsable)
        {
          chosen = Leg::Mmwave;
        }
      else if (legs.lte_available)
        {
          chosen = Leg::Lte;
        }
      else if (mmUsable)
        {
          chosen = Leg::Mmwave;
        }
    }
  if (chosen)
    {
      ++(*chosen == Leg::Lte ? m_routedLte : m_routedMmwave);
    }
  return chosen;
}

void
SplitBearer::DeliverInOrder (ReorderResult& r)
{
  auto it = m_reorder.begin ();
  while (it != m_reorder.end () && it->first == m_rxExpected)
    {
      r.delivered.push_back (it->second);
      ++m_rxExpected;
      it = m_reorder.erase (it);
    }
}

ReorderResult
SplitBearer::receive (const PdcpPdu& pdu, double now)
{
  ReorderResult r;
  if (pdu.bearer_id != m_bearerId)
    {
      throw ConfigError ("PDCP PDU for bearer " + std::to_string (pdu.bearer_id) + " delivered to bearer " +
                         std::to_string (m_bearerId));
    }
  if (pdu.sn < m_rxExpected || m_reorder.count (pdu.sn))
    {
      ++m_duplicates;
      r.duplicate = true;
      return r;
    }
  m_reorder.emplace (pdu.sn, pdu);
  DeliverInOrder (r);
  if (m_timerStart && m_rxExpected >= m_reorderBoundary)
    {
      m_timerStart.reset ();
    }
  if (!m_timerStart && !m_reorder.empty ())
    {
      m_timerStart = now;
      m_reorderBoundary = m_reorder.rbegin ()->first + 1;
    }
  return r;
}

std::optional<double>
SplitBearer::reorder_deadline () const
{
  if (!m_timerStart)
    {
      return std::nullopt;
    }
  return *m_timerStart + m_reorderTimeout;
}

ReorderResult
SplitBearer::on_reorder_timeout (double now)
{
  ReorderResult r;
  const auto deadline = reorder_deadline ();
  if (!deadline || now + 1e-12 < *deadline)
    {
      return r;
    }
  // everything below the boundary is released, gaps are given up
  auto it = m_reorder.begin ();
  while (m_rxExpected < m_reorderBoundary)
    {
      if (it != m_reorder.end () && it->first == m_rxExpected)
        {
          r.delivered.push_back (it->second);
          it = m_reorder.erase (it);
        }
      else
        {
          r.lost_sns.push_back (m_rxExpected);
        }
      ++m_rxExpected;
    }
  DeliverInOrder (r);
  m_timerStart.reset ();
  if (!m_reorder.empty ())
    {
      m_timerStart = now;
      m_reorderBoundary = m_reorder.rbegin ()->first + 1;
    }
  return r;
}

} // namespace mcsim::rlc
