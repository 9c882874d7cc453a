#include "mcsim/mac/scheduler.hpp"

#include <algorithm>
#include <set>

namespace mcsim::mac {

CarrierScheduler::CarrierScheduler (channel::CarrierConfig carrier, HarqConfig harq)
  : m_carrier (std::move (carrier)),
    m_harqConfig (harq)
{
}

HarqEntity&
CarrierScheduler::harq (int ueId)
{
  auto it = m_harq.find (ueId);
  if (it == m_harq.end ())
    {
      it = m_harq.emplace (ueId, HarqEntity (m_harqConfig)).first;
    }
  return it->second;
}

std::vector<Dci>
CarrierScheduler::schedule_subframe (std::span<const FlowDemand> demand, const std::map<int, double>& sinrByUe)
{
  ++m_subframes;
  std::vector<Dci> grants;
  int budget = m_carrier.data_symbols ();

  // HARQ retransmissions first, in UE order rotated like new data.
  std::vector<int> ues;
  for (const auto& [ue, entity] : m_harq)
    {
      ues.push_back (ue);
    }
  if (!ues.empty ())
    {
      std::rotate (ues.begin (), ues.begin () + static_cast<long> (m_rrOffset % ues.size ()), ues.end ());
    }
  for (int ue : ues)
    {
      const auto& entity = m_harq.at (ue);
      for (int pid : entity.pending_retx ())
        {
          Dci dci = entity.process (pid).dci;
          if (dci.n_symbols > budget)
            {
              continue;
            }
          dci.is_retx = true;
          budget -= dci.n_symbols;
          grants.push_back (dci);
        }
    }

  struct Candidate
  {
    FlowDemand flow;
    McsChoice mcs;
    std::uint64_t bytesPerSymbol;
    int cap;
    int pid;
    int granted = 0;
  };
  std::vector<Candidate> candidates;
  std::map<int, std::set<int>> reserved;
  for (const auto& f : demand)
    {
      if (f.bytes == 0)
        {
          continue;
        }
      auto sinr = sinrByUe.find (f.ue_id);
      if (sinr == sinrByUe.end ())
        {
          continue;
        }
      const McsChoice mcs = select_mcs (sinr->second);
      const std::uint64_t perSymbol = tb_size_bytes (mcs, 1, m_carrier);
      if (perSymbol == 0)
        {
          continue;
        }
      // A flow needs its own idle HARQ process.
      auto& entity = harq (f.ue_id);
      int pid = -1;
      for (int p = 0; p < entity.config ().processes; ++p)
        {
          if (entity.process (p).state == HarqState::Idle && !reserved[f.ue_id].count (p))
            {
              pid = p;
              break;
            }
        }
      if (pid < 0)
        {
          continue;
        }
      reserved[f.ue_id].insert (pid);
      const std::uint64_t need = f.bytes + kGrantHeaderAllowance;
      const int cap = static_cast<int> (
        std::min<std::uint64_t> ((need + perSymbol - 1) / perSymbol, static_cast<std::uint64_t> (m_carrier.data_symbols ())));
      candidates.push_back (Candidate{f, mcs, perSymbol, cap, pid});
    }

  if (!candidates.empty ())
    {
      const std::size_t n = candidates.size ();
      const std::size_t start = m_rrOffset % n;
      bool progress = true;
      while (budget > 0 && progress)
        {
          progress = false;
          for (std::size_t k = 0; k < n && budget > 0; ++k)
            {
              auto& c = candidates[(start + k) % n];
              if (c.granted < c.cap)
                {
                  ++c.granted;
                  --budget;
                  progress = true;
                }
            }
        }
      for (std::size_t k = 0; k < n; ++k)
        {
          const auto& c = candidates[(start + k) % n];
          if (c.granted == 0)
            {
              continue;
            }
          Dci dci;
          dci.cc_id = m_carrier.cc_id;
          dci.ue_id = c.flow.ue_id;
          dci.bearer_id = c.flow.bearer_id;
          dci.n_symbols = c.granted;
          dci.mcs = c.mcs.mcs;
          dci.tb_size_bytes = tb_size_bytes (c.mcs, c.granted, m_carrier);
          dci.is_retx = false;
          dci.harq_pid = c.pid;
          grants.push_back (dci);
        }
    }
  ++m_rrOffset;
  return grants;
}

} // namespace mcsim::mac
