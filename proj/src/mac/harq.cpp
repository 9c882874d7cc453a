#include "mcsim/mac/harq.hpp"

#include "mcsim/mac/amc.hpp"
#include "mcsim/sim/errors.hpp"

namespace mcsim::mac {

HarqEntity::HarqEntity (HarqConfig config)
  : m_config (config)
{
  if (config.processes < 1 || config.max_attempts < 1)
    {
      throw ConfigError ("HARQ needs at least one process and one attempt");
    }
  m_processes.resize (static_cast<std::size_t> (config.processes));
  for (int i = 0; i < config.processes; ++i)
    {
      m_processes[i].harq_pid = i;
      m_processes[i].max_attempts = config.max_attempts;
    }
}

std::optional<int>
HarqEntity::free_process () const
{
  for (const auto& p : m_processes)
    {
      if (p.state == HarqState::Idle)
        {
          return p.harq_pid;
        }
    }
  return std::nullopt;
}

std::vector<int>
HarqEntity::pending_retx () const
{
  std::vector<int> out;
  for (const auto& p : m_processes)
    {
      if (p.state == HarqState::PendingRetx)
        {
          out.push_back (p.harq_pid);
        }
    }
  return out;
}

void
HarqEntity::start (const Dci& dci, std::uint64_t tbHandle)
{
  auto& p = m_processes.at (dci.harq_pid);
  if (p.state != HarqState::Idle)
    {
      throw ConfigError ("HARQ process " + std::to_string (dci.harq_pid) + " is busy");
    }
  p.state = HarqState::AwaitingFeedback;
  p.attempts = 1;
  p.pending_tb = dci.tb_size_bytes;
  p.dci = dci;
  p.tb_handle = tbHandle;
}

void
HarqEntity::retransmit (int pid)
{
  auto& p = m_processes.at (pid);
  if (p.state != HarqState::PendingRetx)
    {
      throw ConfigError ("HARQ process " + std::to_string (pid) + " has no pending retransmission");
    }
  p.state = HarqState::AwaitingFeedback;
  ++p.attempts;
}

FeedbackResult
HarqEntity::on_feedback (int pid, TbOutcome outcome)
{
  auto& p = m_processes.at (pid);
  if (p.state != HarqState::AwaitingFeedback)
    {
      throw ConfigError ("unexpected HARQ feedback for process " + std::to_string (pid));
    }
  if (outcome == TbOutcome::Ack)
    {
      p = HarqProcess{pid, 0, m_config.max_attempts, 0, HarqState::Idle, {}, 0};
      return FeedbackResult::Delivered;
    }
  if (p.attempts < p.max_attempts)
    {
      p.state = HarqState::PendingRetx;
      return FeedbackResult::Retransmit;
    }
  ++m_drops;
  p = HarqProcess{pid, 0, m_config.max_attempts, 0, HarqState::Idle, {}, 0};
  return FeedbackResult::Dropped;
}

std::vector<std::uint64_t>
HarqEntity::flush ()
{
  std::vector<std::uint64_t> handles;
  for (auto& p : m_processes)
    {
      if (p.state != HarqState::Idle)
        {
          handles.push_back (p.tb_handle);
        }
      p = HarqProcess{p.harq_pid, 0, m_config.max_attempts, 0, HarqState::Idle, {}, 0};
    }
  return handles;
}

TbOutcome
transport_outcome (const Dci& dci, double sinrDb, sim::RngStream& rng)
{
  return rng.uniform () < bler (sinrDb, dci.mcs) ? TbOutcome::Nack : TbOutcome::Ack;
}

} // namespace mcsim::mac
