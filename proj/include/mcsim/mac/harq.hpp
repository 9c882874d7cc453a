#pragma once

#include "mcsim/mac/dci.hpp"
#include "mcsim/sim/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mcsim::mac {

struct HarqConfig
{
  int processes = 8;
  int max_attempts = 3;
  int feedback_delay_subframes = 2;
};

enum class HarqState
{
  Idle,
  AwaitingFeedback,
  PendingRetx
};

struct HarqProcess
{
  int harq_pid = 0;
  int attempts = 0;
  int max_attempts = 3;
  std::uint64_t pending_tb = 0; ///< TB size in bytes, 0 when idle
  HarqState state = HarqState::Idle;
  Dci dci;
  std::uint64_t tb_handle = 0; ///< caller-defined key of the TB payload
};

enum class FeedbackResult
{
  Delivered,
  Retransmit,
  Dropped
};

/// HARQ processes of one UE on one carrier.
class HarqEntity
{
public:
  explicit HarqEntity (HarqConfig config = {});

  std::optional<int> free_process () const;
  std::vector<int> pending_retx () const;

  /// First transmission of a new TB on an idle process.
  void start (const Dci& dci, std::uint64_t tbHandle);
  /// Retransmission of a process in PendingRetx.
  void retransmit (int pid);
  /// ACK frees the process; NACK schedules a retransmission until
  /// max_attempts is reached, then drops the TB exactly once.
  FeedbackResult on_feedback (int pid, TbOutcome outcome);

  /// Discards every process (handover/suspension). Returns the handles of TBs
  /// that were still awaiting feedback or retransmission.
  std::vector<std::uint64_t> flush ();

  const HarqProcess& process (int pid) const { return m_processes.at (pid); }
  const HarqConfig& config () const { return m_config; }
  std::uint64_t drops () const { return m_drops; }

private:
  HarqConfig m_config;
  std::vector<HarqProcess> m_processes;
  std::uint64_t m_drops = 0;
};

/// Samples the decoding outcome: NACK with probability bler(sinr, dci.mcs).
TbOutcome transport_outcome (const Dci& dci, double sinrDb, sim::RngStream& rng);

} // namespace mcsim::mac
