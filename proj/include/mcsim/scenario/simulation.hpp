#pragma once

#include "mcsim/channel/carrier_channel.hpp"
#include "mcsim/dc/dc_control.hpp"
#include "mcsim/scenario/config.hpp"
#include "mcsim/scenario/metrics.hpp"
#include "mcsim/scenario/trace.hpp"

#include <cstdint>
#include <memory>

namespace mcsim::scenario {

/// Counters kept alongside the traces, for tests and diagnostics.
struct RunStats
{
  std::uint64_t sdus_generated = 0;
  std::uint64_t sns_assigned = 0;
  std::uint64_t sdus_delivered = 0;
  std::uint64_t pdcp_duplicates = 0;
  std::uint64_t pdcp_timer_losses = 0;
  std::uint64_t rlc_losses = 0;          ///< UM SDUs lost to a HARQ drop
  std::uint64_t forward_losses = 0;      ///< transmitted SDUs a seamless forward gave up
  std::uint64_t forwarded_sdus = 0;
  std::uint64_t x2_pdus = 0;
  std::uint64_t handovers_triggered = 0;
  std::uint64_t handovers_done = 0;
  std::uint64_t handovers_aborted = 0;
  std::uint64_t handovers_rejected = 0;
  std::uint64_t fallbacks = 0;
  std::uint64_t recoveries = 0;
  std::uint64_t core_network_messages = 0; ///< stays 0: no entity beyond the anchor is modeled
  std::uint64_t events_processed = 0;
};

/// One runnable simulation of a scenario with a given seed.
class Simulation
{
public:
  Simulation (const ScenarioConfig& config, std::uint64_t seed, TraceSet traces = {});
  ~Simulation ();
  Simulation (const Simulation&) = delete;
  Simulation& operator= (const Simulation&) = delete;

  /// Runs to config.duration_s and returns the in-run metrics. Call once.
  RunMetrics run ();

  std::size_t channel_count () const;
  const channel::CarrierChannel& channel (int cellId, int ccId) const;
  bool has_split_bearer () const;
  std::size_t x2_link_count () const;
  const RunStats& stats () const;
  /// std::nullopt without dual connectivity.
  std::optional<dc::DcState> dc_state () const;

private:
  struct Impl;
  std::unique_ptr<Impl> m_impl;
};

/// Builds the run for `seed` (validated config assumed).
std::unique_ptr<Simulation> build_scenario (const ScenarioConfig& config, std::uint64_t seed, TraceSet traces = {});

} // namespace mcsim::scenario
