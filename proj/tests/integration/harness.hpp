#pragma once

#include "mcsim/scenario/config.hpp"
#include "mcsim/scenario/experiment.hpp"
#include "mcsim/scenario/simulation.hpp"
#include "mcsim/scenario/trace.hpp"

#include <sstream>
#include <string>

namespace mcsim::test {

/// Trace text of one run, kept in memory.
struct CapturedRun
{
  std::string mac, rlc, dc, channel, ctrl;
  scenario::RunMetrics metrics;
  scenario::RunStats stats;
};

inline CapturedRun
Capture (const scenario::ScenarioConfig& cfg, int runIndex = 0)
{
  std::ostringstream mac, rlc, dc, channel, ctrl;
  CapturedRun out;
  out.metrics = scenario::run_single (cfg, runIndex, scenario::TraceSet{&mac, &rlc, &dc, &channel, &ctrl}, &out.stats);
  out.mac = mac.str ();
  out.rlc = rlc.str ();
  out.dc = dc.str ();
  out.channel = channel.str ();
  out.ctrl = ctrl.str ();
  return out;
}

template <typename Reader>
auto
Parse (const std::string& text, Reader reader)
{
  std::istringstream in (text);
  return reader (in, "capture");
}

inline std::string
ScenarioPath (const std::string& file)
{
  return std::string (MCSIM_SCENARIO_DIR) + "/" + file;
}

} // namespace mcsim::test
