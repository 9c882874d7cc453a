#include "mcsim/scenario/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mcsim::scenario {

RunMetrics
run_single (const ScenarioConfig& config, int runIndex, TraceSet traces, RunStats* stats)
{
  Simulation sim (config, run_seed (config, runIndex), traces);
  RunMetrics m = sim.run ();
  if (stats)
    {
      *stats = sim.stats ();
    }
  return m;
}

namespace {

std::ofstream
OpenTrace (const std::filesystem::path& path)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw std::runtime_error ("cannot write trace file " + path.string ());
    }
  return out;
}

RunMetrics
RunToDir (const ScenarioConfig& config, int k, const std::filesystem::path& dir, RunStats* stats)
{
  const std::string prefix = "run-" + std::to_string (k) + "-";
  auto mac = OpenTrace (dir / (prefix + "mac.csv"));
  auto rlc = OpenTrace (dir / (prefix + "rlc.csv"));
  auto dc = OpenTrace (dir / (prefix + "dc.csv"));
  auto ch = OpenTrace (dir / (prefix + "channel.csv"));
  std::ofstream ctrl;
  TraceSet t{&mac, &rlc, &dc, &ch, nullptr};
  if (config.trace.ctrl)
    {
      ctrl = OpenTrace (dir / (prefix + "ctrl.csv"));
      t.ctrl = &ctrl;
    }
  RunMetrics m = run_single (config, k, t, stats);
  for (std::ofstream* f : {&mac, &rlc, &dc, &ch})
    {
      f->flush ();
      if (!*f)
        {
          throw std::runtime_error ("failed writing traces in " + dir.string ());
        }
    }
  return m;
}

} // namespace

std::vector<SummaryRow>
descriptor_rows (const ScenarioConfig& config)
{
  std::vector<SummaryRow> rows;
  if (config.ue.placement == Placement::Fixed && !config.ue.position_m)
    {
      rows.push_back (SummaryRow{"distance_m", config.ue.distance_m, std::nullopt, "m"});
    }
  if (auto r = config.r_cc ())
    {
      rows.push_back (SummaryRow{"r_cc", *r, std::nullopt, "ratio"});
    }
  return rows;
}

ExperimentResult
run_experiment (const ScenarioConfig& config, const std::string& outDir, unsigned threads)
{
  std::filesystem::path dir;
  if (!outDir.empty ())
    {
      dir = outDir;
      std::error_code ec;
      std::filesystem::create_directories (dir, ec);
      if (ec || !std::filesystem::is_directory (dir))
        {
          throw std::runtime_error ("trace directory " + outDir + " is not writable");
        }
    }
  const int n = config.n_runs;
  ExperimentResult result;
  result.runs.resize (static_cast<std::size_t> (n));
  result.stats.resize (static_cast<std::size_t> (n));
  if (threads == 0)
    {
      threads = std::max (1u, std::thread::hardware_concurrency ());
    }
  threads = std::min<unsigned> (threads, static_cast<unsigned> (n));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto worker = [&] {
    while (true)
      {
        const int k = next.fetch_add (1);
        if (k >= n)
          {
            return;
          }
        try
          {
            auto& stats = result.stats[static_cast<std::size_t> (k)];
            result.runs[static_cast<std::size_t> (k)] =
              dir.empty () ? run_single (config, k, {}, &stats) : RunToDir (config, k, dir, &stats);
          }
        catch (...)
          {
            std::lock_guard<std::mutex> lock (failureMutex);
            if (!failure)
              {
                failure = std::current_exception ();
              }
            next = n;
            return;
          }
      }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i)
    {
      pool.emplace_back (worker);
    }
  for (auto& t : pool)
    {
      t.join ();
    }
  if (failure)
    {
      std::rethrow_exception (failure);
    }

  result.summary = aggregate (result.runs);
  for (auto& row : descriptor_rows (config))
    {
      result.summary.push_back (row);
    }
  if (!dir.empty ())
    {
      std::ofstream out (dir / "summary.csv", std::ios::binary);
      if (!out)
        {
          throw std::runtime_error ("cannot write " + (dir / "summary.csv").string ());
        }
      write_summary_csv (out, result.summary);
    }
  return result;
}

} // namespace mcsim::scenario
