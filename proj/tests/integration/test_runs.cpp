#include "harness.hpp"

#include "mcsim/mac/amc.hpp"
#include "mcsim/scenario/metrics.hpp"
#include "mcsim/sim/errors.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

using namespace mcsim;
using namespace mcsim::scenario;
using namespace mcsim::test;

namespace {

ScenarioConfig
ShortCa (const std::string& variant, double duration = 0.2)
{
  auto c = parse_config (ScenarioPath ("ca-same-bandwidth.json"), variant);
  c.duration_s = duration;
  return c;
}

} // namespace

TEST_CASE ("summary recomputed from traces equals the in-run metrics")
{
  for (const auto& cfg : {ShortCa ("contiguous-2cc+d100"), parse_config (ScenarioPath ("dc-fallback.json"))})
    {
      const auto run = Capture (cfg);
      const auto re = summarize (Parse (run.mac, read_mac_trace), Parse (run.rlc, read_rlc_trace),
                                 Parse (run.dc, read_dc_trace), cfg.duration_s);
      CHECK (re.rows () == run.metrics.rows ());
    }
}

TEST_CASE ("identical config and seed give byte-identical traces")
{
  const auto cfg = parse_config (ScenarioPath ("dc-handover-um.json"));
  const auto a = Capture (cfg, 2);
  const auto b = Capture (cfg, 2);
  CHECK (a.mac == b.mac);
  CHECK (a.rlc == b.rlc);
  CHECK (a.dc == b.dc);
  CHECK (a.channel == b.channel);
  CHECK (a.ctrl == b.ctrl);
  const auto c = Capture (cfg, 3);
  CHECK (a.mac != c.mac);
}

TEST_CASE ("build_scenario examples")
{
  const auto two = ShortCa ("contiguous-2cc-blocked+d50");
  auto sim = build_scenario (two, 5);
  REQUIRE (sim->channel_count () == 2);
  CHECK (sim->channel (1, 0).fading_stream_label () != sim->channel (1, 1).fading_stream_label ());
  CHECK_FALSE (sim->channel (1, 0).params ().blockage_enabled);
  CHECK (sim->channel (1, 1).params ().blockage_enabled);
  CHECK_FALSE (sim->has_split_bearer ());

  const auto dc = parse_config (ScenarioPath ("dc-handover-am.json"));
  auto dsim = build_scenario (dc, 1);
  CHECK (dsim->has_split_bearer ());
  CHECK (dsim->x2_link_count () >= 1);
}

TEST_CASE ("blockage map on cc1 leaves cc0 permanently unblocked")
{
  auto cfg = ShortCa ("contiguous-2cc-blocked+d50", 1.0);
  cfg.channel.blockage.dynamics = channel::BlockageDynamics{0.05, 0.05};
  const auto run = Capture (cfg);
  bool cc1Blocked = false;
  for (const auto& r : Parse (run.channel, read_channel_trace))
    {
      REQUIRE ((r.cc_id != 0 || r.blocked == 0));
      cc1Blocked = cc1Blocked || (r.cc_id == 1 && r.blocked);
    }
  CHECK (cc1Blocked);
}

TEST_CASE ("per-carrier MAC throughput stays under the capacity bound")
{
  for (const char* v : {"contiguous-2cc+d50", "noncontiguous-2cc+d50", "contiguous-1cc+d50"})
    {
      const auto cfg = ShortCa (v);
      const auto run = Capture (cfg);
      for (const auto& c : cfg.carriers)
        {
          const auto key = mac_metric_key ("MMWAVE", c.cc_id);
          CHECK (run.metrics.per_cc_mac_bps.at (key) <= c.bandwidth_hz () * mac::kMaxSpectralEfficiency);
        }
    }
}

TEST_CASE ("grants fit the symbol budget of every subframe")
{
  const auto cfg = ShortCa ("contiguous-2cc+d100");
  const auto run = Capture (cfg);
  // Every TB on a carrier in one subframe comes from a grant of at most the
  // data symbols, and there is one UE; so per (time, cc) the bytes cannot exceed
  // one full-subframe TB at the top MCS.
  std::map<std::pair<std::int64_t, int>, std::uint64_t> perSubframe;
  for (const auto& r : Parse (run.mac, read_mac_trace))
    {
      perSubframe[{r.time_us, r.cc_id}] += r.tb_bytes;
    }
  const auto cap = mac::tb_size_bytes (mac::McsChoice{mac::kNumMcs - 1, false}, cfg.carriers[0].data_symbols (),
                                       cfg.carriers[0]);
  for (const auto& [k, bytes] : perSubframe)
    {
      REQUIRE (bytes <= cap);
    }
}

TEST_CASE ("control messages only ride primary carriers")
{
  auto cfg = ShortCa ("contiguous-2cc+d50");
  cfg.trace.ctrl = true;
  const auto run = Capture (cfg);
  const auto rows = Parse (run.ctrl, read_ctrl_trace);
  REQUIRE_FALSE (rows.empty ());
  for (const auto& r : rows)
    {
      if (r.path == "air")
        {
          REQUIRE (r.cc_id == 0);
        }
    }
}

TEST_CASE ("carrier reconfiguration applies after the RRC delay")
{
  auto cfg = ShortCa ("contiguous-2cc+d50", 0.5);
  cfg.reconfigurations = {ReconfigEvent{0.1, {0}}, ReconfigEvent{0.3, {0, 1}}};
  const auto run = Capture (cfg);
  std::int64_t firstBack = -1;
  for (const auto& r : Parse (run.mac, read_mac_trace))
    {
      if (r.cc_id != 1 || r.harq_attempt != 1)
        {
          continue;
        }
      REQUIRE_FALSE ((r.time_us >= 110'000 && r.time_us < 310'000));
      if (r.time_us >= 310'000 && firstBack < 0)
        {
          firstBack = r.time_us;
        }
    }
  CHECK (firstBack >= 310'000);
  CHECK (firstBack < 311'000);
}

TEST_CASE ("bandwidth-aware split on a flat channel: MAC ratio tracks bandwidth")
{
  auto cfg = parse_config (ScenarioPath ("ca-diff-bandwidth.json"), "rcc0.25");
  cfg.duration_s = 0.3;
  cfg.channel.fading.enabled = false;
  cfg.ue.placement = Placement::Fixed;
  cfg.ue.distance_m = 60;
  cfg.ue.mobility = MobilityModel::Static;
  const auto run = Capture (cfg);
  const double ratio = run.metrics.per_cc_mac_bps.at ("mac_cc1_bps") / run.metrics.per_cc_mac_bps.at ("mac_cc0_bps");
  const double bw = cfg.carriers[1].bandwidth_mhz / cfg.carriers[0].bandwidth_mhz;
  CHECK (std::abs (ratio / bw - 1.0) <= 0.10);
}

TEST_CASE ("run_experiment writes run traces and summary; single run has no CI")
{
  auto cfg = ShortCa ("contiguous-1cc+d100", 0.05);
  cfg.n_runs = 1;
  const auto dir = std::filesystem::temp_directory_path () / "mcsim-it-exp";
  std::filesystem::remove_all (dir);
  const auto res = run_experiment (cfg, dir.string (), 1);
  for (const char* f : {"run-0-mac.csv", "run-0-rlc.csv", "run-0-dc.csv", "run-0-channel.csv", "summary.csv"})
    {
      CHECK (std::filesystem::exists (dir / f));
    }
  for (const auto& row : res.summary)
    {
      CHECK_FALSE (row.ci95.has_value ());
    }
  std::ifstream in (dir / "summary.csv");
  std::string header;
  std::getline (in, header);
  CHECK (header == "metric,mean,ci95,unit");
  std::filesystem::remove_all (dir);
}

TEST_CASE ("run_experiment: identical seeds give identical summaries; seeds are master + k")
{
  auto cfg = ShortCa ("contiguous-2cc+d150", 0.05);
  cfg.n_runs = 3;
  const auto a = run_experiment (cfg, "", 3);
  const auto b = run_experiment (cfg, "", 1);
  REQUIRE (a.summary.size () == b.summary.size ());
  for (std::size_t i = 0; i < a.summary.size (); ++i)
    {
      CHECK (a.summary[i].mean == b.summary[i].mean);
    }
  CHECK (run_seed (cfg, 2) == cfg.master_seed + 2);
  CHECK (a.runs[1].rows () == run_single (cfg, 1).rows ());
}

TEST_CASE ("run_experiment: unwritable directory is an error")
{
  auto cfg = ShortCa ("contiguous-1cc+d100", 0.01);
  const auto file = std::filesystem::temp_directory_path () / "mcsim-not-a-dir";
  std::ofstream (file) << "x";
  CHECK_THROWS_AS (run_experiment (cfg, (file / "sub").string (), 1), std::runtime_error);
  std::filesystem::remove (file);
}

TEST_CASE ("uniform placement draws positions within [min_distance, d_max]")
{
  auto cfg = parse_config (ScenarioPath ("ca-diff-bandwidth.json"), "rcc0.5");
  cfg.duration_s = 0.002;
  std::set<long> distinct;
  for (int k = 0; k < 30; ++k)
    {
      auto sim = build_scenario (cfg, 100 + k);
      const double d = sim->channel (1, 0).geometry ().distance_2d_m;
      CHECK (d >= cfg.ue.min_distance_m);
      CHECK (d <= cfg.ue.d_max_m);
      distinct.insert (std::lround (d * 1000));
    }
  CHECK (distinct.size () > 20);
}

TEST_CASE ("random walk moves the UE during a run")
{
  auto cfg = parse_config (ScenarioPath ("ca-diff-bandwidth.json"), "rcc0.5");
  cfg.duration_s = 0.5;
  cfg.ue.speed_mps = 50;
  const auto run = Capture (cfg);
  std::set<double> pathlosses;
  for (const auto& r : Parse (run.channel, read_channel_trace))
    {
      pathlosses.insert (r.pathloss_db);
    }
  CHECK (pathlosses.size () > 10);
}
