#include "mcsim/scenario/config.hpp"
#include "mcsim/sim/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <string>

using namespace mcsim;
using namespace mcsim::scenario;

namespace {

const std::string kDir = MCSIM_SCENARIO_DIR;

bool
Mentions (const ConfigError& e, const std::string& needle)
{
  return std::any_of (e.violations ().begin (), e.violations ().end (),
                      [&] (const std::string& v) { return v.find (needle) != std::string::npos; });
}

} // namespace

TEST_CASE ("example 1 file parses, two-carrier variants have R_CC = 1")
{
  const auto variants = parse_config_variants (kDir + "/ca-same-bandwidth.json");
  CHECK (variants.size () == 18);
  const auto cfg = parse_config (kDir + "/ca-same-bandwidth.json", "contiguous-2cc+d50");
  REQUIRE (cfg.carriers.size () == 2);
  CHECK (cfg.carriers[0].center_freq_ghz == 39.75);
  CHECK (cfg.carriers[1].center_freq_ghz == 40.25);
  CHECK (cfg.r_cc ().value () == doctest::Approx (1.0));
  CHECK (cfg.ue.distance_m == 50.0);
  CHECK (cfg.channel.los_mode == channel::LosMode::Nlos);
  CHECK (cfg.cells.at (0).antenna_elements == 64);
  CHECK (cfg.ue.antenna_elements == 16);
  CHECK (cfg.cc_manager == ca::CcManagerPolicy::RoundRobin);
  CHECK (parse_config (kDir + "/ca-same-bandwidth.json", "contiguous-2cc-blocked+d100").channel.blockage.per_cc.at (1));
}

TEST_CASE ("example 2 file encodes the bandwidth sweep")
{
  const auto variants = parse_config_variants (kDir + "/ca-diff-bandwidth.json");
  REQUIRE (variants.size () == 3);
  const double expect[] = {0.5, 0.25, 0.125};
  for (int i = 0; i < 3; ++i)
    {
      const auto& c = variants[i].config;
      CHECK (c.r_cc ().value () == doctest::Approx (expect[i]).epsilon (1e-6));
      CHECK (c.carriers[0].bandwidth_mhz + c.carriers[1].bandwidth_mhz == doctest::Approx (1000.0).epsilon (1e-6));
      CHECK (c.carriers[0].low_edge_ghz () >= 39.5 - 1e-9);
      CHECK (c.carriers[1].high_edge_ghz () <= 40.5 + 1e-9);
      CHECK (c.cc_manager == ca::CcManagerPolicy::BandwidthAware);
      CHECK (c.ue.placement == Placement::Uniform);
      CHECK (c.ue.mobility == MobilityModel::RandomWalk);
    }
}

TEST_CASE ("overlapping carriers are rejected")
{
  const std::string text = R"({
    "duration_s": 1, "master_seed": 3, "cc_manager": "round_robin",
    "carriers": [
      {"cc_id": 0, "center_freq_ghz": 39.8, "bandwidth_mhz": 500, "is_primary": true},
      {"cc_id": 1, "center_freq_ghz": 40.2, "bandwidth_mhz": 500}
    ]})";
  try
    {
      parse_config_text (text);
      FAIL ("overlap accepted");
    }
  catch (const ConfigError& e)
    {
      CHECK (Mentions (e, "overlap"));
    }
}

TEST_CASE ("missing seed defaults to 1 with a warning")
{
  const auto c = parse_config_text (R"({"duration_s": 0.5,
    "carriers": [{"cc_id": 0, "center_freq_ghz": 28, "bandwidth_mhz": 100, "is_primary": true}]})");
  CHECK (c.master_seed == 1);
  REQUIRE (c.warnings.size () == 1);
  CHECK (c.warnings[0].find ("master_seed") != std::string::npos);
}

TEST_CASE ("every violation is reported")
{
  try
    {
      parse_config_text (R"({"duration_s": -1, "master_seed": 1, "cc_manager": "fancy", "bogus": 1,
        "carriers": [{"cc_id": 0, "center_freq_ghz": 28, "bandwidth_mhz": 100, "is_primary": true}]})");
      FAIL ("accepted");
    }
  catch (const ConfigError& e)
    {
      CHECK (e.violations ().size () >= 3);
      CHECK (Mentions (e, "duration"));
      CHECK (Mentions (e, "fancy"));
      CHECK (Mentions (e, "bogus"));
    }
}

TEST_CASE ("dual connectivity without an LTE carrier is rejected")
{
  try
    {
      parse_config_text (R"({"duration_s": 1, "master_seed": 1, "rlc_mode": "AM",
        "carriers": [{"cc_id": 0, "center_freq_ghz": 28, "bandwidth_mhz": 100, "is_primary": true}],
        "dc": {"enabled": true}})");
      FAIL ("accepted");
    }
  catch (const ConfigError& e)
    {
      CHECK (Mentions (e, "LTE"));
    }
}

TEST_CASE ("lossless forwarding requires AM")
{
  CHECK_THROWS_AS (parse_config_text (R"({"duration_s": 1, "master_seed": 1, "rlc_mode": "UM",
        "carriers": [{"cc_id": 0, "rat": "LTE", "center_freq_ghz": 2.1, "bandwidth_mhz": 20, "is_primary": true},
                     {"cc_id": 0, "center_freq_ghz": 28, "bandwidth_mhz": 100, "is_primary": true}],
        "dc": {"enabled": true, "forward_mode": "lossless"}})"),
                   ConfigError);
}

TEST_CASE ("the shipped DC scenarios parse")
{
  for (const char* f : {"dc-handover-am.json", "dc-handover-um.json", "dc-fallback.json"})
    {
      const auto c = parse_config (kDir + "/" + f);
      CHECK (c.dc.enabled);
      CHECK (c.carriers_of (channel::Rat::Lte).size () == 1);
    }
  CHECK (parse_config (kDir + "/dc-handover-am.json").effective_forward_mode () == rlc::ForwardMode::Lossless);
  CHECK (parse_config (kDir + "/dc-handover-um.json").effective_forward_mode () == rlc::ForwardMode::Seamless);
}

TEST_CASE ("a multi-variant file needs a variant name")
{
  CHECK_THROWS_AS (parse_config (kDir + "/ca-diff-bandwidth.json"), ConfigError);
  CHECK_THROWS_AS (parse_config (kDir + "/ca-diff-bandwidth.json", "rcc9"), ConfigError);
  CHECK_THROWS (parse_config (kDir + "/does-not-exist.json"));
}
