#include "mcsim/scenario/metrics.hpp"
#include "mcsim/scenario/trace.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace mcsim::scenario;

TEST_CASE ("summarize examples")
{
  CHECK (summarize ({}, {}, {}, 1.0).s_rlc_bps == 0.0);

  std::vector<RlcRow> rlc{{0, "PDCP", -1, 1, "deliver", 0, 600'000'000}, {5, "PDCP", -1, 1, "deliver", 1, 400'000'000},
                          {6, "MMWAVE", 0, 1, "enq", 2, 999}};
  std::vector<MacRow> mac{{0, 0, 1, 10, 600'000'010, 1, "ACK", 1, "MMWAVE"},
                          {0, 1, 1, 10, 400'000'010, 1, "ACK", 1, "MMWAVE"},
                          {0, 1, 1, 10, 77, 1, "NACK", 1, "MMWAVE"},
                          {0, 0, 1, 5, 1000, 1, "ACK", 0, "LTE"}};
  const auto m = summarize (mac, rlc, {}, 1.0);
  CHECK (m.s_rlc_bps == doctest::Approx (8e9));
  CHECK (m.per_cc_mac_bps.at ("mac_cc0_bps") == doctest::Approx (600'000'010 * 8.0));
  CHECK (m.per_cc_mac_bps.at ("mac_cc1_bps") == doctest::Approx (400'000'010 * 8.0));
  CHECK (m.per_cc_mac_bps.at ("mac_lte_cc0_bps") == doctest::Approx (8000.0));
  double macSum = 0;
  for (const auto& [k, v] : m.per_cc_mac_bps)
    {
      macSum += v;
    }
  CHECK (macSum >= m.s_rlc_bps);
}

TEST_CASE ("summarize: handover count and fallback fraction")
{
  std::vector<DcRow> dc{{100'000, 1, "FALLBACK", "outage"}, {300'000, 1, "RECOVERY", "cell1"},
                        {500'000, 1, "HO_DONE", "cell2"},   {800'000, 1, "FALLBACK", "outage"},
                        {400'000, 1, "HO_TRIGGER", "cell2"}};
  const auto m = summarize ({}, {}, dc, 1.0);
  CHECK (m.handover_count == 1);
  CHECK (m.fallback_time_fraction == doctest::Approx (0.4));
}

TEST_CASE ("summarize does not depend on row order")
{
  std::vector<RlcRow> rlc;
  std::vector<MacRow> mac;
  for (int i = 0; i < 50; ++i)
    {
      rlc.push_back ({i * 10, "PDCP", -1, 1, "deliver", std::uint64_t (i), std::uint64_t (100 + i)});
      mac.push_back ({i * 10, i % 2, 1, 3, std::uint64_t (200 + i), 1, i % 7 ? "ACK" : "NACK", 1, "MMWAVE"});
    }
  const auto a = summarize (mac, rlc, {}, 0.5);
  std::reverse (rlc.begin (), rlc.end ());
  std::reverse (mac.begin (), mac.end ());
  const auto b = summarize (mac, rlc, {}, 0.5);
  CHECK (a.rows () == b.rows ());
}

TEST_CASE ("malformed trace line names the line")
{
  std::istringstream in (std::string (kMacHeader) + "\n0,0,1,3,100,1,ACK,1,MMWAVE\n5,zero,1,3,100,1,ACK,1,MMWAVE\n");
  try
    {
      read_mac_trace (in, "run-0-mac.csv");
      FAIL ("accepted");
    }
  catch (const TraceError& e)
    {
      CHECK (e.line () == 3);
      CHECK (std::string (e.what ()).find ("run-0-mac.csv") != std::string::npos);
    }
}

TEST_CASE ("trace rows round-trip")
{
  std::ostringstream out;
  out << kRlcHeader << "\n";
  const RlcRow row{1234, "MMWAVE", 1, 1, "fwd", 77, 1500};
  write_row (out, row);
  std::istringstream in (out.str ());
  const auto rows = read_rlc_trace (in);
  REQUIRE (rows.size () == 1);
  CHECK (rows[0].time_us == 1234);
  CHECK (rows[0].event == "fwd");
  CHECK (rows[0].sn == 77);
}

TEST_CASE ("ci95 and aggregation")
{
  CHECK_FALSE (ci95_half_width ({1.0}).has_value ());
  // t(0.975, 4) = 2.7764; sd of 1..5 = 1.5811
  CHECK (*ci95_half_width ({1, 2, 3, 4, 5}) == doctest::Approx (2.7764 * 1.5811 / std::sqrt (5.0)).epsilon (1e-4));
  RunMetrics r;
  r.duration_s = 1;
  r.s_rlc_bps = 10;
  const auto one = aggregate ({r});
  REQUIRE_FALSE (one.empty ());
  CHECK (one[0].metric == "s_rlc_bps");
  CHECK_FALSE (one[0].ci95.has_value ());
  const auto two = aggregate ({r, r});
  CHECK (two[0].ci95.value () == 0.0);
  std::ostringstream csv;
  write_summary_csv (csv, one);
  CHECK (csv.str ().rfind ("metric,mean,ci95,unit\ns_rlc_bps,10,,bit/s\n", 0) == 0);
}
