#include "mcsim/ca/cc_manager.hpp"
#include "mcsim/sim/errors.hpp"
#include "mcsim/sim/rng.hpp"

#include <doctest.h>

using namespace mcsim;
using namespace mcsim::ca;

namespace {

channel::CarrierConfig
Cc (int id, double bw, bool primary = false)
{
  channel::CarrierConfig c;
  c.cc_id = id;
  c.bandwidth_mhz = bw;
  c.center_freq_ghz = 30 + id;
  c.is_primary = primary;
  return c;
}

BufferStatusReport
Bsr (std::uint64_t tx, std::uint64_t retx = 0, std::uint64_t status = 0)
{
  return BufferStatusReport{1, 1, tx, retx, status};
}

} // namespace

TEST_CASE ("noop split")
{
  CarrierSet one ({Cc (0, 1000, true)}, 0);
  CHECK (split_bsr_noop (Bsr (1000), one).at (0).tx_queue_bytes == 1000);
  CHECK (split_bsr_noop (Bsr (0), one).at (0).tx_queue_bytes == 0);
  CarrierSet two ({Cc (0, 500, true), Cc (1, 500)}, 0);
  CHECK_THROWS_AS (split_bsr_noop (Bsr (1000), two), ConfigError);
}

TEST_CASE ("round-robin split")
{
  CarrierSet two ({Cc (0, 500, true), Cc (1, 500)}, 0);
  auto s = split_bsr_round_robin (Bsr (1000), two);
  CHECK (s.at (0).tx_queue_bytes == 500);
  CHECK (s.at (1).tx_queue_bytes == 500);
  s = split_bsr_round_robin (Bsr (1001), two);
  CHECK (s.at (0).tx_queue_bytes == 501);
  CHECK (s.at (1).tx_queue_bytes == 500);
  CarrierSet three ({Cc (0, 100, true), Cc (1, 100), Cc (2, 100)}, 0);
  s = split_bsr_round_robin (Bsr (10), three);
  CHECK (s.at (0).tx_queue_bytes == 4);
  CHECK (s.at (1).tx_queue_bytes == 3);
  CHECK (s.at (2).tx_queue_bytes == 3);
}

TEST_CASE ("bandwidth-aware split")
{
  auto s = split_bsr_bandwidth_aware (Bsr (1000), CarrierSet ({Cc (0, 800, true), Cc (1, 200)}, 0));
  CHECK (s.at (0).tx_queue_bytes == 800);
  CHECK (s.at (1).tx_queue_bytes == 200);
  s = split_bsr_bandwidth_aware (Bsr (1000), CarrierSet ({Cc (0, 500, true), Cc (1, 500)}, 0));
  CHECK (s.at (0).tx_queue_bytes == 500);
  s = split_bsr_bandwidth_aware (Bsr (100), CarrierSet ({Cc (0, 889, true), Cc (1, 111)}, 0));
  CHECK (s.at (0).tx_queue_bytes == 89);
  CHECK (s.at (1).tx_queue_bytes == 11);
}

TEST_CASE ("split policies conserve every field; equal bandwidth degenerates to round robin")
{
  sim::RngStream r ("bsr", 5);
  for (int k = 0; k < 2000; ++k)
    {
      const int n = 1 + static_cast<int> (r.uniform () * 4);
      std::vector<channel::CarrierConfig> cc;
      std::vector<channel::CarrierConfig> flat;
      for (int i = 0; i < n; ++i)
        {
          cc.push_back (Cc (i, 1 + std::floor (r.uniform () * 999), i == 0));
          flat.push_back (Cc (i, 250, i == 0));
        }
      const CarrierSet set (cc, 0), flatSet (flat, 0);
      const auto b = Bsr (static_cast<std::uint64_t> (r.uniform () * 1e7), static_cast<std::uint64_t> (r.uniform () * 1e4),
                          static_cast<std::uint64_t> (r.uniform () * 10));
      for (auto p : {CcManagerPolicy::RoundRobin, CcManagerPolicy::BandwidthAware})
        {
          const auto s = split_bsr (p, b, set);
          std::uint64_t tx = 0, retx = 0, st = 0;
          for (const auto& [id, part] : s)
            {
              tx += part.tx_queue_bytes;
              retx += part.retx_queue_bytes;
              st += part.status_pdu_bytes;
            }
          REQUIRE (tx == b.tx_queue_bytes);
          REQUIRE (retx == b.retx_queue_bytes);
          REQUIRE (st == b.status_pdu_bytes);
        }
      REQUIRE (split_bsr_bandwidth_aware (b, flatSet) == split_bsr_round_robin (b, flatSet));
    }
}

TEST_CASE ("control messages ride the primary carrier")
{
  CarrierSet p0 ({Cc (0, 500, true), Cc (1, 500)}, 0);
  CarrierSet p1 ({Cc (0, 500), Cc (1, 500, true)}, 1);
  CHECK (route_control (ControlMessage::Bsr, p0) == 0);
  CHECK (route_control (ControlMessage::MeasurementReport, p1) == 1);
  CarrierSet single ({Cc (3, 500, true)}, 3);
  for (auto m : {ControlMessage::Bsr, ControlMessage::HarqFeedback, ControlMessage::RrcReconfiguration})
    {
      CHECK (route_control (m, single) == 3);
    }
}

TEST_CASE ("carrier set validation")
{
  CHECK_THROWS_AS (CarrierSet ({}, 0), ConfigError);
  CHECK_THROWS_AS (CarrierSet ({Cc (0, 500, true), Cc (0, 500)}, 0), ConfigError);
  CHECK_THROWS_AS (CarrierSet ({Cc (1, 500)}, 0), ConfigError);
}

TEST_CASE ("reconfiguration takes effect after the delay and keeps the primary")
{
  CarrierReconfigurator rc (0.010);
  const CarrierSet one ({Cc (0, 500, true)}, 0);
  const CarrierSet two ({Cc (0, 500, true), Cc (1, 500)}, 0);
  rc.attach (1, one);
  const auto ev = rc.reconfigure_carriers (1, two, 1.0);
  CHECK (ev.effective_at == doctest::Approx (1.010));
  CHECK (rc.active_set (1, 1.005).size () == 1);
  CHECK (rc.active_set (1, 1.010).size () == 2);

  // removing cc1 with queued data: the next split puts all demand on cc0
  rc.reconfigure_carriers (1, one, 2.0);
  const auto& after = rc.active_set (1, 2.02);
  const auto s = split_bsr (CcManagerPolicy::RoundRobin, Bsr (5000), after);
  CHECK (s.size () == 1);
  CHECK (s.at (0).tx_queue_bytes == 5000);

  const CarrierSet noPrimary ({Cc (1, 500, true)}, 1);
  CHECK_THROWS_AS (rc.reconfigure_carriers (1, noPrimary, 3.0), ConfigError);
  CHECK_THROWS_AS (rc.reconfigure_carriers (9, one, 3.0), ConfigError);
}
