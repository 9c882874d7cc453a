#include "mcsim/mac/amc.hpp"
#include "mcsim/mac/harq.hpp"
#include "mcsim/mac/scheduler.hpp"
#include "mcsim/sim/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace mcsim;
using namespace mcsim::mac;

namespace {

channel::CarrierConfig
Carrier (double bw = 500)
{
  channel::CarrierConfig c;
  c.bandwidth_mhz = bw;
  c.is_primary = true;
  return c;
}

} // namespace

TEST_CASE ("select_mcs clamps and is monotone")
{
  CHECK (select_mcs (-10).zero_rate);
  CHECK (select_mcs (-10).mcs == 0);
  CHECK (select_mcs (40).mcs == kNumMcs - 1);
  CHECK_FALSE (select_mcs (40).zero_rate);
  int prev = -1;
  for (double s = -10; s <= 40; s += 0.01)
    {
      const auto m = select_mcs (s);
      const int v = m.zero_rate ? -1 : m.mcs;
      REQUIRE (v >= prev);
      prev = v;
    }
  CHECK (select_mcs (mcs_threshold_db (7)).mcs == 7);
}

TEST_CASE ("spectral efficiency table")
{
  CHECK (mcs_threshold_db (0) == doctest::Approx (-6.0));
  CHECK (mcs_threshold_db (10) == doctest::Approx (10.0));
  for (int m = 0; m < kNumMcs; ++m)
    {
      const double t = std::pow (10.0, mcs_threshold_db (m) / 10);
      CHECK (spectral_efficiency (m) == doctest::Approx (std::min (0.75 * std::log2 (1 + t), 7.4)));
    }
  CHECK_THROWS_AS (spectral_efficiency (kNumMcs), ConfigError);
}

TEST_CASE ("tb_size_bytes examples")
{
  const auto c = Carrier (500);
  CHECK (tb_size_bytes (4.0, 1, c) == 1040);
  CHECK (tb_size_bytes (McsChoice{0, true}, 5, c) == 0);
  const auto wide = Carrier (1000);
  const auto a = tb_size_bytes (McsChoice{12, false}, 3, c);
  const auto b = tb_size_bytes (McsChoice{12, false}, 3, wide);
  CHECK ((b == 2 * a || b == 2 * a + 1));
  CHECK_THROWS_AS (tb_size_bytes (4.0, 0, c), ConfigError);
}

TEST_CASE ("bler anchors")
{
  for (int m : {0, 5, 20})
    {
      CHECK (bler (mcs_threshold_db (m), m) == doctest::Approx (0.1));
      CHECK (bler (mcs_threshold_db (m) + 15, m) <= 1e-3);
      CHECK (bler (mcs_threshold_db (m) + 1, m) < bler (mcs_threshold_db (m), m));
    }
}

TEST_CASE ("scheduler: one full-buffer user receives every data symbol")
{
  CarrierScheduler s (Carrier ());
  FlowDemand d{1, 1, 10'000'000};
  auto g = s.schedule_subframe (std::span (&d, 1), {{1, 20.0}});
  REQUIRE (g.size () == 1);
  CHECK (g[0].n_symbols == Carrier ().data_symbols ());
  CHECK (g[0].tb_size_bytes == tb_size_bytes (McsChoice{g[0].mcs, false}, g[0].n_symbols, Carrier ()));
}

TEST_CASE ("scheduler: two full-buffer users share symbols evenly")
{
  CarrierScheduler s (Carrier ());
  std::vector<FlowDemand> d{{1, 1, 10'000'000}, {2, 1, 10'000'000}};
  long long sym[3] = {0, 0, 0};
  for (int sf = 0; sf < 1000; ++sf)
    {
      auto g = s.schedule_subframe (d, {{1, 20.0}, {2, 20.0}});
      int total = 0;
      for (const auto& dci : g)
        {
          sym[dci.ue_id] += dci.n_symbols;
          total += dci.n_symbols;
          s.harq (dci.ue_id).start (dci, 0);
          s.harq (dci.ue_id).on_feedback (dci.harq_pid, TbOutcome::Ack);
        }
      REQUIRE (total <= Carrier ().data_symbols ());
    }
  CHECK (std::llabs (sym[1] - sym[2]) <= 1);
}

TEST_CASE ("scheduler: small queue gets exactly one symbol, empty queue no DCI")
{
  CarrierScheduler s (Carrier ());
  std::vector<FlowDemand> d{{1, 1, 100}, {2, 1, 0}};
  auto g = s.schedule_subframe (d, {{1, 20.0}, {2, 20.0}});
  REQUIRE (g.size () == 1);
  CHECK (g[0].ue_id == 1);
  CHECK (g[0].n_symbols == 1);
}

TEST_CASE ("scheduler: pending retransmissions go first with their original size")
{
  CarrierScheduler s (Carrier ());
  FlowDemand d{1, 1, 10'000'000};
  auto first = s.schedule_subframe (std::span (&d, 1), {{1, 20.0}});
  s.harq (1).start (first[0], 7);
  CHECK (s.harq (1).on_feedback (first[0].harq_pid, TbOutcome::Nack) == FeedbackResult::Retransmit);
  auto next = s.schedule_subframe (std::span (&d, 1), {{1, 20.0}});
  REQUIRE (!next.empty ());
  CHECK (next[0].is_retx);
  CHECK (next[0].tb_size_bytes == first[0].tb_size_bytes);
}

TEST_CASE ("harq: drop after max attempts, reported exactly once")
{
  HarqEntity h;
  Dci dci;
  dci.harq_pid = *h.free_process ();
  dci.tb_size_bytes = 1000;
  h.start (dci, 1);
  CHECK (h.on_feedback (dci.harq_pid, TbOutcome::Nack) == FeedbackResult::Retransmit);
  h.retransmit (dci.harq_pid);
  CHECK (h.on_feedback (dci.harq_pid, TbOutcome::Nack) == FeedbackResult::Retransmit);
  h.retransmit (dci.harq_pid);
  CHECK (h.on_feedback (dci.harq_pid, TbOutcome::Nack) == FeedbackResult::Dropped);
  CHECK (h.drops () == 1);
  CHECK (h.process (dci.harq_pid).state == HarqState::Idle);
  CHECK_THROWS_AS (h.on_feedback (dci.harq_pid, TbOutcome::Nack), ConfigError);
  CHECK (h.drops () == 1);
}

TEST_CASE ("transport_outcome follows bler")
{
  sim::RngStream r ("tb", 2);
  Dci dci;
  dci.mcs = 10;
  int nack = 0;
  for (int i = 0; i < 20000; ++i)
    {
      nack += transport_outcome (dci, mcs_threshold_db (10), r) == TbOutcome::Nack;
    }
  CHECK (std::abs (nack / 20000.0 - 0.1) < 0.01);
}
