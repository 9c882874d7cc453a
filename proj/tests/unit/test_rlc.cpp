#include "mcsim/rlc/rlc_entity.hpp"
#include "mcsim/rlc/rlc_receiver.hpp"
#include "mcsim/sim/errors.hpp"

#include <doctest.h>

using namespace mcsim;
using namespace mcsim::rlc;

namespace {

PdcpPdu
Sdu (std::uint64_t sn, std::uint32_t bytes = 1500)
{
  return PdcpPdu{sn, 1, bytes, 0.0};
}

} // namespace

TEST_CASE ("generate_bsr examples")
{
  RlcEntity um (RlcMode::Um, 1, 1, Leg::Mmwave);
  for (int i = 0; i < 3; ++i)
    {
      um.enqueue (Sdu (i));
    }
  CHECK (um.generate_bsr ().tx_queue_bytes == 4500);
  CHECK (um.generate_bsr ().retx_queue_bytes == 0);

  RlcEntity sm (RlcMode::Sm, 1, 1, Leg::Mmwave);
  CHECK (sm.generate_bsr ().tx_queue_bytes == 10'000'000);

  RlcEntity am (RlcMode::Am, 1, 1, Leg::Mmwave);
  am.enqueue (Sdu (0, 1000));
  am.enqueue (Sdu (1, 1000));
  const auto pdus = am.tx_opportunity (2004);
  REQUIRE (pdus.size () == 2);
  CHECK (am.generate_bsr ().retx_queue_bytes == 0);
  am.on_mac_outcome (pdus[0].pdu_id, false);
  CHECK (am.generate_bsr ().retx_queue_bytes == 1000);
}

TEST_CASE ("tx_opportunity examples")
{
  RlcEntity um (RlcMode::Um, 1, 1, Leg::Mmwave);
  CHECK (um.tx_opportunity (1000).empty ());
  um.enqueue (Sdu (0, 1500));
  const auto p = um.tx_opportunity (1000);
  REQUIRE (p.size () == 1);
  CHECK (p[0].length == 998);
  CHECK (p[0].size_bytes () == 1000);
  CHECK (um.generate_bsr ().tx_queue_bytes == 502);

  RlcEntity sm (RlcMode::Sm, 1, 1, Leg::Mmwave);
  const auto s = sm.tx_opportunity (12345);
  REQUIRE (s.size () == 1);
  CHECK (s[0].size_bytes () == 12345);
  CHECK (s[0].fabricated);
}

TEST_CASE ("am feedback: ack shrinks, nack requeues, duplicate ack is idempotent")
{
  RlcEntity am (RlcMode::Am, 1, 1, Leg::Mmwave);
  am.enqueue (Sdu (0, 500));
  am.enqueue (Sdu (1, 500));
  const auto p = am.tx_opportunity (2000);
  REQUIRE (p.size () == 2);
  auto e = am.on_mac_outcome (p[0].pdu_id, true);
  CHECK (e.completed_sn == std::optional<std::uint64_t> (0));
  CHECK (am.buffered_sdus () == 1);
  e = am.on_mac_outcome (p[0].pdu_id, true);
  CHECK_FALSE (e.known);
  CHECK (am.buffered_sdus () == 1);
  CHECK (am.unknown_feedback () == 1);
  e = am.on_mac_outcome (p[1].pdu_id, false);
  CHECK (e.requeued_bytes == 500);
  // the retransmission is served before anything new
  am.enqueue (Sdu (2, 500));
  const auto again = am.tx_opportunity (502);
  REQUIRE (again.size () == 1);
  CHECK (again[0].sn == 1);
}

TEST_CASE ("um drop loses the sdu")
{
  RlcEntity um (RlcMode::Um, 1, 1, Leg::Mmwave);
  um.enqueue (Sdu (4, 500));
  const auto p = um.tx_opportunity (1000);
  const auto e = um.on_mac_outcome (p[0].pdu_id, false);
  CHECK (e.lost_sn == std::optional<std::uint64_t> (4));
  CHECK (um.buffered_sdus () == 0);
}

TEST_CASE ("handover_forward examples")
{
  SUBCASE ("AM lossless forwards transmitted-unacked as well")
  {
    RlcEntity am (RlcMode::Am, 1, 1, Leg::Mmwave);
    for (int i = 0; i < 5; ++i)
      {
        am.enqueue (Sdu (i, 1000));
      }
    am.tx_opportunity (2 * 1002);
    const auto r = am.handover_forward (ForwardMode::Lossless);
    CHECK (r.forwarded.size () == 5);
    CHECK (r.lost_sns.empty ());
    CHECK (am.buffered_sdus () == 0);
    CHECK (am.in_flight_pdus () == 0);
  }
  SUBCASE ("UM seamless forwards only untransmitted")
  {
    RlcEntity um (RlcMode::Um, 1, 1, Leg::Mmwave);
    for (int i = 0; i < 5; ++i)
      {
        um.enqueue (Sdu (i, 1000));
      }
    um.tx_opportunity (2 * 1002);
    const auto r = um.handover_forward (ForwardMode::Seamless);
    CHECK (r.forwarded.size () == 3);
    CHECK (r.forwarded.front ().sn == 2);
    CHECK (r.lost_sns == std::vector<std::uint64_t>{0, 1});
  }
  SUBCASE ("empty buffers")
  {
    RlcEntity am (RlcMode::Am, 1, 1, Leg::Mmwave);
    CHECK (am.handover_forward (ForwardMode::Lossless).forwarded.empty ());
  }
  SUBCASE ("lossless with UM is a configuration error")
  {
    RlcEntity um (RlcMode::Um, 1, 1, Leg::Mmwave);
    CHECK_THROWS_AS (um.handover_forward (ForwardMode::Lossless), ConfigError);
  }
}

TEST_CASE ("drain_all returns every sdu regardless of mode")
{
  RlcEntity um (RlcMode::Um, 1, 1, Leg::Mmwave);
  for (int i = 0; i < 4; ++i)
    {
      um.enqueue (Sdu (i, 1000));
    }
  um.tx_opportunity (1500);
  CHECK (um.drain_all ().size () == 4);
  CHECK (um.buffered_sdus () == 0);
}

TEST_CASE ("receiver reassembles segments")
{
  RlcEntity um (RlcMode::Um, 1, 1, Leg::Mmwave);
  um.enqueue (Sdu (0, 1500));
  RlcReceiver rx;
  const auto a = um.tx_opportunity (1000);
  const auto b = um.tx_opportunity (1000);
  CHECK_FALSE (rx.receive (a[0]).has_value ());
  const auto done = rx.receive (b[0]);
  REQUIRE (done.has_value ());
  CHECK (done->sn == 0);
  CHECK (done->payload_bytes == 1500);
}
