#include "mcsim/sim/engine.hpp"
#include "mcsim/sim/errors.hpp"
#include "mcsim/sim/rng.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace mcsim;
using namespace mcsim::sim;

TEST_CASE ("schedule: zero delay at t=1 fires before later same-time events")
{
  EventEngine e;
  std::vector<std::string> order;
  e.schedule (1.0, "a", [&] {
    order.push_back ("a");
    e.schedule (0.0, "b", [&] { order.push_back ("b"); });
  });
  e.schedule (1.0, "c", [&] { order.push_back ("c"); });
  e.run_until (2.0);
  // b is scheduled at 1.0 after c was, so c precedes it
  CHECK (order == std::vector<std::string>{"a", "c", "b"});
}

TEST_CASE ("schedule: delay arithmetic and FIFO tie-break")
{
  EventEngine e;
  double fired = -1;
  e.schedule (100e-6, "x", [&] { fired = e.now (); });
  std::vector<int> order;
  e.schedule (0.5, "A", [&] { order.push_back (1); });
  e.schedule (0.5, "B", [&] { order.push_back (2); });
  e.run_until (1.0);
  CHECK (fired == doctest::Approx (1e-4));
  CHECK (order == std::vector<int>{1, 2});
}

TEST_CASE ("schedule: negative delay rejected")
{
  EventEngine e;
  CHECK_THROWS_AS (e.schedule (-1e-3, "neg", [] {}), ConfigError);
}

TEST_CASE ("run_until examples")
{
  SUBCASE ("empty queue")
  {
    EventEngine e;
    CHECK (e.run_until (1.0) == 0);
    CHECK (e.now () == 1.0);
  }
  SUBCASE ("boundary")
  {
    EventEngine e;
    for (double t : {0.1, 0.2, 0.3})
      {
        e.schedule_at (t, "t", [] {});
      }
    CHECK (e.run_until (0.25) == 2);
    CHECK (e.pending () == 1);
  }
  SUBCASE ("chain of +0.1 until 1.0")
  {
    EventEngine e;
    int k = 0;
    std::function<void ()> step = [&] {
      ++k;
      if (k < 10)
        {
          e.schedule_at (0.1 * (k + 1), "chain", step);
        }
    };
    e.schedule_at (0.1, "chain", step);
    CHECK (e.run_until (1.0) == 10);
  }
}

TEST_CASE ("run_until: handler failure names time and tag")
{
  EventEngine e;
  e.schedule (0.25, "boom", [] { throw std::runtime_error ("bad"); });
  try
    {
      e.run_until (1.0);
      FAIL ("expected SimulationError");
    }
  catch (const SimulationError& err)
    {
      CHECK (err.event_time () == doctest::Approx (0.25));
      CHECK (err.tag () == "boom");
    }
}

TEST_CASE ("clock never goes backwards")
{
  EventEngine e;
  RngStream r ("times", 3);
  double last = -1;
  bool monotone = true;
  for (int i = 0; i < 500; ++i)
    {
      e.schedule (r.uniform (0.0, 1.0), "r", [&] {
        monotone = monotone && e.now () >= last;
        last = e.now ();
      });
    }
  e.run_until (1.0);
  CHECK (monotone);
}

TEST_CASE ("rng_stream: determinism and label independence")
{
  RngStream a ("a", 42), a2 ("a", 42), b ("b", 42);
  bool same = true, differ = false;
  for (int i = 0; i < 1000; ++i)
    {
      const double x = a.uniform ();
      same = same && x == a2.uniform ();
      differ = differ || x != b.uniform ();
    }
  CHECK (same);
  CHECK (differ);
  CHECK (a.draw_count () == 1000);
}

TEST_CASE ("rng_stream: uniform mean over 1e5 samples")
{
  RngStream r ("mean", 7);
  double sum = 0;
  for (int i = 0; i < 100000; ++i)
    {
      sum += r.uniform ();
    }
  CHECK (std::abs (sum / 1e5 - 0.5) < 0.01);
}

TEST_CASE ("rng_stream: different master seeds differ")
{
  CHECK (derive_substream_seed ("x", 1) != derive_substream_seed ("x", 2));
}
