#include "mcsim/scenario/mobility.hpp"
#include "mcsim/sim/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace mcsim;
using namespace mcsim::scenario;

TEST_CASE ("walk_step examples")
{
  sim::RngStream r ("walk", 1);
  MobilityState s;
  s.x_m = 30;
  s.y_m = -20;
  s.speed_mps = 0;
  auto n = walk_step (s, 1.0, r);
  CHECK (n.x_m == s.x_m);
  CHECK (n.y_m == s.y_m);

  s.speed_mps = 1;
  n = walk_step (s, 1.0, r);
  CHECK (std::hypot (n.x_m - s.x_m, n.y_m - s.y_m) == doctest::Approx (1.0));

  CHECK_THROWS_AS (walk_step (s, 0.0, r), ConfigError);
}

TEST_CASE ("walk stays inside the disc")
{
  sim::RngStream r ("walk", 2);
  MobilityState s;
  s.x_m = 149;
  s.speed_mps = 20;
  s.bound_radius_m = 150;
  for (int i = 0; i < 10000; ++i)
    {
      s = walk_step (s, 0.1, r);
      REQUIRE (distance_from_origin (s) <= 150 + 1e-9);
    }
}

TEST_CASE ("direction only changes at epoch boundaries")
{
  sim::RngStream r ("walk", 3);
  MobilityState s;
  s.speed_mps = 1;
  s.epoch_s = 1.0;
  s = walk_step (s, 0.1, r);
  const double dir = s.direction_rad;
  for (int i = 0; i < 8; ++i)
    {
      s = walk_step (s, 0.1, r);
      CHECK (s.direction_rad == dir);
    }
}
