#include "mcsim/scenario/mobility.hpp"

#include "mcsim/sim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mcsim::scenario {

namespace {

void
Reflect (MobilityState& s)
{
  const double r = std::hypot (s.x_m, s.y_m);
  if (r <= s.bound_radius_m)
    {
      return;
    }
  const double nx = s.x_m / r;
  const double ny = s.y_m / r;
  // Mirror the overshoot back inside; an overshoot beyond the diameter is
  // impossible for steps shorter than the disc.
  const double inside = std::max (0.0, 2.0 * s.bound_radius_m - r);
  s.x_m = nx * inside;
  s.y_m = ny * inside;
  const double dx = std::cos (s.direction_rad);
  const double dy = std::sin (s.direction_rad);
  const double dot = dx * nx + dy * ny;
  s.direction_rad = std::atan2 (dy - 2.0 * dot * ny, dx - 2.0 * dot * nx);
}

} // namespace

MobilityState
walk_step (const MobilityState& state, double dt, sim::RngStream& rng)
{
  if (!(dt > 0.0))
    {
      throw ConfigError ("walk_step needs dt > 0");
    }
  MobilityState s = state;
  double left = dt;
  while (left > 0.0)
    {
      if (s.time_to_redraw_s <= 1e-12)
        {
          s.direction_rad = rng.uniform (-std::numbers::pi, std::numbers::pi);
          s.time_to_redraw_s = s.epoch_s;
        }
      const double step = std::min (left, s.time_to_redraw_s);
      const double dist = s.speed_mps * step;
      // Sub-steps keep each move shorter than the disc radius.
      const int pieces = std::max (1, static_cast<int> (std::ceil (dist / (0.5 * s.bound_radius_m))));
      for (int k = 0; k < pieces; ++k)
        {
          s.x_m += dist / pieces * std::cos (s.direction_rad);
          s.y_m += dist / pieces * std::sin (s.direction_rad);
          Reflect (s);
        }
      s.time_to_redraw_s -= step;
      left -= step;
    }
  return s;
}

double
distance_from_origin (const MobilityState& state)
{
  return std::hypot (state.x_m, state.y_m);
}

} // namespace mcsim::scenario
