#pragma once

#include "mcsim/sim/rng.hpp"

namespace mcsim::scenario {

/// Random-walk state inside a disc of radius bound_radius_m centred at the
/// origin.
struct MobilityState
{
  double x_m = 0.0;
  double y_m = 0.0;
  double speed_mps = 0.0;
  double direction_rad = 0.0;
  double bound_radius_m = 150.0;
  double epoch_s = 1.0;
  double time_to_redraw_s = 0.0; ///< 0: draw a direction on the next step
};

/// Advances the walk by dt. The direction is redrawn uniformly at the start of
/// every epoch; the disc boundary reflects the walker (position mirrored back
/// inside, direction mirrored about the boundary normal).
MobilityState walk_step (const MobilityState& state, double dt, sim::RngStream& rng);

double distance_from_origin (const MobilityState& state);

} // namespace mcsim::scenario
