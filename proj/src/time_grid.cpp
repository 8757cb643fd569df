#include "semirecon/time_grid.hpp"

#include <cmath>

#include "semirecon/errors.hpp"

namespace semirecon {

TimeGrid::TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("time horizon must be positive");
  }
  if (steps < 1) {
    throw ConfigError("time grid needs at least one step");
  }
}

}  // namespace semirecon
