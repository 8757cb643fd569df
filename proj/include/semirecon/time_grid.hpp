#pragma once

#include <cstddef>

namespace semirecon {

// Uniform time grid t_j = j * T / steps, j = 0..steps.
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps);

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  std::size_t size() const { return static_cast<std::size_t>(steps_) + 1; }
  double step() const { return horizon_ / steps_; }
  double time(int j) const { return j == steps_ ? horizon_ : j * step(); }
  bool covers(double t) const { return t >= 0.0 && t <= horizon_ * (1.0 + 1e-12); }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  int steps_;
};

}  // namespace semirecon
