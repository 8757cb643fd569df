#include "semirecon/fields.hpp"

#include <algorithm>
#include <cmath>

#include "semirecon/errors.hpp"

namespace semirecon {

SpaceTimeField::SpaceTimeField(SpatialGrid grid, TimeGrid time)
    : grid_(std::move(grid)), time_(time), values_(grid_.size() * time_.size(), 0.0) {}

SpaceTimeField SpaceTimeField::sample(const SpatialGrid& grid, const TimeGrid& time,
                                      const std::function<double(Point, double)>& fn) {
  SpaceTimeField field(grid, time);
  for (int j = 0; j <= time.steps(); ++j) {
    const double t = time.time(j);
    auto row = field.slice(j);
    for (std::size_t n = 0; n < grid.size(); ++n) row[n] = fn(grid.point(n), t);
  }
  return field;
}

BoundaryTrace::BoundaryTrace(BoundaryNodeSet nodes, TimeGrid time)
    : nodes_(std::move(nodes)), time_(time), values_(nodes_.size() * time_.size(), 0.0) {}

BoundaryTrace BoundaryTrace::sample(
    const BoundaryNodeSet& nodes, const TimeGrid& time,
    const std::function<double(const BoundaryNode&, double)>& fn) {
  BoundaryTrace trace(nodes, time);
  for (int j = 0; j <= time.steps(); ++j) {
    for (std::size_t b = 0; b < nodes.size(); ++b) trace.at(j, b) = fn(nodes[b], time.time(j));
  }
  return trace;
}

double BoundaryTrace::interpolate(std::size_t b, double t) const {
  if (!time_.covers(t)) {
    throw InputError("boundary trace does not cover the requested time");
  }
  const double r = t / time_.step();
  int j = std::clamp(static_cast<int>(std::floor(r)), 0, time_.steps() - 1);
  const double theta = std::clamp(r - j, 0.0, 1.0);
  return (1.0 - theta) * at(j, b) + theta * at(j + 1, b);
}

double BoundaryTrace::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace semirecon
