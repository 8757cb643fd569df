#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "semirecon/domain.hpp"
#include "semirecon/time_grid.hpp"

namespace semirecon {

// Scalar field sampled on every grid node at every time node.
class SpaceTimeField {
 public:
  SpaceTimeField(SpatialGrid grid, TimeGrid time);

  static SpaceTimeField sample(const SpatialGrid& grid, const TimeGrid& time,
                               const std::function<double(Point, double)>& fn);

  const SpatialGrid& grid() const { return grid_; }
  const TimeGrid& time() const { return time_; }

  double& at(int j, std::size_t node) { return values_[offset(j) + node]; }
  double at(int j, std::size_t node) const { return values_[offset(j) + node]; }
  std::span<double> slice(int j) { return {values_.data() + offset(j), grid_.size()}; }
  std::span<const double> slice(int j) const { return {values_.data() + offset(j), grid_.size()}; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t offset(int j) const { return static_cast<std::size_t>(j) * grid_.size(); }

  SpatialGrid grid_;
  TimeGrid time_;
  std::vector<double> values_;
};

using SolutionField = SpaceTimeField;

// Scalar function on boundary nodes x time nodes.
class BoundaryTrace {
 public:
  BoundaryTrace(BoundaryNodeSet nodes, TimeGrid time);

  static BoundaryTrace sample(const BoundaryNodeSet& nodes, const TimeGrid& time,
                              const std::function<double(const BoundaryNode&, double)>& fn);

  const BoundaryNodeSet& nodes() const { return nodes_; }
  const TimeGrid& time() const { return time_; }

  double& at(int j, std::size_t b) { return values_[offset(j) + b]; }
  double at(int j, std::size_t b) const { return values_[offset(j) + b]; }
  std::span<double> slice(int j) { return {values_.data() + offset(j), nodes_.size()}; }
  std::span<const double> slice(int j) const {
    return {values_.data() + offset(j), nodes_.size()};
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  // Linear interpolation in time at node b; t must lie in [0, T].
  double interpolate(std::size_t b, double t) const;
  double max_abs() const;

 private:
  std::size_t offset(int j) const { return static_cast<std::size_t>(j) * nodes_.size(); }

  BoundaryNodeSet nodes_;
  TimeGrid time_;
  std::vector<double> values_;
};

}  // namespace semirecon
