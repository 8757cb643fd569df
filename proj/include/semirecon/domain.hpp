#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace semirecon {

enum class DomainKind { Interval, Rectangle };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Interval (0, L) or rectangle (0, Lx) x (0, Ly).
class DomainSpec {
 public:
  static DomainSpec interval(double length);
  static DomainSpec rectangle(double lx, double ly);

  DomainKind kind() const { return kind_; }
  int dimension() const { return kind_ == DomainKind::Interval ? 1 : 2; }
  double length(int axis) const { return lengths_[static_cast<std::size_t>(axis)]; }
  double volume() const;
  // Total boundary measure: 2 (counting measure) on the interval, the perimeter otherwise.
  double boundary_measure() const;

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;

 private:
  DomainSpec(DomainKind kind, double lx, double ly);

  DomainKind kind_;
  std::array<double, 2> lengths_;
};

// Uniform node-centred grid on the closed domain. Nodes are stored row-major
// with x fastest; the interval is a single row. Weights are the composite
// trapezoid rule over the closure.
class SpatialGrid {
 public:
  SpatialGrid(const DomainSpec& domain, std::array<int, 2> cells);

  const DomainSpec& domain() const { return domain_; }
  int cells(int axis) const { return cells_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
  int nodes_along(int axis) const { return axis < domain_.dimension() ? cells(axis) + 1 : 1; }

  std::size_t size() const { return weights_.size(); }
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nodes_along(0)) +
           static_cast<std::size_t>(i);
  }
  Point point(std::size_t node) const;
  double weight(std::size_t node) const { return weights_[node]; }
  std::span<const double> weights() const { return weights_; }
  bool is_interior(std::size_t node) const { return interior_mask_[node] != 0; }
  std::span<const std::size_t> interior_nodes() const { return interior_; }

  std::vector<double> sample(const std::function<double(Point)>& fn) const;

  friend bool operator==(const SpatialGrid& a, const SpatialGrid& b) {
    return a.domain_ == b.domain_ && a.cells_ == b.cells_;
  }

 private:
  DomainSpec domain_;
  std::array<int, 2> cells_;
  std::array<double, 2> spacing_;
  std::vector<double> weights_;
  std::vector<char> interior_mask_;
  std::vector<std::size_t> interior_;
};

inline constexpr int kMinGridCells = 4;

SpatialGrid build_grid(const DomainSpec& domain, int n);
SpatialGrid build_grid(const DomainSpec& domain, int nx, int ny);

struct BoundaryNode {
  Point position;
  Point normal;  // outward unit normal
  double weight = 0.0;
  int side = 0;
};

// Boundary quadrature nodes. Interval: the two endpoints (side 0 at x=0,
// side 1 at x=L). Rectangle: midpoint-rule nodes per side, corners excluded;
// sides are 0: y=0, 1: x=Lx, 2: y=Ly, 3: x=0, each ordered by increasing
// coordinate along the side.
class BoundaryNodeSet {
 public:
  BoundaryNodeSet(const DomainSpec& domain, int mx, int my);

  const DomainSpec& domain() const { return domain_; }
  std::size_t size() const { return nodes_.size(); }
  const BoundaryNode& operator[](std::size_t i) const { return nodes_[i]; }
  std::span<const BoundaryNode> nodes() const { return nodes_; }
  double total_weight() const;
  // Nodes per side along the given axis (rectangle only).
  int resolution(int axis) const { return resolution_[static_cast<std::size_t>(axis)]; }
  // First node of a side and its node count.
  std::size_t side_offset(int side) const;
  int side_count(int side) const;

  // Value at a boundary point from per-node samples: nearest endpoint on the
  // interval; piecewise-linear along the side (linear extrapolation past the
  // outermost midpoints) on the rectangle, averaged over sides at corners.
  double interpolate(std::span<const double> values, Point p) const;

  friend bool operator==(const BoundaryNodeSet& a, const BoundaryNodeSet& b) {
    return a.domain_ == b.domain_ && a.resolution_ == b.resolution_;
  }

 private:
  double along_side(std::span<const double> values, int side, double coord) const;

  DomainSpec domain_;
  std::array<int, 2> resolution_;
  std::vector<BoundaryNode> nodes_;
};

BoundaryNodeSet boundary_nodes(const DomainSpec& domain, int m);
BoundaryNodeSet boundary_nodes(const DomainSpec& domain, int mx, int my);
// Boundary nodes matching the cell counts of a grid.
BoundaryNodeSet boundary_nodes(const SpatialGrid& grid);

}  // namespace semirecon
