#include "semirecon/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "semirecon/errors.hpp"

namespace semirecon {

DomainSpec::DomainSpec(DomainKind kind, double lx, double ly) : kind_(kind), lengths_{lx, ly} {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw ConfigError("domain lengths must be finite and strictly positive");
  }
}

DomainSpec DomainSpec::interval(double length) { return {DomainKind::Interval, length, 1.0}; }

DomainSpec DomainSpec::rectangle(double lx, double ly) { return {DomainKind::Rectangle, lx, ly}; }

double DomainSpec::volume() const {
  return kind_ == DomainKind::Interval ? lengths_[0] : lengths_[0] * lengths_[1];
}

double DomainSpec::boundary_measure() const {
  return kind_ == DomainKind::Interval ? 2.0 : 2.0 * (lengths_[0] + lengths_[1]);
}

SpatialGrid::SpatialGrid(const DomainSpec& domain, std::array<int, 2> cells)
    : domain_(domain), cells_(cells), spacing_{0.0, 0.0} {
  const int dim = domain.dimension();
  for (int axis = 0; axis < dim; ++axis) {
    if (cells[static_cast<std::size_t>(axis)] < kMinGridCells) {
      throw ConfigError("grid needs at least " + std::to_string(kMinGridCells) +
                        " cells per axis");
    }
    spacing_[static_cast<std::size_t>(axis)] =
        domain.length(axis) / cells[static_cast<std::size_t>(axis)];
  }
  if (dim == 1) {
    cells_[1] = 0;
  }

  const int nx = nodes_along(0);
  const int ny = nodes_along(1);
  weights_.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  interior_mask_.assign(weights_.size(), 0);

  auto trapezoid = [](int i, int n_cells, double h) {
    return (i == 0 || i == n_cells) ? 0.5 * h : h;
  };
  for (int j = 0; j < ny; ++j) {
    const double wy = dim == 2 ? trapezoid(j, cells_[1], spacing_[1]) : 1.0;
    for (int i = 0; i < nx; ++i) {
      const std::size_t node = index(i, j);
      weights_[node] = trapezoid(i, cells_[0], spacing_[0]) * wy;
      const bool inner_x = i > 0 && i < cells_[0];
      const bool inner_y = dim == 1 || (j > 0 && j < cells_[1]);
      if (inner_x && inner_y) {
        interior_mask_[node] = 1;
        interior_.push_back(node);
      }
    }
  }
}

Point SpatialGrid::point(std::size_t node) const {
  const auto nx = static_cast<std::size_t>(nodes_along(0));
  const auto i = static_cast<double>(node % nx);
  const auto j = static_cast<double>(node / nx);
  return {i * spacing_[0], j * spacing_[1]};
}

std::vector<double> SpatialGrid::sample(const std::function<double(Point)>& fn) const {
  std::vector<double> out(size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = fn(point(n));
  }
  return out;
}

SpatialGrid build_grid(const DomainSpec& domain, int n) { return SpatialGrid(domain, {n, n}); }

SpatialGrid build_grid(const DomainSpec& domain, int nx, int ny) {
  return SpatialGrid(domain, {nx, ny});
}

BoundaryNodeSet::BoundaryNodeSet(const DomainSpec& domain, int mx, int my)
    : domain_(domain), resolution_{mx, my} {
  if (domain.kind() == DomainKind::Interval) {
    resolution_ = {1, 1};
    nodes_.push_back({{0.0, 0.0}, {-1.0, 0.0}, 1.0, 0});
    nodes_.push_back({{domain.length(0), 0.0}, {1.0, 0.0}, 1.0, 1});
    return;
  }
  if (mx < 4 || my < 4) {
    throw ConfigError("rectangle boundary needs at least 4 nodes per side");
  }
  const double lx = domain.length(0);
  const double ly = domain.length(1);
  const double hx = lx / mx;
  const double hy = ly / my;
  for (int i = 0; i < mx; ++i) nodes_.push_back({{(i + 0.5) * hx, 0.0}, {0.0, -1.0}, hx, 0});
  for (int j = 0; j < my; ++j) nodes_.push_back({{lx, (j + 0.5) * hy}, {1.0, 0.0}, hy, 1});
  for (int i = 0; i < mx; ++i) nodes_.push_back({{(i + 0.5) * hx, ly}, {0.0, 1.0}, hx, 2});
  for (int j = 0; j < my; ++j) nodes_.push_back({{0.0, (j + 0.5) * hy}, {-1.0, 0.0}, hy, 3});
}

double BoundaryNodeSet::total_weight() const {
  double sum = 0.0;
  for (const auto& n : nodes_) sum += n.weight;
  return sum;
}

int BoundaryNodeSet::side_count(int side) const {
  if (domain_.kind() == DomainKind::Interval) return 1;
  return (side % 2 == 0) ? resolution_[0] : resolution_[1];
}

std::size_t BoundaryNodeSet::side_offset(int side) const {
  std::size_t offset = 0;
  for (int s = 0; s < side; ++s) offset += static_cast<std::size_t>(side_count(s));
  return offset;
}

double BoundaryNodeSet::along_side(std::span<const double> values, int side, double coord) const {
  const int count = side_count(side);
  const std::size_t offset = side_offset(side);
  const double length = domain_.length(side % 2 == 0 ? 0 : 1);
  const double h = length / count;
  // position in units of midpoint spacing, midpoint k sits at k
  const double r = coord / h - 0.5;
  int k = static_cast<int>(std::floor(r));
  k = std::clamp(k, 0, count - 2);
  const double theta = r - k;
  return (1.0 - theta) * values[offset + static_cast<std::size_t>(k)] +
         theta * values[offset + static_cast<std::size_t>(k) + 1];
}

double BoundaryNodeSet::interpolate(std::span<const double> values, Point p) const {
  if (values.size() != nodes_.size()) {
    throw InputError("boundary sample count does not match node set");
  }
  if (domain_.kind() == DomainKind::Interval) {
    return p.x < 0.5 * domain_.length(0) ? values[0] : values[1];
  }
  const double lx = domain_.length(0);
  const double ly = domain_.length(1);
  const double tol = 1e-12 * std::max(lx, ly);
  double sum = 0.0;
  int hits = 0;
  if (std::abs(p.y) <= tol) { sum += along_side(values, 0, p.x); ++hits; }
  if (std::abs(p.x - lx) <= tol) { sum += along_side(values, 1, p.y); ++hits; }
  if (std::abs(p.y - ly) <= tol) { sum += along_side(values, 2, p.x); ++hits; }
  if (std::abs(p.x) <= tol) { sum += along_side(values, 3, p.y); ++hits; }
  if (hits == 0) {
    throw InputError("point is not on the rectangle boundary");
  }
  return sum / hits;
}

BoundaryNodeSet boundary_nodes(const DomainSpec& domain, int m) { return {domain, m, m}; }

BoundaryNodeSet boundary_nodes(const DomainSpec& domain, int mx, int my) {
  return {domain, mx, my};
}

BoundaryNodeSet boundary_nodes(const SpatialGrid& grid) {
  if (grid.domain().kind() == DomainKind::Interval) return {grid.domain(), 1, 1};
  return {grid.domain(), grid.cells(0), grid.cells(1)};
}

}  // namespace semirecon
