#include "semirecon/eigenbasis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <tuple>

#include "semirecon/errors.hpp"

namespace semirecon {

namespace {

double axis_norm(int m, double length) {
  return m == 0 ? std::sqrt(1.0 / length) : std::sqrt(2.0 / length);
}

double axis_lambda(int m, double length) {
  const double k = m * std::numbers::pi / length;
  return k * k;
}

}  // namespace

EigenBasis::EigenBasis(const DomainSpec& domain, std::size_t count) : domain_(domain) {
  if (count == 0) {
    throw ConfigError("eigenbasis needs at least one mode");
  }
  const int limit = static_cast<int>(count);
  if (domain.kind() == DomainKind::Interval) {
    const double l = domain.length(0);
    for (int m = 0; m < limit; ++m) {
      modes_.push_back({axis_lambda(m, l), {m, 0}, axis_norm(m, l)});
    }
    return;
  }

  // Any of the first `count` modes has both wave numbers below `count`.
  const double lx = domain.length(0);
  const double ly = domain.length(1);
  std::vector<Mode> candidates;
  candidates.reserve(static_cast<std::size_t>(limit) * static_cast<std::size_t>(limit));
  for (int m = 0; m < limit; ++m) {
    for (int n = 0; n < limit; ++n) {
      candidates.push_back(
          {axis_lambda(m, lx) + axis_lambda(n, ly), {m, n}, axis_norm(m, lx) * axis_norm(n, ly)});
    }
  }
  // Eigenvalues equal up to rounding are ties; compare on a rounded key so the
  // order is total and reproducible.
  const double scale = 1e-10 * (axis_lambda(1, lx) + axis_lambda(1, ly));
  auto key = [scale](const Mode& m) { return std::llround(m.lambda / scale); };
  std::sort(candidates.begin(), candidates.end(), [&](const Mode& a, const Mode& b) {
    return std::tuple(key(a), a.index[0], a.index[1]) < std::tuple(key(b), b.index[0], b.index[1]);
  });
  candidates.resize(count);
  modes_ = std::move(candidates);
}

double EigenBasis::value(std::size_t k, Point p) const {
  const Mode& m = modes_[k];
  const double pi = std::numbers::pi;
  double v = m.norm;
  if (m.index[0] != 0) v *= std::cos(m.index[0] * pi * p.x / domain_.length(0));
  if (domain_.kind() == DomainKind::Rectangle && m.index[1] != 0) {
    v *= std::cos(m.index[1] * pi * p.y / domain_.length(1));
  }
  return v;
}

void EigenBasis::values(Point p, std::span<double> out) const {
  for (std::size_t k = 0; k < modes_.size(); ++k) out[k] = value(k, p);
}

std::vector<double> EigenBasis::sample(std::size_t k, const SpatialGrid& grid) const {
  return grid.sample([&](Point p) { return value(k, p); });
}

Eigenpair eigenpair(const DomainSpec& domain, std::size_t k) {
  if (k < 1) {
    throw ConfigError("eigenpair index starts at 1");
  }
  auto basis = std::make_shared<EigenBasis>(domain, k);
  const double lambda = basis->lambda(k - 1);
  return {lambda, [basis, k](Point p) { return basis->value(k - 1, p); }};
}

bool resolvable(const EigenBasis& basis, const SpatialGrid& grid) {
  if (!(basis.domain() == grid.domain())) return false;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (int axis = 0; axis < grid.domain().dimension(); ++axis) {
      // 2 * cells / m points per wavelength
      const int m = basis.mode(k).index[static_cast<std::size_t>(axis)];
      if (m > 0 && 2.0 * grid.cells(axis) / m < 8.0) return false;
    }
  }
  return true;
}

OrthonormalityReport verify_orthonormality(const EigenBasis& basis, const SpatialGrid& grid) {
  if (!(basis.domain() == grid.domain())) {
    throw InputError("basis and grid live on different domains");
  }
  const std::size_t count = basis.size();
  std::vector<std::vector<double>> samples(count);
  for (std::size_t k = 0; k < count; ++k) samples[k] = basis.sample(k, grid);

  OrthonormalityReport report;
  report.under_resolved = !resolvable(basis, grid);
  const auto w = grid.weights();
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i; j < count; ++j) {
      double dot = 0.0;
      for (std::size_t n = 0; n < w.size(); ++n) dot += w[n] * samples[i][n] * samples[j][n];
      const double dev = std::abs(dot - (i == j ? 1.0 : 0.0));
      report.max_deviation = std::max(report.max_deviation, dev);
    }
  }
  return report;
}

double laplacian_residual(const EigenBasis& basis, std::size_t k, const SpatialGrid& grid) {
  const auto values = basis.sample(k, grid);
  const double lambda = basis.lambda(k);
  const bool two_d = grid.domain().dimension() == 2;
  const double hx2 = grid.spacing(0) * grid.spacing(0);
  const double hy2 = two_d ? grid.spacing(1) * grid.spacing(1) : 1.0;
  const std::size_t stride = static_cast<std::size_t>(grid.nodes_along(0));
  double worst = 0.0;
  for (std::size_t node : grid.interior_nodes()) {
    double lap = (values[node - 1] - 2.0 * values[node] + values[node + 1]) / hx2;
    if (two_d) {
      lap += (values[node - stride] - 2.0 * values[node] + values[node + stride]) / hy2;
    }
    worst = std::max(worst, std::abs(lap + lambda * values[node]));
  }
  return worst;
}

}  // namespace semirecon
