#include <cmath>
#include <vector>

#include "semirecon/errors.hpp"
#include "semirecon/kernels.hpp"
#include "semirecon/quadrature.hpp"

namespace semirecon::parallel {

namespace {

void require_derivatives(const CoefficientSeries& series, const EigenBasis& basis) {
  if (!series.has_derivatives()) {
    throw InputError("series assembly needs differentiated coefficients");
  }
  if (series.modes() > basis.size()) {
    throw InputError("series has more modes than the basis");
  }
}

}  // namespace

BoundaryTrace propagate_boundary(const KernelEvaluator& ev, const BoundaryTrace& g,
                                 const BoundaryNodeSet& targets) {
  if (!(g.nodes().domain() == ev.domain()) || !(targets.domain() == ev.domain())) {
    throw InputError("boundary propagation across different domains");
  }
  const TimeGrid& time = g.time();
  const int steps = time.steps();
  const double dt = time.step();
  const std::size_t lags = time.size();
  const std::size_t n_targets = targets.size();
  const std::size_t n_sources = g.nodes().size();
  const QuadratureRule rule = gauss_legendre(ev.config().time_nodes);

  // lag weights: index (target * n_sources + source) * lags + d, d = 1..steps
  std::vector<double> w_left(n_targets * n_sources * lags, 0.0);
  std::vector<double> w_right(w_left.size(), 0.0);
  const auto pairs = static_cast<long>(n_targets * n_sources);

#pragma omp parallel for schedule(static)
  for (long p = 0; p < pairs; ++p) {
    const auto pu = static_cast<std::size_t>(p);
    const KernelPair kernel =
        ev.pair(targets[pu / n_sources].position, g.nodes()[pu % n_sources].position);
    const std::size_t base = pu * lags;
    for (int d = 1; d <= steps; ++d) {
      const double tau_lo = (d - 1) * dt;
      const double sig_lo = std::sqrt(tau_lo);
      const double sig_hi = std::sqrt(d * dt);
      const double mid = 0.5 * (sig_hi + sig_lo);
      const double half = 0.5 * (sig_hi - sig_lo);
      double left = 0.0;
      double right = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double sigma = mid + half * rule.nodes[q];
        const double tau = sigma * sigma;
        const double common = rule.weights[q] * kernel(tau) * 2.0 * sigma;
        const double frac = (tau - tau_lo) / dt;  // weight of the earlier time node
        left += common * frac;
        right += common * (1.0 - frac);
      }
      w_left[base + static_cast<std::size_t>(d)] = half * left;
      w_right[base + static_cast<std::size_t>(d)] = half * right;
    }
  }

  BoundaryTrace out(targets, time);
#pragma omp parallel for schedule(dynamic, 16)
  for (long jl = 1; jl <= steps; ++jl) {
    const int j = static_cast<int>(jl);
    for (std::size_t a = 0; a < n_targets; ++a) {
      double total = 0.0;
      for (std::size_t b = 0; b < n_sources; ++b) {
        const std::size_t base = (a * n_sources + b) * lags;
        double sum = 0.0;
        for (int d = 1; d <= j; ++d) {
          sum += w_left[base + static_cast<std::size_t>(d)] * g.at(j - d, b) +
                 w_right[base + static_cast<std::size_t>(d)] * g.at(j - d + 1, b);
        }
        total += g.nodes()[b].weight * sum;
      }
      out.at(j, a) = total;
    }
  }
  return out;
}

CoefficientSeries project(const SpaceTimeField& field, const EigenBasis& basis, std::size_t modes) {
  const SpatialGrid& grid = field.grid();
  if (!(grid.domain() == basis.domain()) || modes > basis.size()) {
    throw InputError("projection basis does not match the field");
  }
  std::vector<std::vector<double>> samples(modes);
  for (std::size_t k = 0; k < modes; ++k) samples[k] = basis.sample(k, grid);
  const auto w = grid.weights();

  CoefficientSeries series(modes, field.time());
  const long steps = field.time().steps();
#pragma omp parallel for schedule(static)
  for (long jl = 0; jl <= steps; ++jl) {
    const int j = static_cast<int>(jl);
    const auto row = field.slice(j);
    for (std::size_t k = 0; k < modes; ++k) {
      double c = 0.0;
      for (std::size_t n = 0; n < row.size(); ++n) c += w[n] * row[n] * samples[k][n];
      series.value(k, j) = c;
    }
  }
  return series;
}

CoefficientSeries convolve_modes(const CoefficientSeries& sources, const EigenBasis& basis) {
  if (sources.modes() > basis.size()) {
    throw InputError("series has more modes than the basis");
  }
  const TimeGrid& time = sources.time();
  CoefficientSeries p(sources.modes(), time);
  const auto mode_count = static_cast<long>(sources.modes());
#pragma omp parallel for schedule(static)
  for (long kl = 0; kl < mode_count; ++kl) {
    const auto k = static_cast<std::size_t>(kl);
    const ExponentialWeights w = exponential_weights(basis.lambda(k), time.step());
    for (int j = 0; j < time.steps(); ++j) {
      p.value(k, j + 1) =
          w.decay * p.value(k, j) + w.left * sources.value(k, j) + w.right * sources.value(k, j + 1);
    }
  }
  return p;
}

SpaceTimeField propagate_domain(const KernelEvaluator& ev, const SpaceTimeField& h) {
  const SpatialGrid& grid = h.grid();
  const std::size_t modes = ev.modal_limit(grid);
  const EigenBasis& basis = ev.basis();
  const CoefficientSeries c = project(h, basis, modes);
  const TimeGrid& time = h.time();

  const CoefficientSeries p = convolve_modes(c, basis);

  std::vector<std::vector<double>> samples(modes);
  for (std::size_t k = 0; k < modes; ++k) samples[k] = basis.sample(k, grid);
  SpaceTimeField out(grid, time);
  const long steps = time.steps();
#pragma omp parallel for schedule(static)
  for (long jl = 0; jl <= steps; ++jl) {
    const int j = static_cast<int>(jl);
    auto row = out.slice(j);
    for (std::size_t k = 0; k < modes; ++k) {
      const double pk = p.value(k, j);
      for (std::size_t n = 0; n < row.size(); ++n) row[n] += pk * samples[k][n];
    }
  }
  return out;
}

BoundaryTrace assemble(const CoefficientSeries& series, const EigenBasis& basis,
                       const BoundaryNodeSet& nodes) {
  require_derivatives(series, basis);
  const std::size_t modes = series.modes();
  std::vector<double> mode_values(nodes.size() * modes);
  for (std::size_t b = 0; b < nodes.size(); ++b) {
    for (std::size_t k = 0; k < modes; ++k) {
      mode_values[b * modes + k] = basis.value(k, nodes[b].position);
    }
  }
  BoundaryTrace out(nodes, series.time());
  const long steps = series.time().steps();
#pragma omp parallel for schedule(static)
  for (long jl = 0; jl <= steps; ++jl) {
    const int j = static_cast<int>(jl);
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      double sum = 0.0;
      for (std::size_t k = 0; k < modes; ++k) {
        sum += (series.derivative(k, j) + basis.lambda(k) * series.value(k, j)) *
               mode_values[b * modes + k];
      }
      out.at(j, b) = sum;
    }
  }
  return out;
}

}  // namespace semirecon::parallel
