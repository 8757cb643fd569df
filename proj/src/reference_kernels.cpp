#include <cmath>

#include "semirecon/errors.hpp"
#include "semirecon/quadrature.hpp"
#include "semirecon/kernels.hpp"

namespace semirecon::reference {

BoundaryTrace propagate_boundary(const KernelEvaluator& ev, const BoundaryTrace& g,
                                 const BoundaryNodeSet& targets) {
  BoundaryTrace out(targets, g.time());
  for (int j = 1; j <= g.time().steps(); ++j) {
    for (std::size_t a = 0; a < targets.size(); ++a) {
      out.at(j, a) = boundary_propagate(ev, g, targets[a].position, g.time().time(j));
    }
  }
  return out;
}

SpaceTimeField propagate_domain(const KernelEvaluator& ev, const SpaceTimeField& h) {
  SpaceTimeField out(h.grid(), h.time());
  for (int j = 1; j <= h.time().steps(); ++j) {
    for (std::size_t n = 0; n < h.grid().size(); ++n) {
      out.at(j, n) = domain_propagate(ev, h, h.grid().point(n), h.time().time(j));
    }
  }
  return out;
}

CoefficientSeries project(const SpaceTimeField& field, const EigenBasis& basis, std::size_t modes) {
  const SpatialGrid& grid = field.grid();
  if (!(grid.domain() == basis.domain()) || modes > basis.size()) {
    throw InputError("projection basis does not match the field");
  }
  CoefficientSeries series(modes, field.time());
  for (std::size_t k = 0; k < modes; ++k) {
    for (int j = 0; j <= field.time().steps(); ++j) {
      double c = 0.0;
      for (std::size_t n = 0; n < grid.size(); ++n) {
        c += grid.weight(n) * field.at(j, n) * basis.value(k, grid.point(n));
      }
      series.value(k, j) = c;
    }
  }
  return series;
}

CoefficientSeries convolve_modes(const CoefficientSeries& sources, const EigenBasis& basis) {
  const TimeGrid& time = sources.time();
  CoefficientSeries p(sources.modes(), time);
  for (std::size_t k = 0; k < sources.modes(); ++k) {
    const double lambda = basis.lambda(k);
    for (int j = 1; j <= time.steps(); ++j) {
      // direct sum over all earlier cells
      const double t = time.time(j);
      double acc = 0.0;
      for (int i = 0; i < j; ++i) {
        const ExponentialWeights w = exponential_weights(lambda, time.step());
        acc += std::exp(-lambda * (t - time.time(i + 1))) *
               (w.left * sources.value(k, i) + w.right * sources.value(k, i + 1));
      }
      p.value(k, j) = acc;
    }
  }
  return p;
}

BoundaryTrace assemble(const CoefficientSeries& series, const EigenBasis& basis,
                       const BoundaryNodeSet& nodes) {
  if (!series.has_derivatives()) {
    throw InputError("series assembly needs differentiated coefficients");
  }
  BoundaryTrace out(nodes, series.time());
  for (int j = 0; j <= series.time().steps(); ++j) {
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      double sum = 0.0;
      for (std::size_t k = 0; k < series.modes(); ++k) {
        sum += (series.derivative(k, j) + basis.lambda(k) * series.value(k, j)) *
               basis.value(k, nodes[b].position);
      }
      out.at(j, b) = sum;
    }
  }
  return out;
}

}  // namespace semirecon::reference
