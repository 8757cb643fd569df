#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "semirecon/domain.hpp"
#include "semirecon/eigenbasis.hpp"
#include "semirecon/fields.hpp"

namespace semirecon {

struct KernelConfig {
  std::size_t max_modes = 200;
  // Time gap below which the image sum replaces the spectral sum. A value
  // <= 0 selects 2 ln(1/tail_tol) / lambda_max, which keeps the spectral tail
  // below tail_tol^2 at the crossover and below tail_tol at half of it.
  double crossover = 0.0;
  int image_count = 5;
  double tail_tol = 1e-12;
  // Gauss-Legendre nodes per time cell for boundary time integrals.
  int time_nodes = 8;
};

class KernelEvaluator;

// Kernel restricted to a fixed pair of points; cheap to evaluate for many gaps.
class KernelPair {
 public:
  double operator()(double tau) const;

 private:
  friend class KernelEvaluator;
  KernelPair(const KernelEvaluator& ev, Point x, Point y);

  const KernelEvaluator* ev_;
  Point x_;
  Point y_;
  std::vector<double> products_;
};

// Neumann heat kernel U(x,t;y,s) of the domain as a function of tau = t - s.
// Uses the truncated eigenfunction sum for tau >= crossover and the Neumann
// method-of-images Gaussian sum (per-axis product on the rectangle) below it,
// or where the spectral value is too small to be trusted (distant points at
// short gaps).
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const DomainSpec& domain, KernelConfig config = {});

  const DomainSpec& domain() const { return basis_.domain(); }
  const EigenBasis& basis() const { return basis_; }
  const KernelConfig& config() const { return config_; }
  double crossover() const { return crossover_; }

  double value(Point x, Point y, double tau) const;
  double spectral(Point x, Point y, double tau) const;
  double images(Point x, Point y, double tau) const;
  KernelPair pair(Point x, Point y) const { return {*this, x, y}; }

  // Number of leading basis modes a grid can represent without aliasing.
  std::size_t modal_limit(const SpatialGrid& grid) const;

 private:
  friend class KernelPair;
  double spectral_sum(std::span<const double> products, double tau) const;
  double images_axis(double x, double y, double tau, double length) const;
  double images_product(Point x, Point y, double tau) const;

  EigenBasis basis_;
  KernelConfig config_;
  double crossover_;
};

double kernel_value(const KernelEvaluator& ev, Point x, Point y, double tau);

// int_Omega U(x,t;y,s) dy by the grid's trapezoid weights.
double mass(const KernelEvaluator& ev, Point x, double tau, const SpatialGrid& grid);

// int_0^t int_dOmega U(x,t;y,s) g(y,s) dS(y) ds. g is taken piecewise linear in
// time; each time cell is integrated in sigma = sqrt(t - s), which removes
// the (t-s)^(-1/2) singularity of the kernel when x lies on the boundary.
double boundary_propagate(const KernelEvaluator& ev, const BoundaryTrace& g, Point x, double t);

// int_0^t int_Omega U(x,t;y,s) h(y,s) dy ds. The spatial integral is taken in
// the kernel's eigenfunction form: h(., s) is projected on every mode the grid
// resolves and each modal coefficient, piecewise linear in s, is convolved with
// exp(-lambda (t - s)) exactly.
double domain_propagate(const KernelEvaluator& ev, const SpaceTimeField& h, Point x, double t);

}  // namespace semirecon
