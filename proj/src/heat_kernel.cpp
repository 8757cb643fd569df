#include "semirecon/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semirecon/errors.hpp"
#include "semirecon/quadrature.hpp"

namespace semirecon {

KernelPair::KernelPair(const KernelEvaluator& ev, Point x, Point y)
    : ev_(&ev), x_(x), y_(y), products_(ev.basis().size()) {
  std::vector<double> wy(products_.size());
  ev.basis().values(x, products_);
  ev.basis().values(y, wy);
  for (std::size_t k = 0; k < products_.size(); ++k) products_[k] *= wy[k];
}

namespace {

// Below this the spectral sum is mostly cancellation error; the image sum is
// accurate there and keeps the kernel positive.
constexpr double kSpectralFloor = 1e-6;

}  // namespace

double KernelPair::operator()(double tau) const {
  if (!(tau > 0.0)) {
    throw InputError("kernel time gap must be positive");
  }
  if (tau >= ev_->crossover()) {
    const double s = ev_->spectral_sum(products_, tau);
    if (s >= kSpectralFloor) return s;
  }
  return ev_->images_product(x_, y_, tau);
}

KernelEvaluator::KernelEvaluator(const DomainSpec& domain, KernelConfig config)
    : basis_(domain, config.max_modes), config_(config), crossover_(config.crossover) {
  if (config.max_modes < 2) {
    throw ConfigError("kernel needs at least two modes");
  }
  if (config.image_count < 1 || config.time_nodes < 1) {
    throw ConfigError("kernel image count and time nodes must be positive");
  }
  if (!(config.tail_tol > 0.0 && config.tail_tol < 1.0)) {
    throw ConfigError("kernel tail tolerance must lie in (0, 1)");
  }
  const double lambda_max = basis_.lambda(basis_.size() - 1);
  if (crossover_ <= 0.0) {
    crossover_ = 2.0 * std::log(1.0 / config.tail_tol) / lambda_max;
  }
  if (std::exp(-lambda_max * crossover_) > config.tail_tol) {
    throw ConfigError("kernel crossover too small for the spectral tail tolerance");
  }
}

double KernelEvaluator::spectral_sum(std::span<const double> products, double tau) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < products.size(); ++k) {
    const double decay = std::exp(-basis_.lambda(k) * tau);
    if (decay < 1e-20) break;
    sum += decay * products[k];
  }
  return sum;
}

double KernelEvaluator::images_axis(double x, double y, double tau, double length) const {
  const double four_tau = 4.0 * tau;
  const double scale = 1.0 / std::sqrt(std::numbers::pi * four_tau);
  double sum = 0.0;
  for (int j = -config_.image_count; j <= config_.image_count; ++j) {
    const double shift = 2.0 * j * length;
    const double d1 = x - y - shift;
    const double d2 = x + y - shift;
    sum += std::exp(-d1 * d1 / four_tau) + std::exp(-d2 * d2 / four_tau);
  }
  return scale * sum;
}

double KernelEvaluator::images_product(Point x, Point y, double tau) const {
  double v = images_axis(x.x, y.x, tau, domain().length(0));
  if (domain().kind() == DomainKind::Rectangle) {
    v *= images_axis(x.y, y.y, tau, domain().length(1));
  }
  return v;
}

double KernelEvaluator::spectral(Point x, Point y, double tau) const {
  std::vector<double> wx(basis_.size());
  std::vector<double> wy(basis_.size());
  basis_.values(x, wx);
  basis_.values(y, wy);
  for (std::size_t k = 0; k < wx.size(); ++k) wx[k] *= wy[k];
  return spectral_sum(wx, tau);
}

double KernelEvaluator::images(Point x, Point y, double tau) const {
  return images_product(x, y, tau);
}

double KernelEvaluator::value(Point x, Point y, double tau) const {
  if (!(tau > 0.0)) {
    throw InputError("kernel time gap must be positive");
  }
  if (tau >= crossover_) {
    const double s = spectral(x, y, tau);
    if (s >= kSpectralFloor) return s;
  }
  return images_product(x, y, tau);
}

std::size_t KernelEvaluator::modal_limit(const SpatialGrid& grid) const {
  if (!(grid.domain() == domain())) {
    throw InputError("grid does not match the kernel's domain");
  }
  std::size_t count = 0;
  for (; count < basis_.size(); ++count) {
    const Mode& m = basis_.mode(count);
    bool ok = m.index[0] < grid.cells(0);
    if (domain().kind() == DomainKind::Rectangle) ok = ok && m.index[1] < grid.cells(1);
    if (!ok) break;
  }
  return count;
}

double kernel_value(const KernelEvaluator& ev, Point x, Point y, double tau) {
  return ev.value(x, y, tau);
}

double mass(const KernelEvaluator& ev, Point x, double tau, const SpatialGrid& grid) {
  if (!(grid.domain() == ev.domain())) {
    throw InputError("grid does not match the kernel's domain");
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    sum += grid.weight(n) * ev.pair(x, grid.point(n))(tau);
  }
  return sum;
}

double boundary_propagate(const KernelEvaluator& ev, const BoundaryTrace& g, Point x, double t) {
  if (!(g.nodes().domain() == ev.domain())) {
    throw InputError("boundary trace does not match the kernel's domain");
  }
  if (!g.time().covers(t)) {
    throw InputError("boundary trace time grid is shorter than the requested time");
  }
  if (t <= 0.0) return 0.0;
  const QuadratureRule rule = gauss_legendre(ev.config().time_nodes);
  const TimeGrid& time = g.time();
  const double dt = time.step();

  double total = 0.0;
  for (std::size_t b = 0; b < g.nodes().size(); ++b) {
    const KernelPair kernel = ev.pair(x, g.nodes()[b].position);
    double node_sum = 0.0;
    for (int i = 0; i < time.steps(); ++i) {
      const double s_lo = time.time(i);
      if (s_lo >= t) break;
      const double s_hi = std::min(time.time(i + 1), t);
      const double sig_lo = std::sqrt(t - s_hi);
      const double sig_hi = std::sqrt(t - s_lo);
      const double mid = 0.5 * (sig_hi + sig_lo);
      const double half = 0.5 * (sig_hi - sig_lo);
      double cell = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double sigma = mid + half * rule.nodes[q];
        const double s = t - sigma * sigma;
        const double theta = (s - s_lo) / dt;
        const double gs = (1.0 - theta) * g.at(i, b) + theta * g.at(i + 1, b);
        cell += rule.weights[q] * kernel(sigma * sigma) * gs * 2.0 * sigma;
      }
      node_sum += half * cell;
    }
    total += g.nodes()[b].weight * node_sum;
  }
  return total;
}

double domain_propagate(const KernelEvaluator& ev, const SpaceTimeField& h, Point x, double t) {
  const SpatialGrid& grid = h.grid();
  if (!(grid.domain() == ev.domain())) {
    throw InputError("field grid does not match the kernel's domain");
  }
  if (!h.time().covers(t)) {
    throw InputError("field time grid is shorter than the requested time");
  }
  if (t <= 0.0) return 0.0;
  const std::size_t modes = ev.modal_limit(grid);
  const EigenBasis& basis = ev.basis();
  std::vector<std::vector<double>> samples(modes);
  for (std::size_t k = 0; k < modes; ++k) samples[k] = basis.sample(k, grid);

  auto coefficient = [&](std::size_t k, int j) {
    const auto row = h.slice(j);
    double c = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) c += grid.weight(n) * row[n] * samples[k][n];
    return c;
  };

  const TimeGrid& time = h.time();
  double total = 0.0;
  for (std::size_t k = 0; k < modes; ++k) {
    const double lambda = basis.lambda(k);
    double acc = 0.0;
    double c_lo = coefficient(k, 0);
    for (int i = 0; i < time.steps(); ++i) {
      const double s_lo = time.time(i);
      if (s_lo >= t) break;
      const double s_full = time.time(i + 1);
      const double c_full = coefficient(k, i + 1);
      const double s_hi = std::min(s_full, t);
      const double c_hi = c_lo + (c_full - c_lo) * (s_hi - s_lo) / (s_full - s_lo);
      const ExponentialWeights w = exponential_weights(lambda, s_hi - s_lo);
      acc += std::exp(-lambda * (t - s_hi)) * (w.left * c_lo + w.right * c_hi);
      c_lo = c_full;
    }
    total += acc * basis.value(k, x);
  }
  return total;
}

}  // namespace semirecon
