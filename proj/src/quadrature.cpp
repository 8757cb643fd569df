#include "semirecon/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "semirecon/errors.hpp"

namespace semirecon {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) {
    throw ConfigError("Gauss-Legendre rule needs at least one node");
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rule;
}

ExponentialWeights exponential_weights(double lambda, double dt) {
  const double z = lambda * dt;
  // phi1 = int_0^1 e^{-z u} du, psi = int_0^1 e^{-z u} u du
  double phi1;
  double psi;
  if (z < 0.05) {
    phi1 = 0.0;
    psi = 0.0;
    double term = 1.0;  // (-z)^n / n!
    for (int n = 0; n < 12; ++n) {
      phi1 += term / (n + 1);
      psi += term / (n + 2);
      term *= -z / (n + 1);
    }
  } else {
    const double e = std::exp(-z);
    phi1 = -std::expm1(-z) / z;
    psi = (1.0 - e - z * e) / (z * z);
  }
  // g(r) = g0 (1 - r/dt) + g1 r/dt, kernel e^{-lambda (dt - r)}; with q = dt - r
  // the g1 factor is (1 - q/dt) and the g0 factor is q/dt.
  return {dt * psi, dt * (phi1 - psi), std::exp(-z)};
}

}  // namespace semirecon
