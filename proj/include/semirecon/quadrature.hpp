#pragma once

#include <vector>

namespace semirecon {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

// Weights of  int_0^dt exp(-lambda (dt - r)) g(r) dr  for g linear between
// g(0) and g(dt): returns {weight of g(0), weight of g(dt)}. Exact for all
// lambda >= 0, including lambda = 0.
struct ExponentialWeights {
  double left;
  double right;
  double decay;  // exp(-lambda dt)
};
ExponentialWeights exponential_weights(double lambda, double dt);

}  // namespace semirecon
