#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "semirecon/domain.hpp"

namespace semirecon {

// One Neumann-Laplacian eigenpair. `index` holds the cosine wave numbers per axis.
struct Mode {
  double lambda = 0.0;
  std::array<int, 2> index{0, 0};
  double norm = 1.0;
};

// The first `count` Neumann eigenpairs of the domain, sorted by eigenvalue
// with ties broken by lexicographic mode index. Positions are 0-based here:
// mode 0 is the constant mode with eigenvalue 0.
class EigenBasis {
 public:
  EigenBasis(const DomainSpec& domain, std::size_t count);

  const DomainSpec& domain() const { return domain_; }
  std::size_t size() const { return modes_.size(); }
  const Mode& mode(std::size_t k) const { return modes_[k]; }
  double lambda(std::size_t k) const { return modes_[k].lambda; }

  double value(std::size_t k, Point p) const;
  // All mode values at one point, written into `out` (size() entries).
  void values(Point p, std::span<double> out) const;
  std::vector<double> sample(std::size_t k, const SpatialGrid& grid) const;

 private:
  DomainSpec domain_;
  std::vector<Mode> modes_;
};

struct Eigenpair {
  double lambda;
  std::function<double(Point)> mode;
};

// k-th eigenpair counted from 1, as in the usual mathematical numbering.
Eigenpair eigenpair(const DomainSpec& domain, std::size_t k);

struct OrthonormalityReport {
  double max_deviation = 0.0;
  bool under_resolved = false;
};

// Max |(w_i, w_j)_h - delta_ij| over the whole basis using the grid's
// trapezoid weights. Flags bases whose highest wave number has fewer than
// 8 grid points per wavelength.
OrthonormalityReport verify_orthonormality(const EigenBasis& basis, const SpatialGrid& grid);

// Max over interior nodes of |L_h w_k + lambda_k w_k| with the 3-point (1D)
// or 5-point (2D) discrete Laplacian L_h.
double laplacian_residual(const EigenBasis& basis, std::size_t k, const SpatialGrid& grid);

// True if every mode of the basis has at least 8 points per wavelength on the grid.
bool resolvable(const EigenBasis& basis, const SpatialGrid& grid);

}  // namespace semirecon
