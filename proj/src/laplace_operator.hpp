#pragma once

// Internal: finite-difference Laplacian on the interior unknowns of a grid.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <span>
#include <vector>

#include "semirecon/domain.hpp"
#include "semirecon/errors.hpp"

namespace semirecon::detail {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Factorization = Eigen::SimplicialLDLT<SparseMatrix>;

// Discrete Laplacian on interior unknowns. Boundary neighbours contribute
// through `boundary_coupling`: (unknown row, boundary node, coefficient).
struct LaplaceOperator {
  SparseMatrix matrix;
  std::vector<long> unknown_of_node;
  std::vector<std::size_t> node_of_unknown;
  struct Coupling {
    long row;
    std::size_t node;
    double coefficient;
  };
  std::vector<Coupling> boundary_coupling;
  std::vector<std::size_t> boundary_nodes;

  explicit LaplaceOperator(const SpatialGrid& grid) {
    const auto interior = grid.interior_nodes();
    unknown_of_node.assign(grid.size(), -1);
    for (std::size_t u = 0; u < interior.size(); ++u) {
      unknown_of_node[interior[u]] = static_cast<long>(u);
      node_of_unknown.push_back(interior[u]);
    }
    for (std::size_t n = 0; n < grid.size(); ++n) {
      if (!grid.is_interior(n)) boundary_nodes.push_back(n);
    }
    const bool two_d = grid.domain().dimension() == 2;
    const double cx = 1.0 / (grid.spacing(0) * grid.spacing(0));
    const double cy = two_d ? 1.0 / (grid.spacing(1) * grid.spacing(1)) : 0.0;
    const std::size_t stride = static_cast<std::size_t>(grid.nodes_along(0));

    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t u = 0; u < interior.size(); ++u) {
      const std::size_t node = interior[u];
      const long row = static_cast<long>(u);
      triplets.emplace_back(row, row, -2.0 * (cx + cy));
      auto link = [&](std::size_t neighbour, double c) {
        const long col = unknown_of_node[neighbour];
        if (col >= 0) {
          triplets.emplace_back(row, col, c);
        } else {
          boundary_coupling.push_back({row, neighbour, c});
        }
      };
      link(node - 1, cx);
      link(node + 1, cx);
      if (two_d) {
        link(node - stride, cy);
        link(node + stride, cy);
      }
    }
    const auto size = static_cast<long>(interior.size());
    matrix.resize(size, size);
    matrix.setFromTriplets(triplets.begin(), triplets.end());
  }

  // Contribution of boundary values to L u on interior unknowns.
  Eigen::VectorXd boundary_term(std::span<const double> node_values) const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(matrix.rows());
    for (const auto& c : boundary_coupling) b[c.row] += c.coefficient * node_values[c.node];
    return b;
  }

  // Factorization of shift * I - scale * L (SPD for shift >= 0, scale > 0).
  std::unique_ptr<Factorization> factor(double scale, double shift = 1.0) const {
    SparseMatrix id(matrix.rows(), matrix.cols());
    id.setIdentity();
    SparseMatrix system = shift * id - scale * matrix;
    auto solver = std::make_unique<Factorization>();
    solver->compute(system);
    if (solver->info() != Eigen::Success) {
      throw NumericalError("failed to factor the diffusion system");
    }
    return solver;
  }
};

}  // namespace semirecon::detail
