#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "semirecon/domain.hpp"
#include "semirecon/fields.hpp"
#include "semirecon/observation.hpp"

namespace semirecon {

// Semilinear term f with its derivative; `label` is bookkeeping only.
struct NonlinearityFn {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::string label;

  double operator()(double u) const { return value(u); }
  static NonlinearityFn zero();
};

// Throws InputError unless f(0) = 0 and f is nonnegative and nondecreasing on [0, upper].
void check_admissible(const NonlinearityFn& f, double upper);

// Dirichlet data phi(x, t) on the boundary over [0, horizon].
struct DirichletData {
  std::function<double(Point, double)> phi;
  double horizon = 1.0;
  std::string label;

  // Dirichlet data that reproduces a sampled boundary trace: linear in time,
  // interpolated along the boundary by BoundaryNodeSet::interpolate.
  static DirichletData from_trace(BoundaryTrace trace);
};

struct SolveOptions {
  // Extra source term h(x, t) added to the right-hand side; only used for
  // manufactured-solution studies.
  std::function<double(Point, double)> source;
};

// u_t - Lap u + f(u) = h with u(., 0) = 0 and u = phi on the boundary.
// Crank-Nicolson on the diffusion, second-order extrapolation of f, one
// backward-Euler step to start. Dirichlet values overwrite boundary nodes.
SolutionField solve_semilinear(const SpatialGrid& grid, const NonlinearityFn& f,
                               const DirichletData& phi, int steps, const SolveOptions& options = {});

SolutionField solve_linear_heat(const SpatialGrid& grid, const DirichletData& phi, int steps);

// Outward normal derivative from the second-order one-sided stencil. On the
// rectangle the stencil is taken at boundary grid nodes and averaged onto the
// side midpoints of boundary_nodes(grid).
BoundaryTrace neumann_trace(const SolutionField& field);

struct WProblemReport {
  double interior_residual = 0.0;   // max |w_t - Lap w + f(u_f)| at half steps after the first
  double settled_residual = 0.0;    // the same over half steps with t >= settle_time
  double boundary_deviation = 0.0;  // max |w| on boundary nodes
  double initial_deviation = 0.0;   // max |w(., 0)|
};

// Checks that w = u_f - v_phi solves w_t - Lap w = -f(u_f) with zero data.
// The residual uses the forward difference in time and the trapezoid average
// of the spatial terms. Data with phi_t(., 0) != 0 leave an O(dt) layer near
// t = 0, so the second-order contract is checked from settle_time on.
WProblemReport verify_w_problem(const SolutionField& u_f, const SolutionField& v_phi,
                                const NonlinearityFn& f, double settle_time = 0.0);

struct SynthesisParams {
  std::array<int, 2> fine_cells{1024, 0};
  int fine_steps = 2048;
  // Boundary resolution and time steps of the delivered observation.
  std::array<int, 2> coarse_cells{256, 0};
  int coarse_steps = 512;
};

// Fine-grid solve, Neumann trace, optional Gaussian noise with standard
// deviation eta * max|flux|, then subsampling onto the coarse boundary nodes
// and time grid.
ObservedData synthesize_observation(const DomainSpec& domain, const NonlinearityFn& f,
                                    const DirichletData& phi, const SynthesisParams& params,
                                    double eta, std::uint64_t seed);

// Restriction of a fine boundary trace to a coarser node set and time grid.
BoundaryTrace subsample_trace(const BoundaryTrace& fine, const BoundaryNodeSet& coarse_nodes,
                              const TimeGrid& coarse_time);

}  // namespace semirecon
