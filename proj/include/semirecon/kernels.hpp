#pragma once

// Batch kernels behind the reconstruction pipeline. `parallel` holds the
// OpenMP versions used in production; `reference` holds straightforward serial
// versions kept for testing and benchmarking. Both namespaces expose the same
// signatures and agree to rounding.
//
// The parallel versions only distribute independent outputs, never reductions,
// so results do not depend on the thread count.

#include <cstddef>

#include "semirecon/coefficients.hpp"
#include "semirecon/eigenbasis.hpp"
#include "semirecon/fields.hpp"
#include "semirecon/heat_kernel.hpp"

namespace semirecon {

namespace parallel {

// a(x_b, t_j) = int_0^{t_j} int_dOmega U(x_b,t_j;y,s) g(y,s) dS ds for every
// target node and time node of g. Uses the Toeplitz structure in t_j - s: the
// kernel-times-hat-function integrals are computed once per time lag.
BoundaryTrace propagate_boundary(const KernelEvaluator& ev, const BoundaryTrace& g,
                                 const BoundaryNodeSet& targets);

// int_0^{t_j} int_Omega U h dy ds at every grid node and time node.
SpaceTimeField propagate_domain(const KernelEvaluator& ev, const SpaceTimeField& h);

// (field(., t_j), w_k) by the grid's trapezoid weights for k < modes.
CoefficientSeries project(const SpaceTimeField& field, const EigenBasis& basis, std::size_t modes);

// p_k(t_j) = int_0^{t_j} exp(-lambda_k (t_j - s)) c_k(s) ds with c_k linear
// between time nodes, integrated exactly.
CoefficientSeries convolve_modes(const CoefficientSeries& sources, const EigenBasis& basis);

// sum_k (a'_k + lambda_k a_k) w_k(x_b) at every node and time node.
BoundaryTrace assemble(const CoefficientSeries& series, const EigenBasis& basis,
                       const BoundaryNodeSet& nodes);

}  // namespace parallel

namespace reference {

BoundaryTrace propagate_boundary(const KernelEvaluator& ev, const BoundaryTrace& g,
                                 const BoundaryNodeSet& targets);
SpaceTimeField propagate_domain(const KernelEvaluator& ev, const SpaceTimeField& h);
CoefficientSeries project(const SpaceTimeField& field, const EigenBasis& basis, std::size_t modes);
CoefficientSeries convolve_modes(const CoefficientSeries& sources, const EigenBasis& basis);
BoundaryTrace assemble(const CoefficientSeries& series, const EigenBasis& basis,
                       const BoundaryNodeSet& nodes);

}  // namespace reference

}  // namespace semirecon
