#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semirecon/coefficients.hpp"
#include "semirecon/eigenbasis.hpp"
#include "semirecon/fields.hpp"
#include "semirecon/forward_solver.hpp"
#include "semirecon/heat_kernel.hpp"
#include "semirecon/observation.hpp"

namespace semirecon {

enum class ExtensionMethod { Harmonic, NormalConstant };

ExtensionMethod parse_extension(const std::string& name);
std::string to_string(ExtensionMethod method);

struct CurveConfig {
  int bins = 32;
  bool monotone = true;
  double q_lo = 0.1;
  double q_hi = 0.9;
};

struct ReconstructionConfig {
  std::size_t modes = 0;  // 0 selects 16 on the interval and 32 on the rectangle
  ExtensionMethod extension = ExtensionMethod::Harmonic;
  bool compare_extensions = false;
  int window = 2;  // half-width of the quadratic least-squares derivative window
  std::array<int, 2> grid_cells{256, 64};
  KernelConfig kernel;
  CurveConfig curve;

  std::size_t mode_count(const DomainSpec& domain) const;
  void validate() const;
};

// Monotone piecewise-linear estimate of f on [0, max phi]. knots[0] = 0 is
// the anchor f(0) = 0.
struct CurveEstimate {
  std::vector<double> knots;
  std::vector<double> values;
  std::vector<std::size_t> counts;
  std::vector<double> spread;  // median absolute deviation within each bin
  double trusted_lo = 0.0;
  double trusted_hi = 0.0;
  double max_phi = 0.0;
  std::vector<int> dropped_bins;
};

struct CurveValue {
  double value = 0.0;
  bool in_trusted_range = false;
  bool clamped = false;
};

struct ReconstructionDiagnostics {
  std::vector<std::string> completed_stages;
  std::vector<double> mode_energies;
  double tail_energy_fraction = 0.0;
  double initial_coefficient_residual = 0.0;  // max_k |a_k(0)|
  double a_min = 0.0;
  double a_max = 0.0;
  double flux_scale = 0.0;                // max |d_nu v_phi|
  double initial_flux_difference = 0.0;   // max |g(., 0)|
  std::optional<double> extension_discrepancy;
  double trusted_lo = 0.0;
  double trusted_hi = 0.0;
  std::vector<int> dropped_bins;
};

struct ReconstructionResult {
  CurveEstimate curve;
  std::optional<CurveEstimate> alternative;  // other extension method, when compared
  ReconstructionDiagnostics diagnostics;
};

class ReconstructionError : public std::runtime_error {
 public:
  ReconstructionError(const std::string& what, ReconstructionDiagnostics partial = {})
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const ReconstructionDiagnostics& partial() const { return partial_; }

 private:
  ReconstructionDiagnostics partial_;
};

struct FluxDifference {
  BoundaryTrace g;            // d_nu u_f - d_nu v_phi
  BoundaryTrace linear_flux;  // d_nu v_phi
};

// Recomputes d_nu v_phi from the observed Dirichlet samples on `grid` and
// subtracts it from the measured flux.
FluxDifference flux_difference(const ObservedData& obs, const SpatialGrid& grid);

// a(x_b, t_j) for every target node and time node of g.
BoundaryTrace compute_a(const BoundaryTrace& g, const KernelEvaluator& kernel,
                        const BoundaryNodeSet& targets);

// Extension of a(., t) into the domain, one time node at a time.
SpaceTimeField extend_a(const BoundaryTrace& a, ExtensionMethod method, const SpatialGrid& grid);

CoefficientSeries project_coefficients(const SpaceTimeField& extended, const EigenBasis& basis,
                                       std::size_t modes);

// Quadratic least-squares fit over 2w+1 samples (shifted inward at the ends).
CoefficientSeries differentiate_coefficients(CoefficientSeries series, int window);

// sum_{k<K} (a'_k(s) + lambda_k a_k(s)) w_k(x); linear in time between nodes.
double assemble_series(const CoefficientSeries& series, const EigenBasis& basis, Point x, double s);

BoundaryTrace assemble_boundary_series(const CoefficientSeries& series, const EigenBasis& basis,
                                       const BoundaryNodeSet& nodes);

struct VolterraOracle {
  CoefficientSeries sources;    // c_k(s) = (f(u_f(., s)), w_k)
  CoefficientSeries responses;  // p_k(t) = int_0^t exp(-lambda_k (t-s)) c_k(s) ds
};

// Ground-truth modal quantities, for verification only.
VolterraOracle oracle_volterra(const SolutionField& u_f, const NonlinearityFn& f,
                               const EigenBasis& basis, std::size_t modes);

// Bin-median aggregation of (phi, F) pairs plus pool-adjacent-violators.
CurveEstimate build_curve(std::span<const double> phi, std::span<const double> values,
                          const CurveConfig& config);

CurveValue evaluate_curve(const CurveEstimate& curve, double u);

ReconstructionResult reconstruct(const ObservedData& obs, const ReconstructionConfig& config);

// Weighted pool-adjacent-violators: closest nondecreasing sequence in the
// weighted least-squares sense.
std::vector<double> pool_adjacent_violators(std::span<const double> values,
                                            std::span<const double> weights);

// Linear-interpolation quantile (type 7) of unsorted samples.
double quantile(std::vector<double> samples, double q);

}  // namespace semirecon
