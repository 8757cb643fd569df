#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "semirecon/forward_solver.hpp"
#include "semirecon/reconstruction.hpp"

namespace semirecon {

// Named nonlinearity families:
//   {"family": "zero"}
//   {"family": "linear", "c": c}              f(u) = c u
//   {"family": "power", "c": c, "p": p}       f(u) = c max(u,0)^p, p >= 1
//   {"family": "saturating", "c": c}          f(u) = c u / (1 + u) for u >= 0
// The label of the returned function is the canonical JSON of the selector.
NonlinearityFn make_nonlinearity(const nlohmann::json& selector);

// Dirichlet families phi(x, t) = A * tau(t) * g(x):
//   "time": "linear" (tau = t) | "saturating" (tau = 1 - exp(-rate t))
//   "profile": "constant" (g = 1) | "linear_x" (g = x) | "cosine" (g = (1 + cos(pi x / Lx)) / 2)
DirichletData make_dirichlet(const nlohmann::json& selector, const DomainSpec& domain, double horizon);

struct ConvergenceSpec {
  std::string kind = "space";  // "space" or "time"
  std::string manufactured = "t_sin";  // "t_sin" or "exp_sin"
  int base_cells = 8;
  int base_steps = 64;
  int fixed_cells = 256;   // spatial grid held fixed for time studies
  int fixed_steps = 1024;  // time grid held fixed for space studies
  nlohmann::json f = {{"family", "linear"}, {"c", 1.0}};
};

struct ScenarioConfig {
  nlohmann::json echo;
  DomainSpec domain = DomainSpec::interval(1.0);
  double horizon = 1.0;
  SynthesisParams synthesis;
  nlohmann::json phi;
  nlohmann::json f;
  double noise = 0.0;
  std::uint64_t seed = 0;
  ReconstructionConfig reconstruction;
  std::string output_dir = "out";
  ConvergenceSpec convergence;
};

// Parses and validates a scenario (inverse-crime guard, admissibility of f on
// the sampled range of phi). Throws ConfigError.
ScenarioConfig parse_scenario(const nlohmann::json& j);

struct CurveScore {
  double sup_abs = 0.0;       // max |f_hat - f| over the trusted band
  double relative_linf = 0.0; // sup_abs / max |f|; equals sup_abs when f vanishes
  double relative_l2 = 0.0;
  double scaled_sup = 0.0;    // max |f_hat| / flux_scale
  bool absolute = false;      // true when f vanishes on the band
};

// Compares an estimate with the true nonlinearity on an even sampling of the
// trusted band.
CurveScore score_curve(const CurveEstimate& curve, const NonlinearityFn& truth, double flux_scale,
                       int samples = 400);

double max_dirichlet(const DirichletData& phi, const DomainSpec& domain, int samples = 64);

}  // namespace semirecon
