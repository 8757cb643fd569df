#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "semirecon/scenario.hpp"

namespace semirecon {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<" or ">="
};

struct SuiteReport {
  std::string name;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
};

// Known suites, in the order "all" runs them.
const std::vector<std::string>& suite_names();

// Runs one named suite, or every suite for "all". Throws ConfigError for an
// unknown name.
std::vector<SuiteReport> run_suites(const std::string& selector);

nlohmann::json to_json(const SuiteReport& report, bool with_timing);

// Relative sup-norm deviation of the truncated boundary series from f(phi)
// when the true interior field replaces the extension (interval, f(u) = u,
// phi = t), over the 10-90% quantile band of phi.
double exact_extension_error(std::size_t modes);

struct ConvergenceRow {
  int level = 0;
  int cells = 0;
  int steps = 0;
  double h = 0.0;
  double dt = 0.0;
  double error = 0.0;
  double rate = 0.0;  // log2(previous error / error); 0 on the first level
};

// Manufactured-solution refinement study of the forward solver.
//   space: cells = base_cells * 2^l with the time grid held at fixed_steps;
//          error is the max space-time deviation from the exact solution.
//   time:  steps = base_steps * 2^l on fixed_cells; error is measured against
//          a run on the same grid with 4x the finest step count, which
//          cancels the spatial error.
// Needs at least 3 levels.
std::vector<ConvergenceRow> convergence_study(const DomainSpec& domain, double horizon,
                                              const ConvergenceSpec& spec, int levels);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows, const nlohmann::json& config_echo);

}  // namespace semirecon
