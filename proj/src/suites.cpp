#include "semirecon/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "semirecon/errors.hpp"
#include "semirecon/eigenbasis.hpp"
#include "semirecon/heat_kernel.hpp"
#include "semirecon/io.hpp"
#include "semirecon/kernels.hpp"
#include "semirecon/reconstruction.hpp"

namespace semirecon {

using nlohmann::json;

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

constexpr double pi = std::numbers::pi;

Check below(std::string name, double measured, double threshold) {
  return {std::move(name), std::isfinite(measured) && measured < threshold, measured, threshold, "<"};
}

Check at_least(std::string name, double measured, double threshold) {
  return {std::move(name), std::isfinite(measured) && measured >= threshold, measured, threshold,
          ">="};
}

double min_rate(const std::vector<double>& errors) {
  double r = INFINITY;
  for (std::size_t i = 1; i < errors.size(); ++i) r = std::min(r, std::log2(errors[i - 1] / errors[i]));
  return r;
}

NonlinearityFn linear_f() { return make_nonlinearity({{"family", "linear"}, {"c", 1.0}}); }

// ---------------------------------------------------------------- eigenbasis

SuiteReport eigenbasis_suite() {
  SuiteReport r{"eigenbasis", {}, 0.0};
  const DomainSpec interval = DomainSpec::interval(1.0);
  {
    const EigenBasis basis(interval, 16);
    const auto rep = verify_orthonormality(basis, build_grid(interval, 512));
    r.checks.push_back(below("orthonormality_interval_K16_n512", rep.max_deviation, 1e-6));
  }
  {
    const DomainSpec rect = DomainSpec::rectangle(1.0, 0.5);
    const EigenBasis basis(rect, 32);
    const auto rep = verify_orthonormality(basis, build_grid(rect, 128, 64));
    r.checks.push_back(below("orthonormality_rectangle_K32", rep.max_deviation, 1e-6));
  }
  {
    const EigenBasis basis(interval, 6);
    std::vector<double> errors;
    for (int n : {16, 32, 64, 128}) errors.push_back(laplacian_residual(basis, 5, build_grid(interval, n)));
    r.checks.push_back(at_least("laplacian_residual_rate", min_rate(errors), 1.9));
  }
  return r;
}

// ---------------------------------------------------------------- kernel

SuiteReport kernel_suite() {
  SuiteReport r{"kernel", {}, 0.0};
  const DomainSpec interval = DomainSpec::interval(1.0);
  const KernelEvaluator ev(interval);
  {
    const SpatialGrid grid = build_grid(interval, 1024);
    double worst = 0.0;
    for (int i = 0; i <= 24; ++i) {
      const double tau = std::pow(10.0, -3.0 + 4.0 * i / 24.0);
      for (double x : {0.0, 0.3, 1.0}) worst = std::max(worst, std::abs(mass(ev, {x, 0}, tau, grid) - 1.0));
    }
    r.checks.push_back(below("mass_interval", worst, 1e-6));
  }
  {
    const DomainSpec rect = DomainSpec::rectangle(1.0, 0.5);
    const KernelEvaluator evr(rect);
    const SpatialGrid grid = build_grid(rect, 128, 64);
    double worst = 0.0;
    for (double tau : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
      for (Point x : {Point{0.0, 0.0}, Point{0.4, 0.25}, Point{1.0, 0.1}}) {
        worst = std::max(worst, std::abs(mass(evr, x, tau, grid) - 1.0));
      }
    }
    r.checks.push_back(below("mass_rectangle", worst, 1e-6));
  }
  {
    double worst = 0.0;
    const double eps = ev.crossover();
    for (int i = 0; i <= 8; ++i) {
      const double tau = eps * std::pow(2.0, -1.0 + 2.0 * i / 8.0);
      for (double x : {0.0, 0.5, 1.0}) {
        for (double y : {0.0, 0.02, 0.5}) {
          const double s = ev.spectral({x, 0}, {y, 0}, tau);
          const double m = ev.images({x, 0}, {y, 0}, tau);
          worst = std::max(worst, std::abs(s - m) / std::max(1.0, std::abs(m)));
        }
      }
    }
    r.checks.push_back(below("branch_agreement", worst, 1e-8));
  }
  {
    const SpatialGrid grid = build_grid(interval, 2048);
    double worst = 0.0;
    for (auto [t1, t2] : {std::pair{0.005, 0.005}, std::pair{0.01, 0.1}, std::pair{0.2, 0.3}}) {
      for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{0.2, 0.7}, std::pair{1.0, 0.9}}) {
        double sum = 0.0;
        for (std::size_t n = 0; n < grid.size(); ++n) {
          const Point z = grid.point(n);
          sum += grid.weight(n) * ev.value({x, 0}, z, t1) * ev.value(z, {y, 0}, t2);
        }
        worst = std::max(worst, std::abs(sum - ev.value({x, 0}, {y, 0}, t1 + t2)));
      }
    }
    r.checks.push_back(below("semigroup", worst, 1e-5));
  }
  return r;
}

// ---------------------------------------------------------------- representation

double representation_error(const json& phi_selector) {
  const DomainSpec interval = DomainSpec::interval(1.0);
  const DirichletData phi = make_dirichlet(phi_selector, interval, 1.0);
  const SolutionField v = solve_linear_heat(build_grid(interval, 512), phi, 2048);
  const BoundaryTrace flux = neumann_trace(v);
  const KernelEvaluator ev(interval);
  const BoundaryTrace a = parallel::propagate_boundary(ev, flux, flux.nodes());
  double err = 0.0;
  double scale = 0.0;
  for (int j = 0; j <= a.time().steps(); ++j) {
    for (std::size_t b = 0; b < a.nodes().size(); ++b) {
      const double exact = phi.phi(a.nodes()[b].position, a.time().time(j));
      err = std::max(err, std::abs(a.at(j, b) - exact));
      scale = std::max(scale, std::abs(exact));
    }
  }
  return err / scale;
}

SuiteReport representation_suite() {
  SuiteReport r{"representation", {}, 0.0};
  r.checks.push_back(below("round_trip_linear_constant",
                           representation_error({{"time", "linear"}, {"profile", "constant"}}), 0.02));
  r.checks.push_back(below(
      "round_trip_saturating_cosine",
      representation_error({{"time", "saturating"}, {"rate", 2.0}, {"profile", "cosine"}}), 0.02));
  return r;
}

// ---------------------------------------------------------------- forward

SuiteReport forward_suite() {
  SuiteReport r{"forward", {}, 0.0};
  const DomainSpec interval = DomainSpec::interval(1.0);
  ConvergenceSpec spec;
  spec.base_cells = 16;
  spec.fixed_steps = 1024;
  spec.kind = "space";
  const auto space = convergence_study(interval, 1.0, spec, 4);
  spec.kind = "time";
  spec.base_steps = 128;
  spec.fixed_cells = 64;
  const auto time = convergence_study(interval, 1.0, spec, 4);
  auto worst_rate = [](const std::vector<ConvergenceRow>& rows) {
    double m = INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) m = std::min(m, rows[i].rate);
    return m;
  };
  r.checks.push_back(at_least("manufactured_space_rate", worst_rate(space), 1.9));
  r.checks.push_back(at_least("manufactured_time_rate", worst_rate(time), 1.9));

  const NonlinearityFn f = linear_f();
  const DirichletData phi = make_dirichlet({{"time", "linear"}, {"profile", "linear_x"}}, interval, 1.0);
  std::vector<double> residuals;
  double boundary = 0.0;
  double full = 0.0;
  for (int n : {32, 64, 128}) {
    const SpatialGrid grid = build_grid(interval, n);
    const auto u = solve_semilinear(grid, f, phi, 4 * n);
    const auto v = solve_linear_heat(grid, phi, 4 * n);
    const WProblemReport rep = verify_w_problem(u, v, f, 0.1);
    residuals.push_back(rep.settled_residual);
    full = rep.interior_residual;
    boundary = std::max({boundary, rep.boundary_deviation, rep.initial_deviation});
  }
  r.checks.push_back(below("w_residual_n128", full, 1e-2));
  r.checks.push_back(at_least("w_residual_rate_t_ge_0.1", min_rate(residuals), 1.9));
  r.checks.push_back(below("w_boundary_initial", boundary, 1e-12));

  {
    const DirichletData phi_t = make_dirichlet({{"time", "linear"}, {"profile", "constant"}}, interval, 1.0);
    const SpatialGrid grid = build_grid(interval, 128);
    const auto u = solve_semilinear(grid, f, phi_t, 512);
    const auto v = solve_linear_heat(grid, phi_t, 512);
    double negativity = 0.0;
    double ordering = 0.0;
    for (std::size_t i = 0; i < u.values().size(); ++i) {
      negativity = std::max(negativity, -u.values()[i]);
      ordering = std::max(ordering, u.values()[i] - v.values()[i]);
    }
    r.checks.push_back(below("nonnegativity", negativity, 1e-10));
    r.checks.push_back(below("comparison_u_le_v", ordering, 1e-10));
  }
  return r;
}

// ---------------------------------------------------------------- volterra / extension

struct GroundTruth {
  SolutionField u;
  NonlinearityFn f;
  DirichletData phi;
};

GroundTruth ground_truth(const json& phi_selector) {
  const DomainSpec interval = DomainSpec::interval(1.0);
  NonlinearityFn f = linear_f();
  DirichletData phi = make_dirichlet(phi_selector, interval, 1.0);
  SolutionField u = solve_semilinear(build_grid(interval, 256), f, phi, 512);
  return {std::move(u), std::move(f), std::move(phi)};
}

SuiteReport volterra_suite() {
  SuiteReport r{"volterra", {}, 0.0};
  const GroundTruth gt = ground_truth({{"time", "saturating"}, {"rate", 2.0}, {"profile", "cosine"}});
  const EigenBasis basis(gt.u.grid().domain(), 16);
  const VolterraOracle oracle = oracle_volterra(gt.u, gt.f, basis, 16);
  const CoefficientSeries p = differentiate_coefficients(oracle.responses, 2);
  double scale = 0.0;
  double err = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    for (int j = 0; j <= p.time().steps(); ++j) {
      const double c = oracle.sources.value(k, j);
      scale = std::max(scale, std::abs(c));
      err = std::max(err, std::abs(c - (p.derivative(k, j) + basis.lambda(k) * p.value(k, j))));
    }
  }
  r.checks.push_back(below("inversion_identity_k_le_8", err / scale, 1e-2));
  return r;
}

}  // namespace

double exact_extension_error(std::size_t modes) {
  const GroundTruth gt = ground_truth({{"time", "linear"}, {"profile", "constant"}});
  const SpatialGrid& grid = gt.u.grid();
  SpaceTimeField h(grid, gt.u.time());
  for (int j = 0; j <= gt.u.time().steps(); ++j) {
    for (std::size_t n = 0; n < grid.size(); ++n) h.at(j, n) = gt.f(gt.u.at(j, n));
  }
  const KernelEvaluator ev(grid.domain());
  const SpaceTimeField interior = parallel::propagate_domain(ev, h);
  const EigenBasis basis(grid.domain(), modes);
  const CoefficientSeries series =
      differentiate_coefficients(project_coefficients(interior, basis, modes), 2);
  const BoundaryNodeSet nodes = boundary_nodes(grid);
  const BoundaryTrace F = assemble_boundary_series(series, basis, nodes);

  std::vector<double> phis;
  for (int j = 0; j <= F.time().steps(); ++j) {
    for (std::size_t b = 0; b < nodes.size(); ++b) phis.push_back(gt.phi.phi(nodes[b].position, F.time().time(j)));
  }
  const double lo = quantile(phis, 0.1);
  const double hi = quantile(phis, 0.9);
  double err = 0.0;
  double scale = 0.0;
  std::size_t i = 0;
  for (int j = 0; j <= F.time().steps(); ++j) {
    for (std::size_t b = 0; b < nodes.size(); ++b, ++i) {
      if (phis[i] < lo || phis[i] > hi) continue;
      const double exact = gt.f(phis[i]);
      err = std::max(err, std::abs(F.at(j, b) - exact));
      scale = std::max(scale, std::abs(exact));
    }
  }
  return err / scale;
}

namespace {

SuiteReport extension_suite() {
  SuiteReport r{"extension", {}, 0.0};
  r.checks.push_back(below("exact_extension_K16", exact_extension_error(16), 0.05));
  return r;
}

using SuiteFn = SuiteReport (*)();

SuiteFn suite_by_name(const std::string& name) {
  if (name == "eigenbasis") return eigenbasis_suite;
  if (name == "kernel") return kernel_suite;
  if (name == "representation") return representation_suite;
  if (name == "forward") return forward_suite;
  if (name == "volterra") return volterra_suite;
  if (name == "extension") return extension_suite;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"eigenbasis", "kernel",   "representation",
                                              "forward",    "volterra", "extension"};
  return names;
}

std::vector<SuiteReport> run_suites(const std::string& selector) {
  std::vector<std::string> chosen;
  if (selector == "all") {
    chosen = suite_names();
  } else if (suite_by_name(selector) != nullptr) {
    chosen = {selector};
  } else {
    throw ConfigError("unknown suite '" + selector + "'");
  }
  std::vector<SuiteReport> out;
  for (const auto& name : chosen) {
    const auto start = std::chrono::steady_clock::now();
    SuiteReport rep = suite_by_name(name)();
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(rep));
  }
  return out;
}

json to_json(const SuiteReport& report, bool with_timing) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"status", c.passed ? "pass" : "fail"},
                      {"measured", std::isfinite(c.measured) ? json(c.measured) : json(nullptr)},
                      {"threshold", c.threshold},
                      {"relation", c.relation}});
  }
  json j = {{"suite", report.name}, {"status", report.passed() ? "pass" : "fail"}, {"checks", checks}};
  if (with_timing) j["seconds"] = report.seconds;
  return j;
}

// ---------------------------------------------------------------- convergence

namespace {

struct Manufactured {
  std::function<double(double)> tau;
  std::function<double(double)> tau_dot;
  std::function<double(Point)> shape;
  double lambda;
};

Manufactured manufactured(const DomainSpec& domain, const std::string& name) {
  const double lx = domain.length(0);
  const bool rect = domain.kind() == DomainKind::Rectangle;
  const double ly = rect ? domain.length(1) : 1.0;
  Manufactured m;
  m.lambda = pi * pi / (lx * lx) + (rect ? pi * pi / (ly * ly) : 0.0);
  m.shape = [=](Point p) {
    return std::sin(pi * p.x / lx) * (rect ? std::sin(pi * p.y / ly) : 1.0);
  };
  if (name == "t_sin") {
    m.tau = [](double t) { return t; };
    m.tau_dot = [](double) { return 1.0; };
  } else if (name == "exp_sin") {
    m.tau = [](double t) { return -std::expm1(-t); };
    m.tau_dot = [](double t) { return std::exp(-t); };
  } else {
    throw ConfigError("unknown manufactured solution '" + name + "'");
  }
  return m;
}

SolutionField manufactured_solve(const DomainSpec& domain, double horizon, const Manufactured& m,
                                 const NonlinearityFn& f, int cells, int steps) {
  const SpatialGrid grid = domain.dimension() == 1 ? build_grid(domain, cells) : build_grid(domain, cells, cells);
  DirichletData zero{[](Point, double) { return 0.0; }, horizon, "zero"};
  SolveOptions options;
  options.source = [&m, &f](Point p, double t) {
    const double s = m.shape(p);
    const double u = m.tau(t) * s;
    return m.tau_dot(t) * s + m.lambda * u + f(u);
  };
  return solve_semilinear(grid, f, zero, steps, options);
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const DomainSpec& domain, double horizon,
                                              const ConvergenceSpec& spec, int levels) {
  if (levels < 3) throw ConfigError("a convergence study needs at least 3 levels");
  if (spec.base_cells < kMinGridCells || spec.base_steps < 1) {
    throw ConfigError("convergence base resolution too small");
  }
  const Manufactured m = manufactured(domain, spec.manufactured);
  const NonlinearityFn f = make_nonlinearity(spec.f);
  std::vector<ConvergenceRow> rows;

  if (spec.kind == "space") {
    for (int l = 0; l < levels; ++l) {
      const int cells = spec.base_cells << l;
      const SolutionField u = manufactured_solve(domain, horizon, m, f, cells, spec.fixed_steps);
      double err = 0.0;
      for (int j = 0; j <= u.time().steps(); ++j) {
        const double t = u.time().time(j);
        for (std::size_t n = 0; n < u.grid().size(); ++n) {
          err = std::max(err, std::abs(u.at(j, n) - m.tau(t) * m.shape(u.grid().point(n))));
        }
      }
      rows.push_back({l, cells, spec.fixed_steps, u.grid().spacing(0), u.time().step(), err, 0.0});
    }
  } else if (spec.kind == "time") {
    const int finest = spec.base_steps << (levels - 1);
    const SolutionField ref = manufactured_solve(domain, horizon, m, f, spec.fixed_cells, 4 * finest);
    for (int l = 0; l < levels; ++l) {
      const int steps = spec.base_steps << l;
      const SolutionField u = manufactured_solve(domain, horizon, m, f, spec.fixed_cells, steps);
      const int ratio = 4 * finest / steps;
      double err = 0.0;
      for (int j = 0; j <= steps; ++j) {
        for (std::size_t n = 0; n < u.grid().size(); ++n) {
          err = std::max(err, std::abs(u.at(j, n) - ref.at(j * ratio, n)));
        }
      }
      rows.push_back({l, spec.fixed_cells, steps, u.grid().spacing(0), u.time().step(), err, 0.0});
    }
  } else {
    throw ConfigError("convergence kind must be 'space' or 'time'");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) rows[i].rate = std::log2(rows[i - 1].error / rows[i].error);
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows, const json& config_echo) {
  std::ostringstream os;
  os << "# schema_version " << io::kSchemaVersion << "\n# config " << config_echo.dump() << "\n";
  os << "level,cells,steps,h,dt,error,rate\n";
  for (const auto& r : rows) {
    os << r.level << ',' << r.cells << ',' << r.steps << ',' << io::format_double(r.h) << ','
       << io::format_double(r.dt) << ',' << io::format_double(r.error) << ','
       << io::format_double(r.rate) << '\n';
  }
  return os.str();
}

}  // namespace semirecon
