#include "semirecon/forward_solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <vector>

#include "laplace_operator.hpp"
#include "semirecon/errors.hpp"

namespace semirecon {

NonlinearityFn NonlinearityFn::zero() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, "zero"};
}

void check_admissible(const NonlinearityFn& f, double upper) {
  if (std::abs(f(0.0)) > 1e-14) {
    throw InputError("nonlinearity must vanish at zero (" + f.label + ")");
  }
  constexpr int samples = 256;
  double previous = f(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double u = upper * i / samples;
    const double v = f(u);
    if (!std::isfinite(v) || v < -1e-14) {
      throw InputError("nonlinearity must be nonnegative on [0, max phi] (" + f.label + ")");
    }
    if (v < previous - 1e-12 * std::max(1.0, std::abs(previous))) {
      throw InputError("nonlinearity must be nondecreasing on [0, max phi] (" + f.label + ")");
    }
    previous = v;
  }
}

DirichletData DirichletData::from_trace(BoundaryTrace trace) {
  const double horizon = trace.time().horizon();
  auto shared = std::make_shared<BoundaryTrace>(std::move(trace));
  auto phi = [shared](Point p, double t) {
    const TimeGrid& time = shared->time();
    const double r = std::clamp(t / time.step(), 0.0, static_cast<double>(time.steps()));
    const int j = std::min(static_cast<int>(std::floor(r)), time.steps() - 1);
    const double theta = r - j;
    const double lo = shared->nodes().interpolate(shared->slice(j), p);
    const double hi = shared->nodes().interpolate(shared->slice(j + 1), p);
    // admissible data are nonnegative; extrapolation past the outermost
    // side nodes may undershoot near a zero corner value
    return std::max(0.0, (1.0 - theta) * lo + theta * hi);
  };
  return {phi, horizon, "sampled trace"};
}

namespace {

using detail::Factorization;
using detail::LaplaceOperator;

double check_dirichlet(const SpatialGrid& grid, const DirichletData& phi, const TimeGrid& time) {
  double max_phi = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (grid.is_interior(n)) continue;
    const Point p = grid.point(n);
    if (std::abs(phi.phi(p, 0.0)) > 1e-12) {
      throw InputError("Dirichlet data must vanish at t = 0 (" + phi.label + ")");
    }
    for (int j = 0; j <= time.steps(); ++j) {
      const double v = phi.phi(p, time.time(j));
      if (!std::isfinite(v) || v < -1e-12) {
        throw InputError("Dirichlet data must be nonnegative (" + phi.label + ")");
      }
      max_phi = std::max(max_phi, v);
    }
  }
  return max_phi;
}

}  // namespace

SolutionField solve_semilinear(const SpatialGrid& grid, const NonlinearityFn& f,
                               const DirichletData& phi, int steps, const SolveOptions& options) {
  const TimeGrid time(phi.horizon, steps);
  const double max_phi = check_dirichlet(grid, phi, time);
  check_admissible(f, std::max(max_phi, 1e-12));

  const LaplaceOperator lap(grid);
  const double dt = time.step();
  SolutionField field(grid, time);

  auto impose = [&](int j) {
    auto row = field.slice(j);
    const double t = time.time(j);
    for (std::size_t n : lap.boundary_nodes) row[n] = phi.phi(grid.point(n), t);
  };
  auto gather = [&](int j) {
    Eigen::VectorXd v(static_cast<long>(lap.node_of_unknown.size()));
    const auto row = field.slice(j);
    for (std::size_t u = 0; u < lap.node_of_unknown.size(); ++u) {
      v[static_cast<long>(u)] = row[lap.node_of_unknown[u]];
    }
    return v;
  };
  auto reaction = [&](int j) {
    Eigen::VectorXd r(static_cast<long>(lap.node_of_unknown.size()));
    const auto row = field.slice(j);
    for (std::size_t u = 0; u < lap.node_of_unknown.size(); ++u) {
      r[static_cast<long>(u)] = -f(row[lap.node_of_unknown[u]]);
    }
    return r;
  };
  auto source = [&](double t) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<long>(lap.node_of_unknown.size()));
    if (options.source) {
      for (std::size_t u = 0; u < lap.node_of_unknown.size(); ++u) {
        s[static_cast<long>(u)] = options.source(grid.point(lap.node_of_unknown[u]), t);
      }
    }
    return s;
  };
  auto scatter = [&](int j, const Eigen::VectorXd& v) {
    auto row = field.slice(j);
    for (std::size_t u = 0; u < lap.node_of_unknown.size(); ++u) {
      const double value = v[static_cast<long>(u)];
      if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "solver diverged at step " << j << " (t = " << time.time(j) << ", node "
            << lap.node_of_unknown[u] << ")";
        throw NumericalError(msg.str());
      }
      row[lap.node_of_unknown[u]] = value;
    }
  };

  impose(0);
  if (steps >= 1) {
    // backward-Euler start
    impose(1);
    const auto be = lap.factor(dt);
    const Eigen::VectorXd u0 = gather(0);
    const Eigen::VectorXd rhs =
        u0 + dt * lap.boundary_term(field.slice(1)) + dt * (reaction(0) + source(0.5 * dt));
    scatter(1, be->solve(rhs));
  }
  if (steps >= 2) {
    const auto cn = lap.factor(0.5 * dt);
    Eigen::VectorXd r_prev = reaction(0);
    Eigen::VectorXd r_curr = reaction(1);
    for (int j = 1; j < steps; ++j) {
      impose(j + 1);
      const Eigen::VectorXd u = gather(j);
      const Eigen::VectorXd explicit_part = 1.5 * r_curr - 0.5 * r_prev;
      const Eigen::VectorXd rhs =
          u + 0.5 * dt * (lap.matrix * u + lap.boundary_term(field.slice(j))) +
          0.5 * dt * lap.boundary_term(field.slice(j + 1)) +
          dt * (explicit_part + source(time.time(j) + 0.5 * dt));
      scatter(j + 1, cn->solve(rhs));
      r_prev = std::move(r_curr);
      r_curr = reaction(j + 1);
    }
  }
  return field;
}

SolutionField solve_linear_heat(const SpatialGrid& grid, const DirichletData& phi, int steps) {
  return solve_semilinear(grid, NonlinearityFn::zero(), phi, steps);
}

BoundaryTrace neumann_trace(const SolutionField& field) {
  const SpatialGrid& grid = field.grid();
  const BoundaryNodeSet nodes = boundary_nodes(grid);
  BoundaryTrace trace(nodes, field.time());
  const double hx = grid.spacing(0);

  if (grid.domain().kind() == DomainKind::Interval) {
    const int n = grid.cells(0);
    for (int j = 0; j <= field.time().steps(); ++j) {
      const auto u = field.slice(j);
      trace.at(j, 0) = -(-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * hx);
      const auto e = static_cast<std::size_t>(n);
      trace.at(j, 1) = (3.0 * u[e] - 4.0 * u[e - 1] + u[e - 2]) / (2.0 * hx);
    }
    return trace;
  }

  const double hy = grid.spacing(1);
  const int nx = grid.cells(0);
  const int ny = grid.cells(1);
  std::vector<double> vertex;
  for (int j = 0; j <= field.time().steps(); ++j) {
    const auto u = field.slice(j);
    auto at = [&](int i, int k) { return u[grid.index(i, k)]; };
    auto fill_side = [&](int side, int count, auto&& stencil) {
      vertex.assign(static_cast<std::size_t>(count) + 1, 0.0);
      for (int i = 0; i <= count; ++i) vertex[static_cast<std::size_t>(i)] = stencil(i);
      const std::size_t offset = nodes.side_offset(side);
      for (int i = 0; i < count; ++i) {
        trace.at(j, offset + static_cast<std::size_t>(i)) =
            0.5 * (vertex[static_cast<std::size_t>(i)] + vertex[static_cast<std::size_t>(i) + 1]);
      }
    };
    fill_side(0, nx, [&](int i) {
      return -(-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * hy);
    });
    fill_side(1, ny, [&](int k) {
      return (3.0 * at(nx, k) - 4.0 * at(nx - 1, k) + at(nx - 2, k)) / (2.0 * hx);
    });
    fill_side(2, nx, [&](int i) {
      return (3.0 * at(i, ny) - 4.0 * at(i, ny - 1) + at(i, ny - 2)) / (2.0 * hy);
    });
    fill_side(3, ny, [&](int k) {
      return -(-3.0 * at(0, k) + 4.0 * at(1, k) - at(2, k)) / (2.0 * hx);
    });
  }
  return trace;
}

WProblemReport verify_w_problem(const SolutionField& u_f, const SolutionField& v_phi,
                                const NonlinearityFn& f, double settle_time) {
  if (!(u_f.grid() == v_phi.grid()) || !(u_f.time() == v_phi.time())) {
    throw InputError("w-problem check needs fields on matching grids");
  }
  const SpatialGrid& grid = u_f.grid();
  const TimeGrid& time = u_f.time();
  const bool two_d = grid.domain().dimension() == 2;
  const double hx2 = grid.spacing(0) * grid.spacing(0);
  const double hy2 = two_d ? grid.spacing(1) * grid.spacing(1) : 1.0;
  const std::size_t stride = static_cast<std::size_t>(grid.nodes_along(0));
  const double dt = time.step();
  auto w = [&](int j, std::size_t n) { return u_f.at(j, n) - v_phi.at(j, n); };

  WProblemReport report;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    report.initial_deviation = std::max(report.initial_deviation, std::abs(w(0, n)));
    if (grid.is_interior(n)) continue;
    for (int j = 0; j <= time.steps(); ++j) {
      report.boundary_deviation = std::max(report.boundary_deviation, std::abs(w(j, n)));
    }
  }
  auto lap = [&](int j, std::size_t n) {
    double v = (w(j, n - 1) - 2.0 * w(j, n) + w(j, n + 1)) / hx2;
    if (two_d) v += (w(j, n - stride) - 2.0 * w(j, n) + w(j, n + stride)) / hy2;
    return v;
  };
  for (int j = 1; j < time.steps(); ++j) {
    for (std::size_t n : grid.interior_nodes()) {
      const double wt = (w(j + 1, n) - w(j, n)) / dt;
      const double r = wt - 0.5 * (lap(j + 1, n) + lap(j, n)) +
                       0.5 * (f(u_f.at(j + 1, n)) + f(u_f.at(j, n)));
      report.interior_residual = std::max(report.interior_residual, std::abs(r));
      if (time.time(j) >= settle_time) {
        report.settled_residual = std::max(report.settled_residual, std::abs(r));
      }
    }
  }
  return report;
}

BoundaryTrace subsample_trace(const BoundaryTrace& fine, const BoundaryNodeSet& coarse_nodes,
                              const TimeGrid& coarse_time) {
  const BoundaryNodeSet& fine_nodes = fine.nodes();
  if (!(fine_nodes.domain() == coarse_nodes.domain())) {
    throw InputError("subsampling across different domains");
  }
  const TimeGrid& ft = fine.time();
  if (std::abs(ft.horizon() - coarse_time.horizon()) > 1e-12 * ft.horizon() ||
      ft.steps() % coarse_time.steps() != 0) {
    throw InputError("coarse time grid must divide the fine time grid");
  }
  const int time_ratio = ft.steps() / coarse_time.steps();

  std::vector<int> side_ratio(4, 1);
  if (coarse_nodes.domain().kind() == DomainKind::Rectangle) {
    for (int side = 0; side < 4; ++side) {
      const int f = fine_nodes.side_count(side);
      const int c = coarse_nodes.side_count(side);
      if (f % c != 0) {
        throw InputError("coarse boundary resolution must divide the fine one");
      }
      side_ratio[static_cast<std::size_t>(side)] = f / c;
    }
  }

  BoundaryTrace coarse(coarse_nodes, coarse_time);
  const int sides = coarse_nodes.domain().kind() == DomainKind::Interval ? 2 : 4;
  for (int j = 0; j <= coarse_time.steps(); ++j) {
    const auto row = fine.slice(j * time_ratio);
    for (int side = 0; side < sides; ++side) {
      const int r = side_ratio[static_cast<std::size_t>(side)];
      const std::size_t fo = sides == 2 ? static_cast<std::size_t>(side) : fine_nodes.side_offset(side);
      const std::size_t co = sides == 2 ? static_cast<std::size_t>(side) : coarse_nodes.side_offset(side);
      const int count = sides == 2 ? 1 : coarse_nodes.side_count(side);
      for (int i = 0; i < count; ++i) {
        double sum = 0.0;
        for (int q = 0; q < r; ++q) sum += row[fo + static_cast<std::size_t>(i * r + q)];
        coarse.at(j, co + static_cast<std::size_t>(i)) = sum / r;
      }
    }
  }
  return coarse;
}

ObservedData synthesize_observation(const DomainSpec& domain, const NonlinearityFn& f,
                                    const DirichletData& phi, const SynthesisParams& params,
                                    double eta, std::uint64_t seed) {
  if (!(eta >= 0.0)) {
    throw InputError("noise level must be nonnegative");
  }
  const SpatialGrid fine_grid(domain, params.fine_cells);
  const SolutionField u = solve_semilinear(fine_grid, f, phi, params.fine_steps);
  BoundaryTrace flux = neumann_trace(u);

  if (eta > 0.0) {
    const double sigma = eta * flux.max_abs();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : flux.values()) v += sigma * normal(rng);
  }

  const BoundaryNodeSet coarse_nodes =
      domain.kind() == DomainKind::Interval
          ? boundary_nodes(domain, 1)
          : boundary_nodes(domain, params.coarse_cells[0], params.coarse_cells[1]);
  const TimeGrid coarse_time(phi.horizon, params.coarse_steps);
  BoundaryTrace coarse_flux = subsample_trace(flux, coarse_nodes, coarse_time);
  BoundaryTrace phi_trace = BoundaryTrace::sample(
      coarse_nodes, coarse_time, [&](const BoundaryNode& n, double t) { return phi.phi(n.position, t); });

  Provenance provenance;
  provenance.fine_cells = fine_grid.domain().dimension() == 2
                              ? std::array<int, 2>{fine_grid.cells(0), fine_grid.cells(1)}
                              : std::array<int, 2>{fine_grid.cells(0), 0};
  provenance.fine_steps = params.fine_steps;
  provenance.generator = f.label;
  provenance.dirichlet = phi.label;
  return {std::move(phi_trace), std::move(coarse_flux), eta, seed, std::move(provenance)};
}

void ObservedData::validate() const {
  if (!(phi.nodes() == flux.nodes()) || !(phi.time() == flux.time())) {
    throw InputError("observation traces must share nodes and time grid");
  }
}

}  // namespace semirecon
