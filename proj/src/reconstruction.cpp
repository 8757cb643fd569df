#include "semirecon/reconstruction.hpp"

#include <memory>
#include <optional>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "laplace_operator.hpp"
#include "semirecon/errors.hpp"
#include "semirecon/kernels.hpp"

namespace semirecon {

ExtensionMethod parse_extension(const std::string& name) {
  if (name == "harmonic") return ExtensionMethod::Harmonic;
  if (name == "normal_constant") return ExtensionMethod::NormalConstant;
  throw ConfigError("unknown extension method '" + name + "'");
}

std::string to_string(ExtensionMethod method) {
  return method == ExtensionMethod::Harmonic ? "harmonic" : "normal_constant";
}

std::size_t ReconstructionConfig::mode_count(const DomainSpec& domain) const {
  if (modes > 0) return modes;
  return domain.kind() == DomainKind::Interval ? 16 : 32;
}

void ReconstructionConfig::validate() const {
  if (window < 1) throw ConfigError("derivative window half-width must be at least 1");
  if (curve.bins < 8) throw ConfigError("curve needs at least 8 bins");
  if (!(curve.q_lo >= 0.0 && curve.q_lo < curve.q_hi && curve.q_hi <= 1.0)) {
    throw ConfigError("trusted quantiles must satisfy 0 <= q_lo < q_hi <= 1");
  }
}

FluxDifference flux_difference(const ObservedData& obs, const SpatialGrid& grid) {
  obs.validate();
  if (!(grid.domain() == obs.domain())) {
    throw InputError("reconstruction grid does not match the observation domain");
  }
  const DirichletData phi = DirichletData::from_trace(obs.phi);
  const SolutionField v = solve_linear_heat(grid, phi, obs.phi.time().steps());
  BoundaryTrace linear = subsample_trace(neumann_trace(v), obs.flux.nodes(), obs.flux.time());
  BoundaryTrace g = obs.flux;
  const auto lv = linear.values();
  auto gv = g.values();
  for (std::size_t i = 0; i < gv.size(); ++i) gv[i] -= lv[i];
  return {std::move(g), std::move(linear)};
}

BoundaryTrace compute_a(const BoundaryTrace& g, const KernelEvaluator& kernel,
                        const BoundaryNodeSet& targets) {
  return parallel::propagate_boundary(kernel, g, targets);
}

namespace {

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

}  // namespace

SpaceTimeField extend_a(const BoundaryTrace& a, ExtensionMethod method, const SpatialGrid& grid) {
  if (!(a.nodes().domain() == grid.domain())) {
    throw InputError("boundary data and grid live on different domains");
  }
  const TimeGrid& time = a.time();
  SpaceTimeField out(grid, time);
  const DomainSpec& domain = grid.domain();

  if (domain.kind() == DomainKind::Interval) {
    const double length = domain.length(0);
    for (int j = 0; j <= time.steps(); ++j) {
      const double left = a.at(j, 0);
      const double right = a.at(j, 1);
      auto row = out.slice(j);
      for (std::size_t n = 0; n < grid.size(); ++n) {
        const double xi = grid.point(n).x / length;
        const double theta =
            method == ExtensionMethod::Harmonic ? xi : smoothstep((xi - 0.4) / 0.2);
        row[n] = (1.0 - theta) * left + theta * right;
      }
      // exact endpoint reproduction
      row[0] = left;
      row[static_cast<std::size_t>(grid.cells(0))] = right;
    }
    return out;
  }

  const detail::LaplaceOperator lap(grid);
  std::unique_ptr<detail::Factorization> laplace;
  if (method == ExtensionMethod::Harmonic) laplace = lap.factor(1.0, 0.0);
  const double lx = domain.length(0);
  const double ly = domain.length(1);

  for (int j = 0; j <= time.steps(); ++j) {
    const auto values = a.slice(j);
    auto row = out.slice(j);
    for (std::size_t n : lap.boundary_nodes) row[n] = a.nodes().interpolate(values, grid.point(n));
    if (laplace) {
      // -L u = boundary contribution
      const Eigen::VectorXd u = laplace->solve(lap.boundary_term(row));
      for (std::size_t k = 0; k < lap.node_of_unknown.size(); ++k) {
        row[lap.node_of_unknown[k]] = u[static_cast<long>(k)];
      }
      continue;
    }
    for (std::size_t n : grid.interior_nodes()) {
      const Point p = grid.point(n);
      const std::array<double, 4> dist{p.y, lx - p.x, ly - p.y, p.x};
      const std::array<Point, 4> foot{Point{p.x, 0.0}, Point{lx, p.y}, Point{p.x, ly}, Point{0.0, p.y}};
      double num = 0.0;
      double den = 0.0;
      for (std::size_t s = 0; s < 4; ++s) {
        const double w = std::pow(dist[s], -6.0);
        num += w * a.nodes().interpolate(values, foot[s]);
        den += w;
      }
      row[n] = num / den;
    }
  }
  return out;
}

CoefficientSeries project_coefficients(const SpaceTimeField& extended, const EigenBasis& basis,
                                       std::size_t modes) {
  return parallel::project(extended, basis, modes);
}

CoefficientSeries differentiate_coefficients(CoefficientSeries series, int window) {
  const TimeGrid& time = series.time();
  const int points = 2 * window + 1;
  if (window < 1 || static_cast<int>(time.size()) < points) {
    throw ConfigError("derivative window does not fit the time grid");
  }
  // stencil[left] holds derivative weights when the evaluation point is the
  // `left`-th sample of the fitting window
  std::vector<std::vector<double>> stencil(static_cast<std::size_t>(points));
  for (int left = 0; left < points; ++left) {
    Eigen::MatrixXd design(points, 3);
    for (int i = 0; i < points; ++i) {
      const double r = i - left;
      design(i, 0) = 1.0;
      design(i, 1) = r;
      design(i, 2) = r * r;
    }
    const Eigen::Matrix3d normal = design.transpose() * design;
    const Eigen::MatrixXd pinv = normal.inverse() * design.transpose();
    stencil[static_cast<std::size_t>(left)].resize(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) stencil[static_cast<std::size_t>(left)][static_cast<std::size_t>(i)] = pinv(1, i);
  }

  const int last = time.steps();
  const double dt = time.step();
  std::vector<double> d(series.modes() * time.size());
  for (std::size_t k = 0; k < series.modes(); ++k) {
    const auto y = series.series(k);
    for (int j = 0; j <= last; ++j) {
      const int start = std::clamp(j - window, 0, last + 1 - points);
      const auto& w = stencil[static_cast<std::size_t>(j - start)];
      double acc = 0.0;
      for (int i = 0; i < points; ++i) acc += w[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(start + i)];
      d[k * time.size() + static_cast<std::size_t>(j)] = acc / dt;
    }
  }
  series.set_derivatives(std::move(d));
  return series;
}

double assemble_series(const CoefficientSeries& series, const EigenBasis& basis, Point x, double s) {
  if (!series.has_derivatives()) {
    throw InputError("series assembly needs differentiated coefficients");
  }
  if (series.modes() > basis.size()) {
    throw InputError("series has more modes than the basis");
  }
  const TimeGrid& time = series.time();
  if (!time.covers(s)) throw InputError("time outside the coefficient series");
  const double r = s / time.step();
  const int j = std::clamp(static_cast<int>(std::floor(r)), 0, time.steps() - 1);
  const double theta = std::clamp(r - j, 0.0, 1.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < series.modes(); ++k) {
    auto term = [&](int i) { return series.derivative(k, i) + basis.lambda(k) * series.value(k, i); };
    sum += ((1.0 - theta) * term(j) + theta * term(j + 1)) * basis.value(k, x);
  }
  return sum;
}

BoundaryTrace assemble_boundary_series(const CoefficientSeries& series, const EigenBasis& basis,
                                       const BoundaryNodeSet& nodes) {
  return parallel::assemble(series, basis, nodes);
}

VolterraOracle oracle_volterra(const SolutionField& u_f, const NonlinearityFn& f,
                               const EigenBasis& basis, std::size_t modes) {
  SpaceTimeField source(u_f.grid(), u_f.time());
  for (int j = 0; j <= u_f.time().steps(); ++j) {
    const auto u = u_f.slice(j);
    auto s = source.slice(j);
    for (std::size_t n = 0; n < u.size(); ++n) s[n] = f(u[n]);
  }
  CoefficientSeries c = parallel::project(source, basis, modes);
  CoefficientSeries p = parallel::convolve_modes(c, basis);
  return {std::move(c), std::move(p)};
}

std::vector<double> pool_adjacent_violators(std::span<const double> values,
                                            std::span<const double> weights) {
  struct Block {
    double mean;
    double weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < values.size(); ++i) {
    blocks.push_back({values[i], weights[i], 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
      const Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      const double w = prev.weight + top.weight;
      prev.mean = w > 0.0 ? (prev.mean * prev.weight + top.mean * top.weight) / w
                          : 0.5 * (prev.mean + top.mean);
      prev.weight = w;
      prev.count += top.count;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean);
  return out;
}

double quantile(std::vector<double> samples, double q) {
  if (samples.empty()) throw InputError("quantile of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double h = (static_cast<double>(samples.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (h - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

namespace {

double median(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

CurveEstimate build_curve(std::span<const double> phi, std::span<const double> values,
                          const CurveConfig& config) {
  if (phi.size() != values.size() || phi.empty()) {
    throw InputError("curve aggregation needs matched, nonempty samples");
  }
  if (config.bins < 8) throw ConfigError("curve needs at least 8 bins");
  CurveEstimate curve;
  curve.max_phi = *std::max_element(phi.begin(), phi.end());
  if (!(curve.max_phi > 0.0)) {
    throw ReconstructionError("Dirichlet samples never leave zero");
  }
  const double width = curve.max_phi / config.bins;
  std::vector<std::vector<double>> bin_phi(static_cast<std::size_t>(config.bins));
  std::vector<std::vector<double>> bin_val(bin_phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const int b = std::clamp(static_cast<int>(std::floor(phi[i] / width)), 0, config.bins - 1);
    bin_phi[static_cast<std::size_t>(b)].push_back(phi[i]);
    bin_val[static_cast<std::size_t>(b)].push_back(values[i]);
  }

  curve.knots.push_back(0.0);
  curve.values.push_back(0.0);
  curve.counts.push_back(0);
  curve.spread.push_back(0.0);
  int nonempty = 0;
  for (int b = 0; b < config.bins; ++b) {
    auto& ps = bin_phi[static_cast<std::size_t>(b)];
    auto& vs = bin_val[static_cast<std::size_t>(b)];
    if (ps.empty()) {
      curve.dropped_bins.push_back(b);
      continue;
    }
    ++nonempty;
    const double knot = median(ps);
    if (!(knot > 0.0)) continue;  // the anchor already covers phi = 0
    const double centre = median(vs);
    std::vector<double> dev(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) dev[i] = std::abs(vs[i] - centre);
    curve.knots.push_back(knot);
    curve.values.push_back(centre);
    curve.counts.push_back(vs.size());
    curve.spread.push_back(median(dev));
  }
  if (nonempty < 3) {
    throw ReconstructionError("fewer than 3 populated bins in the (phi, f) graph");
  }

  if (config.monotone && curve.values.size() > 1) {
    std::vector<double> v(curve.values.begin() + 1, curve.values.end());
    std::vector<double> w(curve.counts.begin() + 1, curve.counts.end());
    const auto fitted = pool_adjacent_violators(v, w);
    // the fixed anchor f(0) = 0 acts as a lower bound
    for (std::size_t i = 0; i < fitted.size(); ++i) curve.values[i + 1] = std::max(0.0, fitted[i]);
  }

  std::vector<double> all(phi.begin(), phi.end());
  curve.trusted_lo = quantile(all, config.q_lo);
  curve.trusted_hi = quantile(std::move(all), config.q_hi);
  return curve;
}

CurveValue evaluate_curve(const CurveEstimate& curve, double u) {
  CurveValue out;
  out.in_trusted_range = u >= curve.trusted_lo && u <= curve.trusted_hi;
  if (curve.knots.empty()) return out;
  if (u <= curve.knots.front()) {
    out.value = curve.values.front();
    out.clamped = u < curve.knots.front();
    return out;
  }
  if (u >= curve.knots.back()) {
    out.value = curve.values.back();
    out.clamped = u > curve.knots.back();
    return out;
  }
  const auto it = std::upper_bound(curve.knots.begin(), curve.knots.end(), u);
  const auto hi = static_cast<std::size_t>(it - curve.knots.begin());
  const std::size_t lo = hi - 1;
  const double theta = (u - curve.knots[lo]) / (curve.knots[hi] - curve.knots[lo]);
  out.value = curve.values[lo] + theta * (curve.values[hi] - curve.values[lo]);
  return out;
}

namespace {

struct ExtensionRun {
  CoefficientSeries series;
  CurveEstimate curve;
};

ExtensionRun run_extension(const ObservedData& obs, const BoundaryTrace& a, ExtensionMethod method,
                           const SpatialGrid& grid, const EigenBasis& basis,
                           const ReconstructionConfig& config, ReconstructionDiagnostics& diag) {
  const std::string tag = to_string(method);
  const SpaceTimeField extended = extend_a(a, method, grid);
  diag.completed_stages.push_back("extend_a:" + tag);
  CoefficientSeries series =
      differentiate_coefficients(project_coefficients(extended, basis, basis.size()), config.window);
  diag.completed_stages.push_back("coefficients:" + tag);
  const BoundaryTrace f_series = assemble_boundary_series(series, basis, obs.flux.nodes());
  diag.completed_stages.push_back("assemble_series:" + tag);
  CurveEstimate curve = build_curve(obs.phi.values(), f_series.values(), config.curve);
  diag.completed_stages.push_back("build_curve:" + tag);
  return {std::move(series), std::move(curve)};
}

void record_series(const CoefficientSeries& series, ReconstructionDiagnostics& diag) {
  const TimeGrid& time = series.time();
  const double dt = time.step();
  diag.mode_energies.assign(series.modes(), 0.0);
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < series.modes(); ++k) {
    const auto y = series.series(k);
    double e = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double w = (j == 0 || j + 1 == y.size()) ? 0.5 * dt : dt;
      e += w * y[j] * y[j];
    }
    diag.mode_energies[k] = e;
    total += e;
    if (k >= series.modes() / 2) tail += e;
    diag.initial_coefficient_residual =
        std::max(diag.initial_coefficient_residual, std::abs(series.value(k, 0)));
  }
  diag.tail_energy_fraction = total > 0.0 ? tail / total : 0.0;
}

}  // namespace

ReconstructionResult reconstruct(const ObservedData& obs, const ReconstructionConfig& config) {
  config.validate();
  obs.validate();
  const DomainSpec& domain = obs.domain();
  const SpatialGrid grid(domain, config.grid_cells);
  ReconstructionDiagnostics diag;

  try {
    const FluxDifference fd = flux_difference(obs, grid);
    diag.flux_scale = fd.linear_flux.max_abs();
    for (double v : fd.g.slice(0)) {
      diag.initial_flux_difference = std::max(diag.initial_flux_difference, std::abs(v));
    }
    diag.completed_stages.push_back("flux_difference");

    const KernelEvaluator kernel(domain, config.kernel);
    const BoundaryTrace a = compute_a(fd.g, kernel, obs.flux.nodes());
    const auto av = a.values();
    diag.a_min = *std::min_element(av.begin(), av.end());
    diag.a_max = *std::max_element(av.begin(), av.end());
    diag.completed_stages.push_back("compute_a");

    const EigenBasis basis(domain, config.mode_count(domain));
    ExtensionRun primary = run_extension(obs, a, config.extension, grid, basis, config, diag);
    record_series(primary.series, diag);
    diag.trusted_lo = primary.curve.trusted_lo;
    diag.trusted_hi = primary.curve.trusted_hi;
    diag.dropped_bins = primary.curve.dropped_bins;

    ReconstructionResult result{std::move(primary.curve), std::nullopt, {}};
    if (config.compare_extensions) {
      const ExtensionMethod other = config.extension == ExtensionMethod::Harmonic
                                        ? ExtensionMethod::NormalConstant
                                        : ExtensionMethod::Harmonic;
      ExtensionRun alt = run_extension(obs, a, other, grid, basis, config, diag);
      double gap = 0.0;
      constexpr int samples = 200;
      for (int i = 0; i <= samples; ++i) {
        const double u = diag.trusted_lo + (diag.trusted_hi - diag.trusted_lo) * i / samples;
        gap = std::max(gap, std::abs(evaluate_curve(result.curve, u).value -
                                     evaluate_curve(alt.curve, u).value));
      }
      diag.extension_discrepancy = gap;
      result.alternative = std::move(alt.curve);
    }
    result.diagnostics = std::move(diag);
    return result;
  } catch (const ReconstructionError& e) {
    throw ReconstructionError(e.what(), diag);
  } catch (const NumericalError& e) {
    throw ReconstructionError(e.what(), diag);
  }
}

}  // namespace semirecon
