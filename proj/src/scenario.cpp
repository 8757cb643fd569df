#include "semirecon/scenario.hpp"

#include <cmath>
#include <numbers>

#include "semirecon/errors.hpp"

namespace semirecon {

using nlohmann::json;

NonlinearityFn make_nonlinearity(const json& selector) {
  const std::string family = selector.value("family", "");
  const double c = selector.value("c", 1.0);
  json canonical = {{"family", family}};
  if (family == "zero") {
    auto f = NonlinearityFn::zero();
    f.label = canonical.dump();
    return f;
  }
  if (!(c >= 0.0)) throw ConfigError("nonlinearity scale c must be nonnegative");
  canonical["c"] = c;
  if (family == "linear") {
    return {[c](double u) { return c * u; }, [c](double) { return c; }, canonical.dump()};
  }
  if (family == "power") {
    const double p = selector.value("p", 2.0);
    if (!(p >= 1.0)) throw ConfigError("power nonlinearity needs p >= 1");
    canonical["p"] = p;
    return {[c, p](double u) { return u > 0.0 ? c * std::pow(u, p) : 0.0; },
            [c, p](double u) { return u > 0.0 ? c * p * std::pow(u, p - 1.0) : 0.0; },
            canonical.dump()};
  }
  if (family == "saturating") {
    return {[c](double u) { return u > 0.0 ? c * u / (1.0 + u) : c * u; },
            [c](double u) { return u > 0.0 ? c / ((1.0 + u) * (1.0 + u)) : c; }, canonical.dump()};
  }
  throw ConfigError("unknown nonlinearity family '" + family + "'");
}

DirichletData make_dirichlet(const json& selector, const DomainSpec& domain, double horizon) {
  const std::string time_kind = selector.value("time", "linear");
  const std::string profile = selector.value("profile", "constant");
  const double amplitude = selector.value("amplitude", 1.0);
  const double rate = selector.value("rate", 1.0);
  if (!(amplitude > 0.0) || !(rate > 0.0)) {
    throw ConfigError("Dirichlet amplitude and rate must be positive");
  }
  std::function<double(double)> tau;
  if (time_kind == "linear") {
    tau = [](double t) { return t; };
  } else if (time_kind == "saturating") {
    tau = [rate](double t) { return -std::expm1(-rate * t); };
  } else {
    throw ConfigError("unknown Dirichlet time factor '" + time_kind + "'");
  }
  std::function<double(Point)> g;
  const double lx = domain.length(0);
  if (profile == "constant") {
    g = [](Point) { return 1.0; };
  } else if (profile == "linear_x") {
    g = [](Point p) { return p.x; };
  } else if (profile == "cosine") {
    g = [lx](Point p) { return 0.5 * (1.0 + std::cos(std::numbers::pi * p.x / lx)); };
  } else {
    throw ConfigError("unknown Dirichlet profile '" + profile + "'");
  }
  json canonical = {{"time", time_kind}, {"profile", profile}, {"amplitude", amplitude}};
  if (time_kind == "saturating") canonical["rate"] = rate;
  return {[=](Point p, double t) { return amplitude * tau(t) * g(p); }, horizon, canonical.dump()};
}

double max_dirichlet(const DirichletData& phi, const DomainSpec& domain, int samples) {
  const BoundaryNodeSet nodes = boundary_nodes(domain, std::max(samples, 4));
  double m = 0.0;
  for (int j = 0; j <= samples; ++j) {
    const double t = phi.horizon * j / samples;
    for (const auto& n : nodes.nodes()) m = std::max(m, phi.phi(n.position, t));
    if (domain.kind() == DomainKind::Rectangle) {
      for (Point corner : {Point{0, 0}, Point{domain.length(0), 0}, Point{0, domain.length(1)},
                           Point{domain.length(0), domain.length(1)}}) {
        m = std::max(m, phi.phi(corner, t));
      }
    }
  }
  return m;
}

CurveScore score_curve(const CurveEstimate& curve, const NonlinearityFn& truth, double flux_scale,
                       int samples) {
  CurveScore score;
  double f_max = 0.0;
  double f_sq = 0.0;
  double e_sq = 0.0;
  double hat_max = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double u = curve.trusted_lo + (curve.trusted_hi - curve.trusted_lo) * i / samples;
    const double hat = evaluate_curve(curve, u).value;
    const double f = truth(u);
    score.sup_abs = std::max(score.sup_abs, std::abs(hat - f));
    hat_max = std::max(hat_max, std::abs(hat));
    f_max = std::max(f_max, std::abs(f));
    f_sq += f * f;
    e_sq += (hat - f) * (hat - f);
  }
  score.absolute = f_max == 0.0;
  score.relative_linf = score.absolute ? score.sup_abs : score.sup_abs / f_max;
  score.relative_l2 = score.absolute ? std::sqrt(e_sq / (samples + 1)) : std::sqrt(e_sq / f_sq);
  score.scaled_sup = flux_scale > 0.0 ? hat_max / flux_scale : hat_max;
  return score;
}

namespace {

std::array<int, 2> cells_from(const json& j, const DomainSpec& domain, const char* what) {
  const auto v = j.get<std::vector<int>>();
  if (v.size() != static_cast<std::size_t>(domain.dimension())) {
    throw ConfigError(std::string(what) + " needs one cell count per axis");
  }
  return {v[0], domain.dimension() == 2 ? v[1] : 0};
}

}  // namespace

ScenarioConfig parse_scenario(const json& j) {
  ScenarioConfig cfg;
  try {
    cfg.echo = j;
    if (j.value("schema_version", 1) != 1) throw ConfigError("unsupported config schema version");
    const json& d = j.at("domain");
    const std::string kind = d.at("kind").get<std::string>();
    const auto lengths = d.at("lengths").get<std::vector<double>>();
    if (kind == "interval" && lengths.size() == 1) {
      cfg.domain = DomainSpec::interval(lengths[0]);
    } else if (kind == "rectangle" && lengths.size() == 2) {
      cfg.domain = DomainSpec::rectangle(lengths[0], lengths[1]);
    } else {
      throw ConfigError("domain must be an interval with one length or a rectangle with two");
    }
    cfg.horizon = j.value("horizon", 1.0);

    if (j.contains("synthesis")) {
      const json& s = j.at("synthesis");
      cfg.synthesis.fine_cells = cells_from(s.at("cells"), cfg.domain, "synthesis");
      cfg.synthesis.fine_steps = s.at("steps").get<int>();
    }
    if (j.contains("observation")) {
      const json& o = j.at("observation");
      cfg.synthesis.coarse_cells = cells_from(o.at("cells"), cfg.domain, "observation");
      cfg.synthesis.coarse_steps = o.at("steps").get<int>();
    }
    cfg.phi = j.value("phi", json{{"time", "linear"}, {"profile", "constant"}});
    cfg.f = j.value("f", json{{"family", "linear"}, {"c", 1.0}});
    cfg.noise = j.value("noise", 0.0);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.output_dir = j.value("output_dir", std::string("out"));
    if (!(cfg.noise >= 0.0)) throw ConfigError("noise level must be nonnegative");

    ReconstructionConfig& rc = cfg.reconstruction;
    rc.grid_cells = cfg.domain.dimension() == 1 ? std::array<int, 2>{256, 0} : std::array<int, 2>{64, 64};
    if (j.contains("reconstruction")) {
      const json& r = j.at("reconstruction");
      if (r.contains("cells")) rc.grid_cells = cells_from(r.at("cells"), cfg.domain, "reconstruction");
      rc.modes = r.value("modes", std::size_t{0});
      rc.extension = parse_extension(r.value("extension", std::string("harmonic")));
      rc.compare_extensions = r.value("compare_extensions", false);
      rc.window = r.value("window", 2);
      rc.curve.bins = r.value("bins", 32);
      rc.curve.monotone = r.value("monotone", true);
      if (r.contains("quantiles")) {
        const auto q = r.at("quantiles").get<std::vector<double>>();
        if (q.size() != 2) throw ConfigError("quantiles needs two entries");
        rc.curve.q_lo = q[0];
        rc.curve.q_hi = q[1];
      }
      if (r.contains("kernel")) {
        const json& k = r.at("kernel");
        rc.kernel.max_modes = k.value("max_modes", rc.kernel.max_modes);
        rc.kernel.crossover = k.value("crossover", rc.kernel.crossover);
        rc.kernel.image_count = k.value("image_count", rc.kernel.image_count);
        rc.kernel.tail_tol = k.value("tail_tol", rc.kernel.tail_tol);
        rc.kernel.time_nodes = k.value("time_nodes", rc.kernel.time_nodes);
      }
    }
    rc.validate();

    if (j.contains("convergence")) {
      const json& c = j.at("convergence");
      ConvergenceSpec& cs = cfg.convergence;
      cs.kind = c.value("kind", cs.kind);
      cs.manufactured = c.value("manufactured", cs.manufactured);
      cs.base_cells = c.value("base_cells", cs.base_cells);
      cs.base_steps = c.value("base_steps", cs.base_steps);
      cs.fixed_cells = c.value("fixed_cells", cs.fixed_cells);
      cs.fixed_steps = c.value("fixed_steps", cs.fixed_steps);
      cs.f = c.value("f", cs.f);
      if (cs.kind != "space" && cs.kind != "time") {
        throw ConfigError("convergence kind must be 'space' or 'time'");
      }
    }

    // inverse-crime guard
    for (int axis = 0; axis < cfg.domain.dimension(); ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      if (cfg.synthesis.fine_cells[a] <= rc.grid_cells[a]) {
        throw ConfigError("synthesis grid must be strictly finer than the reconstruction grid");
      }
    }
    if (cfg.synthesis.fine_steps % cfg.synthesis.coarse_steps != 0) {
      throw ConfigError("observation steps must divide the synthesis steps");
    }

    const NonlinearityFn f = make_nonlinearity(cfg.f);
    const DirichletData phi = make_dirichlet(cfg.phi, cfg.domain, cfg.horizon);
    try {
      check_admissible(f, std::max(max_dirichlet(phi, cfg.domain), 1e-12));
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

}  // namespace semirecon
