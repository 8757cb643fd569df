// semirecon: synthesize observations, reconstruct f, run verification suites
// and convergence studies.
//
// Exit codes: 0 success, 2 input/config error, 3 numerical failure or a
// failed verification check.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "semirecon/errors.hpp"
#include "semirecon/io.hpp"
#include "semirecon/reconstruction.hpp"
#include "semirecon/scenario.hpp"
#include "semirecon/suites.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace semirecon;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

fs::path output_dir(const std::string& override_dir, const std::string& config_dir) {
  fs::path dir = override_dir.empty() ? fs::path(config_dir) : fs::path(override_dir);
  if (const char* root = std::getenv("SEMIRECON_OUTPUT_ROOT"); root != nullptr && dir.is_relative()) {
    dir = fs::path(root) / dir;
  }
  return dir;
}

ScenarioConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  json j = io::read_json(path);
  if (seed) j["seed"] = *seed;
  return parse_scenario(j);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Options {
  std::string config;
  std::string observation;
  std::string out;
  std::string suite = "all";
  std::optional<std::uint64_t> seed;
  std::optional<int> levels;
  std::string kind;
  bool timings = false;
};

int cmd_synthesize(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = load_config(opt.config, opt.seed);
  const NonlinearityFn f = make_nonlinearity(cfg.f);
  const DirichletData phi = make_dirichlet(cfg.phi, cfg.domain, cfg.horizon);
  const ObservedData obs =
      synthesize_observation(cfg.domain, f, phi, cfg.synthesis, cfg.noise, cfg.seed);
  const fs::path dir = output_dir(opt.out, cfg.output_dir);
  io::write_observation(dir, obs, cfg.echo);
  std::cout << "wrote " << (dir / io::kMetaFile).string() << " and " << (dir / io::kFluxFile).string()
            << "\n";
  if (opt.timings) std::cout << "synthesize: " << seconds_since(start) << " s\n";
  return 0;
}

int cmd_reconstruct(const Options& opt) {
  const auto start = std::chrono::steady_clock::now();
  const ScenarioConfig cfg = load_config(opt.config, opt.seed);
  fs::path meta = opt.observation;
  if (fs::is_directory(meta)) meta /= io::kMetaFile;
  const ObservedData obs = io::read_observation(meta);
  if (!(obs.domain() == cfg.domain)) {
    throw ConfigError("observation domain does not match the configured domain");
  }
  const fs::path dir = output_dir(opt.out, cfg.output_dir);

  ReconstructionResult result;
  try {
    result = reconstruct(obs, cfg.reconstruction);
  } catch (const ReconstructionError& e) {
    json diag = io::to_json(e.partial());
    diag["schema_version"] = io::kSchemaVersion;
    diag["status"] = "failed";
    diag["error"] = e.what();
    diag["config"] = cfg.echo;
    fs::create_directories(dir);
    io::write_atomic(dir / "diagnostics.json", diag.dump(2) + "\n");
    std::cerr << "reconstruction failed: " << e.what() << "\n";
    return kExitNumerical;
  }
  const double elapsed = seconds_since(start);

  json diag = io::to_json(result.diagnostics);
  diag["schema_version"] = io::kSchemaVersion;
  diag["status"] = "ok";
  diag["curve"] = io::to_json(result.curve);
  if (result.alternative) diag["alternative_curve"] = io::to_json(*result.alternative);
  diag["config"] = cfg.echo;

  fs::create_directories(dir);
  io::write_atomic(dir / "curve.csv", io::curve_csv(result.curve, cfg.echo));
  io::write_atomic(dir / "diagnostics.json", diag.dump(2) + "\n");

  if (!obs.provenance.generator.empty()) {
    // scoring only: the pipeline above never saw the generator label
    const NonlinearityFn truth = make_nonlinearity(json::parse(obs.provenance.generator));
    const CurveScore score = score_curve(result.curve, truth, result.diagnostics.flux_scale);
    json metrics = {{"schema_version", io::kSchemaVersion},
                    {"generator", json::parse(obs.provenance.generator)},
                    {"trusted_range", {result.curve.trusted_lo, result.curve.trusted_hi}},
                    {"sup_abs_error", score.sup_abs},
                    {"relative_linf_error", score.relative_linf},
                    {"relative_l2_error", score.relative_l2},
                    {"normalization", score.absolute ? "absolute" : "relative"},
                    {"sup_f_hat_over_flux_scale", score.scaled_sup},
                    {"stages", result.diagnostics.completed_stages},
                    {"config", cfg.echo}};
    if (result.diagnostics.extension_discrepancy) {
      metrics["extension_discrepancy"] = *result.diagnostics.extension_discrepancy;
    }
    if (opt.timings) metrics["timings"] = {{"reconstruct_seconds", elapsed}};
    io::write_atomic(dir / "metrics.json", metrics.dump(2) + "\n");
    std::cout << "relative L-inf error " << score.relative_linf << ", relative L2 error "
              << score.relative_l2 << "\n";
  }
  std::cout << "wrote " << (dir / "curve.csv").string() << "\n";
  return 0;
}

int cmd_verify(const Options& opt) {
  const auto reports = run_suites(opt.suite);
  json summary = {{"schema_version", io::kSchemaVersion}, {"suites", json::array()}};
  bool ok = true;
  for (const auto& r : reports) {
    summary["suites"].push_back(to_json(r, opt.timings));
    ok = ok && r.passed();
  }
  summary["status"] = ok ? "pass" : "fail";
  const std::string text = summary.dump(2) + "\n";
  if (!opt.out.empty()) {
    const fs::path path = output_dir(opt.out, "");
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    io::write_atomic(path, text);
  }
  std::cout << text;
  return ok ? 0 : kExitNumerical;
}

int cmd_convergence(const Options& opt) {
  const ScenarioConfig cfg = load_config(opt.config, std::nullopt);
  ConvergenceSpec spec = cfg.convergence;
  if (!opt.kind.empty()) spec.kind = opt.kind;
  const int levels = opt.levels.value_or(cfg.echo.contains("convergence")
                                             ? cfg.echo["convergence"].value("levels", 4)
                                             : 4);
  const auto rows = convergence_study(cfg.domain, cfg.horizon, spec, levels);
  json echo = cfg.echo;
  echo["convergence"]["kind"] = spec.kind;
  echo["convergence"]["levels"] = levels;
  const std::string csv = convergence_csv(rows, echo);
  const fs::path dir = output_dir(opt.out, cfg.output_dir);
  fs::create_directories(dir);
  io::write_atomic(dir / ("convergence_" + spec.kind + ".csv"), csv);
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction of a semilinear term from boundary measurements"};
  app.require_subcommand(1);
  Options opt;

  auto* syn = app.add_subcommand("synthesize", "Solve the forward problem and write an observation");
  syn->add_option("config", opt.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  syn->add_option("--seed", opt.seed, "Override the configured noise seed");
  syn->add_option("--out", opt.out, "Output directory (default: config output_dir)");
  syn->add_flag("--timings", opt.timings, "Print wall-clock timings");

  auto* rec = app.add_subcommand("reconstruct", "Reconstruct f from an observation");
  rec->add_option("observation", opt.observation, "Observation directory or metadata JSON")->required();
  rec->add_option("config", opt.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  rec->add_option("--out", opt.out, "Output directory (default: config output_dir)");
  rec->add_flag("--timings", opt.timings, "Record wall-clock timings in metrics.json");

  auto* ver = app.add_subcommand("verify", "Run invariant suites");
  ver->add_option("suite", opt.suite, "eigenbasis | kernel | representation | forward | volterra | extension | all");
  ver->add_option("--out", opt.out, "Also write the JSON summary to this file");
  ver->add_flag("--timings", opt.timings, "Include per-suite timings");

  auto* conv = app.add_subcommand("convergence", "Manufactured-solution refinement study");
  conv->add_option("config", opt.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
  conv->add_option("--levels", opt.levels, "Refinement levels (>= 3)");
  conv->add_option("--kind", opt.kind, "space | time")->check(CLI::IsMember({"space", "time"}));
  conv->add_option("--out", opt.out, "Output directory (default: config output_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (app.got_subcommand(syn)) return cmd_synthesize(opt);
    if (app.got_subcommand(rec)) return cmd_reconstruct(opt);
    if (app.got_subcommand(ver)) return cmd_verify(opt);
    return cmd_convergence(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ReconstructionError& e) {
    std::cerr << "reconstruction failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
