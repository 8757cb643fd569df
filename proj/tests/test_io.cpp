#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "semirecon/errors.hpp"
#include "semirecon/io.hpp"
#include "semirecon/scenario.hpp"

using namespace semirecon;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("semirecon_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ObservedData small_observation(const DomainSpec& domain, double noise) {
  SynthesisParams p;
  if (domain.dimension() == 1) {
    p.fine_cells = {64, 0};
    p.coarse_cells = {16, 0};
  } else {
    p.fine_cells = {16, 16};
    p.coarse_cells = {8, 4};
  }
  p.fine_steps = 32;
  p.coarse_steps = 8;
  return synthesize_observation(domain, make_nonlinearity({{"family", "linear"}, {"c", 1.0}}),
                                make_dirichlet({{"time", "linear"}, {"profile", "cosine"}}, domain, 1.0), p,
                                noise, 11);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

json base_config() {
  return json::parse(R"({
    "domain": {"kind": "interval", "lengths": [1.0]},
    "horizon": 1.0,
    "synthesis": {"cells": [256], "steps": 256},
    "observation": {"cells": [64], "steps": 64},
    "phi": {"time": "linear", "profile": "constant"},
    "f": {"family": "linear", "c": 1.0},
    "reconstruction": {"cells": [64]}
  })");
}

}  // namespace

TEST(FormatDouble, RoundTripsExactly) {
  for (double v : {0.0, -0.0, 1.0 / 3.0, 1e-300, -2.5e17, 0.1, std::numeric_limits<double>::max(),
                   std::numeric_limits<double>::denorm_min()}) {
    EXPECT_EQ(std::strtod(io::format_double(v).c_str(), nullptr), v) << io::format_double(v);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(Observation, RoundTripIsBitwise) {
  for (const auto& d : {DomainSpec::interval(2.0), DomainSpec::rectangle(1.0, 0.5)}) {
    TempDir dir;
    const ObservedData obs = small_observation(d, 0.02);
    io::write_observation(dir.path(), obs, {{"tag", "x"}});
    const ObservedData back = io::read_observation(dir.path() / io::kMetaFile);
    EXPECT_TRUE(back.domain() == d);
    EXPECT_EQ(back.seed, 11u);
    EXPECT_EQ(back.noise, 0.02);
    EXPECT_EQ(back.provenance.generator, obs.provenance.generator);
    EXPECT_EQ(back.provenance.fine_steps, 32);
    ASSERT_EQ(back.flux.values().size(), obs.flux.values().size());
    for (std::size_t i = 0; i < obs.flux.values().size(); ++i) {
      ASSERT_EQ(back.flux.values()[i], obs.flux.values()[i]);
      ASSERT_EQ(back.phi.values()[i], obs.phi.values()[i]);
    }
    EXPECT_EQ(back.flux.nodes().size(), obs.flux.nodes().size());
    EXPECT_EQ(back.flux.time().steps(), 8);
  }
}

TEST(Observation, CsvCarriesSchemaAndConfig) {
  TempDir dir;
  io::write_observation(dir.path(), small_observation(DomainSpec::interval(1.0), 0.0), {{"tag", "x"}});
  const std::string csv = slurp(dir.path() / io::kFluxFile);
  EXPECT_EQ(csv.rfind("# schema_version: 1\n# config: {\"tag\":\"x\"}\nnode_id,x,y,t,flux,phi\n", 0), 0u);
  const json meta = io::read_json(dir.path() / io::kMetaFile);
  EXPECT_EQ(meta.at("schema_version"), 1);
  EXPECT_EQ(meta.at("config").at("tag"), "x");
}

TEST(Observation, MissingFluxColumnIsRejected) {
  TempDir dir;
  io::write_observation(dir.path(), small_observation(DomainSpec::interval(1.0), 0.0), json::object());
  std::string csv = slurp(dir.path() / io::kFluxFile);
  csv.replace(csv.find(",flux,"), 6, ",flox,");
  spit(dir.path() / io::kFluxFile, csv);
  try {
    io::read_observation(dir.path() / io::kMetaFile);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("flux"), std::string::npos);
  }
}

TEST(Observation, IncompleteOrCorruptFilesAreRejected) {
  TempDir dir;
  io::write_observation(dir.path(), small_observation(DomainSpec::interval(1.0), 0.0), json::object());
  const std::string csv = slurp(dir.path() / io::kFluxFile);
  const std::string meta = slurp(dir.path() / io::kMetaFile);
  const fs::path meta_path = dir.path() / io::kMetaFile;

  spit(dir.path() / io::kFluxFile, csv.substr(0, csv.rfind('\n', csv.size() - 2) + 1));
  EXPECT_THROW(io::read_observation(meta_path), InputError);

  spit(dir.path() / io::kFluxFile, csv + "0,0,0,0.33,1,1\n");
  EXPECT_THROW(io::read_observation(meta_path), InputError);

  spit(dir.path() / io::kFluxFile, csv + "0,0,0,abc,1,1\n");
  EXPECT_THROW(io::read_observation(meta_path), InputError);

  spit(dir.path() / io::kFluxFile, csv);
  json m = json::parse(meta);
  m["schema_version"] = 2;
  spit(meta_path, m.dump());
  EXPECT_THROW(io::read_observation(meta_path), InputError);
  spit(meta_path, "{not json");
  EXPECT_THROW(io::read_observation(meta_path), InputError);
  EXPECT_THROW(io::read_observation(dir.path() / "absent.json"), InputError);
}

TEST(CurveCsv, HeaderAndRows) {
  CurveEstimate c;
  c.knots = {0.0, 0.5};
  c.values = {0.0, 0.25};
  c.counts = {0, 7};
  c.spread = {0.0, 0.125};
  const std::string csv = io::curve_csv(c, {{"k", 1}});
  EXPECT_EQ(csv, "# schema_version: 1\n# config: {\"k\":1}\nknot_phi,f_hat,sample_count,spread\n0,0,0,0\n0.5,0.25,7,0.125\n");
  const json j = io::to_json(c);
  EXPECT_EQ(j.at("counts")[1], 7);
}

TEST(Nonlinearity, FamiliesEvaluate) {
  const auto lin = make_nonlinearity({{"family", "linear"}, {"c", 2.0}});
  EXPECT_EQ(lin.value(0.5), 1.0);
  EXPECT_EQ(lin.derivative(0.5), 2.0);
  const auto pw = make_nonlinearity({{"family", "power"}, {"c", 1.5}, {"p", 3.0}});
  EXPECT_DOUBLE_EQ(pw.value(2.0), 12.0);
  EXPECT_DOUBLE_EQ(pw.derivative(2.0), 18.0);
  EXPECT_EQ(pw.value(-1.0), 0.0);
  const auto sat = make_nonlinearity({{"family", "saturating"}, {"c", 1.0}});
  EXPECT_DOUBLE_EQ(sat.value(1.0), 0.5);
  EXPECT_DOUBLE_EQ(sat.derivative(1.0), 0.25);
  const auto zero = make_nonlinearity({{"family", "zero"}});
  EXPECT_EQ(zero.value(3.0), 0.0);
  EXPECT_EQ(lin.label, json({{"family", "linear"}, {"c", 2.0}}).dump());

  EXPECT_THROW(make_nonlinearity({{"family", "linear"}, {"c", -1.0}}), ConfigError);
  EXPECT_THROW(make_nonlinearity({{"family", "power"}, {"c", 1.0}, {"p", 0.5}}), ConfigError);
  EXPECT_THROW(make_nonlinearity({{"family", "cubic"}}), ConfigError);
}

TEST(Dirichlet, FamiliesEvaluate) {
  const auto d = DomainSpec::rectangle(2.0, 1.0);
  const auto phi = make_dirichlet({{"time", "saturating"}, {"rate", 2.0}, {"profile", "cosine"}, {"amplitude", 3.0}}, d, 1.0);
  EXPECT_NEAR(phi.phi({0.0, 0.3}, 0.5), 3.0 * (1.0 - std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(phi.phi({2.0, 0.3}, 0.5), 0.0, 1e-15);
  const auto lin = make_dirichlet({{"time", "linear"}, {"profile", "linear_x"}}, d, 1.0);
  EXPECT_DOUBLE_EQ(lin.phi({1.5, 0.0}, 0.5), 0.75);
  EXPECT_THROW(make_dirichlet({{"time", "cubic"}}, d, 1.0), ConfigError);
  EXPECT_THROW(make_dirichlet({{"profile", "gauss"}}, d, 1.0), ConfigError);
  EXPECT_THROW(make_dirichlet({{"amplitude", -1.0}}, d, 1.0), ConfigError);
}

TEST(Scenario, ParsesDefaultsAndEcho) {
  const ScenarioConfig cfg = parse_scenario(base_config());
  EXPECT_TRUE(cfg.domain == DomainSpec::interval(1.0));
  EXPECT_EQ(cfg.synthesis.fine_steps, 256);
  EXPECT_EQ(cfg.synthesis.coarse_steps, 64);
  EXPECT_EQ(cfg.reconstruction.grid_cells[0], 64);
  EXPECT_EQ(cfg.noise, 0.0);
  EXPECT_EQ(cfg.echo, base_config());
}

TEST(Scenario, RejectsInvalidConfigurations) {
  auto expect_bad = [](auto&& edit) {
    json j = base_config();
    edit(j);
    EXPECT_THROW(parse_scenario(j), ConfigError) << j.dump();
  };
  expect_bad([](json& j) { j["reconstruction"]["cells"] = {256}; });  // inverse crime
  expect_bad([](json& j) { j["observation"]["steps"] = 100; });
  expect_bad([](json& j) { j["f"] = {{"family", "linear"}, {"c", -2.0}}; });
  expect_bad([](json& j) { j["f"] = {{"family", "exotic"}}; });
  expect_bad([](json& j) { j["noise"] = -0.1; });
  expect_bad([](json& j) { j["domain"] = {{"kind", "disk"}, {"lengths", {1.0}}}; });
  expect_bad([](json& j) { j["domain"]["lengths"] = {1.0, 2.0}; });
  expect_bad([](json& j) { j["schema_version"] = 9; });
  expect_bad([](json& j) { j["horizon"] = "long"; });
  expect_bad([](json& j) { j["reconstruction"]["quantiles"] = {0.1}; });
  expect_bad([](json& j) { j["reconstruction"]["extension"] = "whitney"; });
  expect_bad([](json& j) { j["convergence"] = {{"kind", "both"}}; });
}
