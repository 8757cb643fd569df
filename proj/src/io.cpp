#include "semirecon/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "semirecon/errors.hpp"

namespace semirecon::io {

namespace fs = std::filesystem;
using nlohmann::json;

void write_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json domain_json(const DomainSpec& d) {
  if (d.kind() == DomainKind::Interval) return {{"kind", "interval"}, {"lengths", {d.length(0)}}};
  return {{"kind", "rectangle"}, {"lengths", {d.length(0), d.length(1)}}};
}

DomainSpec domain_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto lengths = j.at("lengths").get<std::vector<double>>();
  if (kind == "interval" && lengths.size() == 1) return DomainSpec::interval(lengths[0]);
  if (kind == "rectangle" && lengths.size() == 2) return DomainSpec::rectangle(lengths[0], lengths[1]);
  throw InputError("unsupported domain in observation metadata");
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw InputError("malformed number '" + s + "'");
  return v;
}

}  // namespace

void write_observation(const fs::path& dir, const ObservedData& obs, const json& config_echo) {
  obs.validate();
  const BoundaryNodeSet& nodes = obs.flux.nodes();
  const TimeGrid& time = obs.flux.time();

  std::ostringstream csv;
  csv << "# schema_version: " << kSchemaVersion << "\n";
  csv << "# config: " << config_echo.dump() << "\n";
  csv << "node_id,x,y,t,flux,phi\n";
  for (int j = 0; j <= time.steps(); ++j) {
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      csv << b << ',' << format_double(nodes[b].position.x) << ','
          << format_double(nodes[b].position.y) << ',' << format_double(time.time(j)) << ','
          << format_double(obs.flux.at(j, b)) << ',' << format_double(obs.phi.at(j, b)) << '\n';
    }
  }

  json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["domain"] = domain_json(obs.domain());
  meta["boundary_resolution"] = {nodes.resolution(0), nodes.resolution(1)};
  meta["time"] = {{"horizon", time.horizon()}, {"steps", time.steps()}};
  meta["noise"] = obs.noise;
  meta["seed"] = obs.seed;
  meta["flux_file"] = kFluxFile;
  meta["provenance"] = {{"fine_cells", obs.provenance.fine_cells},
                        {"fine_steps", obs.provenance.fine_steps},
                        {"generator", obs.provenance.generator},
                        {"dirichlet", obs.provenance.dirichlet}};
  meta["config"] = config_echo;

  write_atomic(dir / kFluxFile, csv.str());
  write_atomic(dir / kMetaFile, meta.dump(2) + "\n");
}

ObservedData read_observation(const fs::path& meta_path) {
  json meta;
  try {
    meta = read_json(meta_path);
    if (meta.at("schema_version").get<int>() != kSchemaVersion) {
      throw InputError("unsupported observation schema version");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("observation metadata: ") + e.what());
  }

  try {
    const DomainSpec domain = domain_from(meta.at("domain"));
    const auto res = meta.at("boundary_resolution").get<std::array<int, 2>>();
    const BoundaryNodeSet nodes = boundary_nodes(domain, res[0], res[1]);
    const TimeGrid time(meta.at("time").at("horizon").get<double>(),
                        meta.at("time").at("steps").get<int>());

    const fs::path csv_path = meta_path.parent_path() / meta.at("flux_file").get<std::string>();
    std::ifstream in(csv_path);
    if (!in) throw InputError("cannot open " + csv_path.string());
    std::string line;
    std::map<std::string, std::size_t> column;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto header = split(line);
      for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
      break;
    }
    for (const char* name : {"node_id", "t", "flux", "phi"}) {
      if (!column.contains(name)) {
        throw InputError(std::string("observation file lacks column '") + name + "'");
      }
    }

    BoundaryTrace flux(nodes, time);
    BoundaryTrace phi(nodes, time);
    std::vector<char> seen(nodes.size() * time.size(), 0);
    const double dt = time.step();
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto cells = split(line);
      if (cells.size() != column.size()) throw InputError("ragged row in observation file");
      const auto node = static_cast<std::size_t>(parse_double(cells[column["node_id"]]));
      const double t = parse_double(cells[column["t"]]);
      const long j = std::lround(t / dt);
      if (node >= nodes.size() || j < 0 || j > time.steps() || std::abs(j * dt - t) > 1e-9 * (1.0 + t)) {
        throw InputError("observation row outside the declared grid");
      }
      const int ji = static_cast<int>(j);
      flux.at(ji, node) = parse_double(cells[column["flux"]]);
      phi.at(ji, node) = parse_double(cells[column["phi"]]);
      seen[static_cast<std::size_t>(ji) * nodes.size() + node] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw InputError("observation file does not cover every node and time");
    }

    ObservedData obs{std::move(phi), std::move(flux), meta.at("noise").get<double>(),
                     meta.at("seed").get<std::uint64_t>(), {}};
    const json& prov = meta.at("provenance");
    obs.provenance.fine_cells = prov.at("fine_cells").get<std::array<int, 2>>();
    obs.provenance.fine_steps = prov.at("fine_steps").get<int>();
    obs.provenance.generator = prov.at("generator").get<std::string>();
    obs.provenance.dirichlet = prov.at("dirichlet").get<std::string>();
    return obs;
  } catch (const json::exception& e) {
    throw InputError(std::string("observation metadata: ") + e.what());
  } catch (const ConfigError& e) {
    throw InputError(std::string("observation metadata: ") + e.what());
  }
}

std::string curve_csv(const CurveEstimate& curve, const json& config_echo) {
  std::ostringstream csv;
  csv << "# schema_version: " << kSchemaVersion << "\n";
  csv << "# config: " << config_echo.dump() << "\n";
  csv << "knot_phi,f_hat,sample_count,spread\n";
  for (std::size_t i = 0; i < curve.knots.size(); ++i) {
    csv << format_double(curve.knots[i]) << ',' << format_double(curve.values[i]) << ','
        << curve.counts[i] << ',' << format_double(curve.spread[i]) << '\n';
  }
  return csv.str();
}

json to_json(const ReconstructionDiagnostics& diag) {
  json j;
  j["completed_stages"] = diag.completed_stages;
  j["mode_energies"] = diag.mode_energies;
  j["tail_energy_fraction"] = diag.tail_energy_fraction;
  j["initial_coefficient_residual"] = diag.initial_coefficient_residual;
  j["a_range"] = {diag.a_min, diag.a_max};
  j["flux_scale"] = diag.flux_scale;
  j["initial_flux_difference"] = diag.initial_flux_difference;
  j["extension_discrepancy"] =
      diag.extension_discrepancy ? json(*diag.extension_discrepancy) : json(nullptr);
  j["trusted_range"] = {diag.trusted_lo, diag.trusted_hi};
  j["dropped_bins"] = diag.dropped_bins;
  return j;
}

json to_json(const CurveEstimate& curve) {
  return {{"knots", curve.knots},
          {"values", curve.values},
          {"counts", curve.counts},
          {"spread", curve.spread},
          {"trusted_range", {curve.trusted_lo, curve.trusted_hi}},
          {"max_phi", curve.max_phi},
          {"dropped_bins", curve.dropped_bins}};
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace semirecon::io
