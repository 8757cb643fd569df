#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "semirecon/observation.hpp"
#include "semirecon/reconstruction.hpp"

namespace semirecon::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kFluxFile = "observation_flux.csv";
inline constexpr const char* kMetaFile = "observation_meta.json";

// Writes `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

// Shortest text that reads back to the same double.
std::string format_double(double v);

// observation_flux.csv (node_id,x,y,t,flux,phi) plus observation_meta.json.
void write_observation(const std::filesystem::path& dir, const ObservedData& obs,
                       const nlohmann::json& config_echo);

// Reads an observation from its metadata file. Throws InputError on schema
// mismatch or missing columns.
ObservedData read_observation(const std::filesystem::path& meta_path);

// knot_phi,f_hat,sample_count,spread
std::string curve_csv(const CurveEstimate& curve, const nlohmann::json& config_echo);

nlohmann::json to_json(const ReconstructionDiagnostics& diag);
nlohmann::json to_json(const CurveEstimate& curve);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace semirecon::io
