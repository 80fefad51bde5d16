#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "risia/netsim.hpp"
#include "risia/pursuit.hpp"
#include "risia/types.hpp"

namespace risia {

/// Sweep section of a run configuration (the base network, layout, fading
/// and solver settings live at the top level of the file).
struct SweepSection {
  SweepVariable variable = SweepVariable::RisElements;
  std::vector<double> values;
  int trials = 1;
  std::vector<Scheme> schemes{Scheme::Optimized, Scheme::RandomPhase,
                              Scheme::NoRis};
};

/// One JSON document describing a run. Unknown keys are rejected and every
/// field is range-checked on load; defaults apply only to absent keys.
struct RunConfig {
  NetworkConfig network = NetworkConfig::symmetric(1, 1, 1, 1, 0);
  LayoutSpec layout;
  FadingSpec fading;
  PursuitOptions pursuit;
  std::optional<SweepSection> sweep;
  double noise_power_db = -120.0;
  double tx_power = 1.0;
  double snr_db = 120.0;
  std::uint64_t seed = 1;

  SweepSpec make_sweep_spec(int threads) const;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies a dotted-path override (e.g. "pursuit.r_max=6") onto a raw JSON
/// document; the value is parsed as JSON with a fallback to string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

nlohmann::json solution_to_json(const AlignmentSolution& sol,
                                const NetworkConfig& net, std::uint64_t seed);

struct StoredSolution {
  std::uint64_t seed = 0;
  NetworkConfig network;
  AlignmentSolution solution;
};

StoredSolution parse_solution(const nlohmann::json& doc);
StoredSolution load_solution(const std::filesystem::path& path);

nlohmann::json records_to_json(const std::vector<ExperimentRecord>& records,
                               SweepVariable variable);
std::string records_to_csv(const std::vector<ExperimentRecord>& records,
                           SweepVariable variable);

/// Shortest round-trip decimal representation (>= 17 significant digits
/// where needed).
std::string format_double(double value);

/// Writes through a temp file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

}  // namespace risia
