// Command-line front end: seeded, reproducible solves, experiment sweeps,
// and verification of stored solutions against regenerated channels.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "risia/ia_core.hpp"
#include "risia/netsim.hpp"
#include "risia/pursuit.hpp"
#include "risia/serialize.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;  // also: verification failed

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::int64_t> seed;
  std::vector<std::string> overrides;
  int threads = 1;
};

json load_raw_config(const CommonArgs& args) {
  std::ifstream in(args.config_path);
  if (!in)
    throw std::invalid_argument("cannot open config file: " +
                                args.config_path);
  json doc = json::parse(in);  // parse errors carry line/byte diagnostics
  for (const auto& assignment : args.overrides)
    risia::apply_override(doc, assignment);
  if (args.seed) doc["seed"] = *args.seed;
  return doc;
}

int cmd_solve(const CommonArgs& args) {
  const risia::RunConfig cfg =
      risia::parse_run_config(load_raw_config(args));
  const double noise = std::pow(10.0, cfg.noise_power_db / 10.0);
  const risia::ChannelSet ch = risia::sample_channels(
      cfg.network, cfg.layout, cfg.fading, cfg.seed, noise, cfg.tx_power);

  risia::PursuitOptions opts = cfg.pursuit;
  opts.seed = cfg.seed;
  const risia::AlignmentSolution sol = risia::riemannian_pursuit(ch, opts);

  const fs::path out = fs::path(args.out_dir) / "solution.json";
  risia::write_file_atomic(
      out, risia::solution_to_json(sol, cfg.network, cfg.seed).dump(2) + "\n");

  std::cout << "solve: " << (sol.feasible ? "feasible" : "infeasible")
            << "  rank=" << sol.rank << "  dof=" << sol.dof
            << "  residual=" << risia::format_double(sol.residual) << "\n";
  if (sol.feasible)
    std::cout << "sum rate @ " << cfg.snr_db
              << " dB SNR: " << risia::sum_rate(ch, sol, cfg.snr_db)
              << " bits/s/Hz\n";
  std::cout << "solution written to " << out.string() << "\n";
  return sol.feasible ? kExitOk : kExitInfeasible;
}

int cmd_sweep(const CommonArgs& args) {
  const risia::RunConfig cfg =
      risia::parse_run_config(load_raw_config(args));
  const risia::SweepSpec spec = cfg.make_sweep_spec(args.threads);
  const std::vector<risia::ExperimentRecord> records = risia::run_sweep(spec);

  const fs::path csv_path = fs::path(args.out_dir) / "sweep.csv";
  const fs::path json_path = fs::path(args.out_dir) / "sweep.json";
  risia::write_file_atomic(csv_path,
                           risia::records_to_csv(records, spec.variable));
  risia::write_file_atomic(
      json_path,
      risia::records_to_json(records, spec.variable).dump(2) + "\n");

  int failures = 0;
  for (const auto& rec : records) failures += rec.failed ? 1 : 0;
  std::cout << "sweep: " << records.size() << " records (" << failures
            << " failed trials)\n"
            << "records written to " << csv_path.string() << " and "
            << json_path.string() << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& solution_path, const CommonArgs& args) {
  const risia::RunConfig cfg =
      risia::parse_run_config(load_raw_config(args));
  const risia::StoredSolution stored = risia::load_solution(solution_path);

  if (stored.seed != cfg.seed)
    throw std::invalid_argument("solution/config seed mismatch");
  const auto& net = cfg.network;
  if (stored.network.pairs != net.pairs ||
      stored.network.tx_antennas != net.tx_antennas ||
      stored.network.rx_antennas != net.rx_antennas ||
      stored.network.streams != net.streams ||
      stored.network.ris_elements != net.ris_elements)
    throw std::invalid_argument("solution/config network mismatch");
  if (!stored.solution.feasible)
    throw std::invalid_argument("solution is marked infeasible; nothing to "
                                "verify");

  const double noise = std::pow(10.0, cfg.noise_power_db / 10.0);
  const risia::ChannelSet ch = risia::sample_channels(
      net, cfg.layout, cfg.fading, cfg.seed, noise, cfg.tx_power);

  const double tol = 10.0 * std::sqrt(2.0 * cfg.pursuit.outer_tol);
  const risia::AlignmentReport report = risia::verify_alignment(
      ch, stored.solution.phase, stored.solution.decoders,
      stored.solution.precoders, tol);

  std::cout << "max interference leakage:  "
            << risia::format_double(report.max_interference_leakage) << "\n"
            << "max identity deviation:    "
            << risia::format_double(report.max_identity_deviation) << "\n"
            << "tolerance:                 " << risia::format_double(tol)
            << "\n"
            << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted interference alignment solver and channel "
               "simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string solution_path;

  auto add_common = [&](CLI::App* cmd, bool with_threads) {
    cmd->add_option("--config", args.config_path, "JSON run configuration")
        ->required();
    cmd->add_option("--seed", args.seed, "override the config seed");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--set", args.overrides,
                    "dotted-path config override, KEY.PATH=VALUE");
    if (with_threads)
      cmd->add_option("--threads", args.threads, "worker threads for trials");
  };

  CLI::App* solve = app.add_subcommand("solve", "run the rank pursuit once");
  add_common(solve, false);
  CLI::App* sweep = app.add_subcommand("sweep", "run an experiment sweep");
  add_common(sweep, true);
  CLI::App* verify =
      app.add_subcommand("verify", "check a stored solution against "
                         "regenerated channels");
  verify->add_option("solution", solution_path, "solution JSON file")
      ->required();
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (solve->parsed()) return cmd_solve(args);
    if (sweep->parsed()) return cmd_sweep(args);
    if (verify->parsed()) return cmd_verify(solution_path, args);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
