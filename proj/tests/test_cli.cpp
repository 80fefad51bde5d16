#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#ifndef RISIA_CLI_BIN
#error "RISIA_CLI_BIN must point at the CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path test_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("risia_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_file = {},
            const fs::path& stderr_file = {}) {
  std::string cmd = std::string(RISIA_CLI_BIN) + " " + args;
  cmd += " > " + (stdout_file.empty() ? "/dev/null" : stdout_file.string());
  cmd += " 2> " + (stderr_file.empty() ? "/dev/null" : stderr_file.string());
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::trunc);
  REQUIRE(out.good());
  out << contents;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_wall_ms(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out << line.substr(0, pos) << '\n';
  }
  return out.str();
}

const char* kSisoConfig = R"({
  "seed": 7,
  "network": {"pairs": 2, "tx_antennas": 1, "rx_antennas": 1, "streams": 1,
              "ris_elements": 0},
  "pursuit": {"r_max": 3}
})";

}  // namespace

TEST_CASE("solve reports the 2-user SISO rank and is byte-reproducible") {
  const fs::path dir = test_dir() / "solve";
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  const fs::path cfg = dir / "config.json";
  write_file(cfg, kSisoConfig);

  const fs::path log = dir / "stdout.txt";
  const int code = run_cli("solve --config " + cfg.string() + " --out " +
                               (dir / "a").string(),
                           log);
  CHECK(code == 0);

  const json sol = json::parse(read_file(dir / "a" / "solution.json"));
  CHECK(sol.at("feasible").get<bool>());
  CHECK(sol.at("rank").get<int>() == 2);
  CHECK(sol.at("dof").get<double>() == 1.0);
  CHECK(sol.at("seed").get<int>() == 7);
  const std::string summary = read_file(log);
  CHECK(summary.find("rank=2") != std::string::npos);

  // Same config and seed: byte-identical output.
  const int code2 = run_cli("solve --config " + cfg.string() + " --seed 7 " +
                            "--out " + (dir / "b").string());
  CHECK(code2 == 0);
  CHECK(read_file(dir / "a" / "solution.json") ==
        read_file(dir / "b" / "solution.json"));
}

TEST_CASE("solve rejects a missing config with a named path") {
  const fs::path dir = test_dir() / "missing";
  fs::create_directories(dir);
  const fs::path err = dir / "stderr.txt";
  const int code =
      run_cli("solve --config " + (dir / "nope.json").string(), {}, err);
  CHECK(code == 1);
  CHECK(read_file(err).find("nope.json") != std::string::npos);
}

TEST_CASE("solve reports infeasibility with exit code 2") {
  const fs::path dir = test_dir() / "infeasible";
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  json doc = json::parse(kSisoConfig);
  doc["pursuit"]["r_max"] = 1;  // true minimal rank is 2
  write_file(cfg, doc.dump());
  const int code = run_cli("solve --config " + cfg.string() + " --out " +
                           dir.string());
  CHECK(code == 2);
}

TEST_CASE("dotted-path overrides reach nested options") {
  const fs::path dir = test_dir() / "override";
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  write_file(cfg, kSisoConfig);
  // Restrict the rank budget through --set: infeasible now.
  const int code = run_cli("solve --config " + cfg.string() +
                           " --set pursuit.r_max=1 --out " + dir.string());
  CHECK(code == 2);
  // Unknown keys introduced by overrides are rejected.
  const int bad = run_cli("solve --config " + cfg.string() +
                          " --set pursuit.bogus=1 --out " + dir.string());
  CHECK(bad == 1);
}

TEST_CASE("sweep emits consistent CSV and JSON, reproducibly") {
  const fs::path dir = test_dir() / "sweep";
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  const fs::path cfg = dir / "config.json";
  write_file(cfg, R"({
    "seed": 5,
    "network": {"pairs": 2, "tx_antennas": 1, "rx_antennas": 1, "streams": 1,
                "ris_elements": 0},
    "pursuit": {"r_max": 2},
    "sweep": {"variable": "ris_elements", "values": [0, 2], "trials": 3,
              "schemes": ["optimized", "no_ris"]}
  })");

  const int code = run_cli("sweep --config " + cfg.string() + " --out " +
                           (dir / "a").string());
  CHECK(code == 0);

  const std::string csv = read_file(dir / "a" / "sweep.csv");
  std::istringstream lines(csv);
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 13);  // header + 2 values x 2 schemes x 3 trials
  CHECK(rows[0] ==
        "variable,value,scheme,trial,rank,dof,residual,sum_rate_bps_hz,"
        "wall_ms");

  // CSV rows match the JSON records field for field.
  const json records = json::parse(read_file(dir / "a" / "sweep.json"));
  REQUIRE(records.size() == 12);
  for (std::size_t k = 0; k < records.size(); ++k) {
    std::istringstream row(rows[k + 1]);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 9);
    const json& rec = records[k];
    CHECK(fields[0] == rec.at("variable").get<std::string>());
    CHECK(std::stod(fields[1]) == rec.at("value").get<double>());
    CHECK(fields[2] == rec.at("scheme").get<std::string>());
    CHECK(std::stoi(fields[3]) == rec.at("trial").get<int>());
    CHECK(std::stoi(fields[4]) == rec.at("rank").get<int>());
    CHECK(std::stod(fields[5]) == rec.at("dof").get<double>());
    CHECK(std::stod(fields[6]) == rec.at("residual").get<double>());
    CHECK(std::stod(fields[7]) == rec.at("sum_rate_bps_hz").get<double>());
  }

  // Reruns agree byte for byte outside the timing column.
  const int code2 = run_cli("sweep --config " + cfg.string() + " --out " +
                            (dir / "b").string());
  CHECK(code2 == 0);
  CHECK(strip_wall_ms(csv) ==
        strip_wall_ms(read_file(dir / "b" / "sweep.csv")));
}

TEST_CASE("verify round trip, perturbation sensitivity, and tampering") {
  const fs::path dir = test_dir() / "verify";
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  // Receivers parked next to the RIS so the reflect path carries weight;
  // the tight outer tolerance sharpens the verification threshold.
  write_file(cfg, R"({
    "seed": 3,
    "network": {"pairs": 2, "tx_antennas": 1, "rx_antennas": 1, "streams": 1,
                "ris_elements": 2},
    "layout": {"rx_region": [24.5, 25.5, 19.5, 20.5]},
    "pursuit": {"outer_tol": 1e-8, "r_max": 2}
  })");

  const int solve_code =
      run_cli("solve --config " + cfg.string() + " --out " + dir.string());
  REQUIRE(solve_code == 0);
  const fs::path sol_path = dir / "solution.json";

  CHECK(run_cli("verify " + sol_path.string() + " --config " + cfg.string()) ==
        0);

  // Rotate one reflection coefficient by 0.1 rad: leakage must blow past
  // the tolerance.
  json doc = json::parse(read_file(sol_path));
  const double re = doc["phase"][0][0].get<double>();
  const double im = doc["phase"][0][1].get<double>();
  const std::complex<double> rotated =
      std::complex<double>(re, im) * std::polar(1.0, 0.1);
  doc["phase"][0][0] = rotated.real();
  doc["phase"][0][1] = rotated.imag();
  const fs::path perturbed = dir / "perturbed.json";
  write_file(perturbed, doc.dump());
  CHECK(run_cli("verify " + perturbed.string() + " --config " +
                cfg.string()) == 2);

  // Tampered shapes are a hard error.
  json broken = json::parse(read_file(sol_path));
  broken["decoders"][0].erase(0);
  const fs::path tampered = dir / "tampered.json";
  write_file(tampered, broken.dump());
  CHECK(run_cli("verify " + tampered.string() + " --config " + cfg.string()) ==
        1);

  // Seed mismatch is a hard error too.
  CHECK(run_cli("verify " + sol_path.string() + " --config " + cfg.string() +
                " --seed 4") == 1);
}
