#include "risia/serialize.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace risia {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config error at " + where + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      fail(where, "unknown key '" + item.key() + "'");
  }
}

double get_number(const json& obj, const std::string& where,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

/// Rician factors accept numbers or the string "inf".
double get_beta(const json& obj, const std::string& where,
                const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    for (auto& c : s) c = static_cast<char>(std::tolower(c));
    if (s == "inf" || s == "infinity")
      return std::numeric_limits<double>::infinity();
    fail(where + "." + key, "expected a number or \"inf\"");
  }
  if (!v.is_number()) fail(where + "." + key, "expected a number or \"inf\"");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key,
            int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& where, const std::string& key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::vector<int> get_count_list(const json& obj, const std::string& where,
                                const std::string& key, int pairs,
                                int fallback) {
  if (!obj.contains(key))
    return std::vector<int>(static_cast<std::size_t>(pairs), fallback);
  const json& v = obj.at(key);
  if (v.is_number_integer())
    return std::vector<int>(static_cast<std::size_t>(pairs), v.get<int>());
  if (!v.is_array()) fail(where + "." + key, "expected an integer or array");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer())
      fail(where + "." + key, "expected integer entries");
    out.push_back(e.get<int>());
  }
  return out;
}

std::array<double, 4> get_region(const json& obj, const std::string& where,
                                 const std::string& key,
                                 std::array<double, 4> fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 4)
    fail(where + "." + key, "expected [x0, x1, y0, y1]");
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    if (!v[i].is_number()) fail(where + "." + key, "expected numbers");
    out[static_cast<std::size_t>(i)] = v[i].get<double>();
  }
  return out;
}

NetworkConfig parse_network(const json& obj) {
  reject_unknown_keys(obj, "network",
                      {"pairs", "tx_antennas", "rx_antennas", "streams",
                       "ris_elements"});
  NetworkConfig net;
  net.pairs = get_int(obj, "network", "pairs", 1);
  if (net.pairs < 1) fail("network.pairs", "must be >= 1");
  net.tx_antennas = get_count_list(obj, "network", "tx_antennas", net.pairs, 1);
  net.rx_antennas = get_count_list(obj, "network", "rx_antennas", net.pairs, 1);
  net.streams = get_count_list(obj, "network", "streams", net.pairs, 1);
  net.ris_elements = get_int(obj, "network", "ris_elements", 0);
  net.validate();
  return net;
}

LayoutSpec parse_layout(const json& obj) {
  reject_unknown_keys(obj, "layout",
                      {"ris_position", "tx_region", "rx_region"});
  LayoutSpec layout;
  if (obj.contains("ris_position")) {
    const json& v = obj.at("ris_position");
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
      fail("layout.ris_position", "expected [x, y]");
    layout.ris_position = {v[0].get<double>(), v[1].get<double>()};
  }
  layout.tx_region = get_region(obj, "layout", "tx_region", layout.tx_region);
  layout.rx_region = get_region(obj, "layout", "rx_region", layout.rx_region);
  layout.validate();
  return layout;
}

FadingSpec parse_fading(const json& obj) {
  reject_unknown_keys(obj, "fading",
                      {"t0_db", "alpha_direct", "alpha_tx_ris", "alpha_ris_rx",
                       "beta_rt", "beta_it", "beta_ir", "los_model"});
  FadingSpec fading;
  fading.t0_db = get_number(obj, "fading", "t0_db", fading.t0_db);
  fading.alpha_direct =
      get_number(obj, "fading", "alpha_direct", fading.alpha_direct);
  fading.alpha_tx_ris =
      get_number(obj, "fading", "alpha_tx_ris", fading.alpha_tx_ris);
  fading.alpha_ris_rx =
      get_number(obj, "fading", "alpha_ris_rx", fading.alpha_ris_rx);
  fading.beta_rt = get_beta(obj, "fading", "beta_rt", fading.beta_rt);
  fading.beta_it = get_beta(obj, "fading", "beta_it", fading.beta_it);
  fading.beta_ir = get_beta(obj, "fading", "beta_ir", fading.beta_ir);
  if (obj.contains("los_model")) {
    const std::string name = obj.at("los_model").get<std::string>();
    if (name == "steering")
      fading.los_model = LosModel::SteeringOuterProduct;
    else if (name == "ones")
      fading.los_model = LosModel::AllOnes;
    else
      fail("fading.los_model", "expected \"steering\" or \"ones\"");
  }
  fading.validate();
  return fading;
}

PursuitOptions parse_pursuit(const json& obj) {
  reject_unknown_keys(obj, "pursuit",
                      {"outer_tol", "max_alternations", "r_start", "r_max",
                       "restarts_per_rank", "warm_start_rank_increase",
                       "inner"});
  PursuitOptions opts;
  opts.outer_tol = get_number(obj, "pursuit", "outer_tol", opts.outer_tol);
  opts.max_alternations =
      get_int(obj, "pursuit", "max_alternations", opts.max_alternations);
  opts.r_start = get_int(obj, "pursuit", "r_start", opts.r_start);
  opts.r_max = get_int(obj, "pursuit", "r_max", opts.r_max);
  opts.restarts_per_rank =
      get_int(obj, "pursuit", "restarts_per_rank", opts.restarts_per_rank);
  opts.warm_start_rank_increase =
      get_bool(obj, "pursuit", "warm_start_rank_increase",
               opts.warm_start_rank_increase);
  if (obj.contains("inner")) {
    const json& inner = obj.at("inner");
    reject_unknown_keys(inner, "pursuit.inner",
                        {"grad_tol", "max_iters", "armijo_c1", "armijo_shrink",
                         "armijo_max_backtracks", "initial_step"});
    opts.inner.grad_tol =
        get_number(inner, "pursuit.inner", "grad_tol", opts.inner.grad_tol);
    opts.inner.max_iters =
        get_int(inner, "pursuit.inner", "max_iters", opts.inner.max_iters);
    opts.inner.armijo_c1 =
        get_number(inner, "pursuit.inner", "armijo_c1", opts.inner.armijo_c1);
    opts.inner.armijo_shrink = get_number(inner, "pursuit.inner",
                                          "armijo_shrink",
                                          opts.inner.armijo_shrink);
    opts.inner.armijo_max_backtracks =
        get_int(inner, "pursuit.inner", "armijo_max_backtracks",
                opts.inner.armijo_max_backtracks);
    opts.inner.initial_step = get_number(inner, "pursuit.inner",
                                         "initial_step",
                                         opts.inner.initial_step);
  }
  opts.validate();
  return opts;
}

SweepVariable parse_variable(const std::string& name) {
  if (name == "rx_antennas") return SweepVariable::RxAntennas;
  if (name == "snr_db") return SweepVariable::Snr;
  if (name == "rician_rt") return SweepVariable::RicianRT;
  if (name == "ris_elements") return SweepVariable::RisElements;
  fail("sweep.variable", "expected one of rx_antennas, snr_db, rician_rt, "
                         "ris_elements");
}

Scheme parse_scheme(const std::string& name) {
  if (name == "optimized") return Scheme::Optimized;
  if (name == "random_phase") return Scheme::RandomPhase;
  if (name == "no_ris") return Scheme::NoRis;
  fail("sweep.schemes", "expected one of optimized, random_phase, no_ris");
}

SweepSection parse_sweep(const json& obj) {
  reject_unknown_keys(obj, "sweep",
                      {"variable", "values", "trials", "schemes"});
  SweepSection sweep;
  if (!obj.contains("variable")) fail("sweep.variable", "required");
  sweep.variable = parse_variable(obj.at("variable").get<std::string>());
  if (!obj.contains("values") || !obj.at("values").is_array() ||
      obj.at("values").empty())
    fail("sweep.values", "expected a non-empty array");
  for (const auto& v : obj.at("values")) {
    if (v.is_string()) {
      sweep.values.push_back(get_beta(json{{"x", v}}, "sweep", "x", 0.0));
    } else if (v.is_number()) {
      sweep.values.push_back(v.get<double>());
    } else {
      fail("sweep.values", "expected numbers");
    }
  }
  for (std::size_t i = 1; i < sweep.values.size(); ++i)
    if (!(sweep.values[i] > sweep.values[i - 1]))
      fail("sweep.values", "must be strictly increasing");
  sweep.trials = get_int(obj, "sweep", "trials", 1);
  if (sweep.trials < 1) fail("sweep.trials", "must be >= 1");
  if (obj.contains("schemes")) {
    sweep.schemes.clear();
    if (!obj.at("schemes").is_array())
      fail("sweep.schemes", "expected an array");
    for (const auto& s : obj.at("schemes"))
      sweep.schemes.push_back(parse_scheme(s.get<std::string>()));
  }
  return sweep;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(where, "expected [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected a nested array");
  const auto rows = static_cast<Eigen::Index>(v.size());
  Eigen::Index cols = 0;
  if (rows > 0) {
    if (!v[0].is_array()) fail(where, "expected a nested array");
    cols = static_cast<Eigen::Index>(v[0].size());
  }
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!v[r].is_array() || static_cast<Eigen::Index>(v[r].size()) != cols)
      fail(where, "ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(v[r][c], where);
  }
  return m;
}

json network_to_json(const NetworkConfig& net) {
  return json{{"pairs", net.pairs},
              {"tx_antennas", net.tx_antennas},
              {"rx_antennas", net.rx_antennas},
              {"streams", net.streams},
              {"ris_elements", net.ris_elements}};
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) fail("<root>", "expected a JSON object");
  reject_unknown_keys(doc, "<root>",
                      {"seed", "noise_power_db", "tx_power", "snr_db",
                       "network", "layout", "fading", "pursuit", "sweep"});
  RunConfig cfg;
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0)
      fail("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.noise_power_db =
      get_number(doc, "<root>", "noise_power_db", cfg.noise_power_db);
  cfg.tx_power = get_number(doc, "<root>", "tx_power", cfg.tx_power);
  if (!(cfg.tx_power > 0.0)) fail("tx_power", "must be > 0");
  cfg.snr_db = get_number(doc, "<root>", "snr_db", cfg.snr_db);
  if (doc.contains("network")) cfg.network = parse_network(doc.at("network"));
  if (doc.contains("layout")) cfg.layout = parse_layout(doc.at("layout"));
  if (doc.contains("fading")) cfg.fading = parse_fading(doc.at("fading"));
  if (doc.contains("pursuit")) cfg.pursuit = parse_pursuit(doc.at("pursuit"));
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc.at("sweep"));
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw std::invalid_argument("config parse error in " + path.string() +
                                ": " + ex.what());
  }
  return parse_run_config(doc);
}

SweepSpec RunConfig::make_sweep_spec(int threads) const {
  if (!sweep)
    throw std::invalid_argument("config error at sweep: section is required "
                                "for sweeps");
  SweepSpec spec;
  spec.variable = sweep->variable;
  spec.values = sweep->values;
  spec.trials = sweep->trials;
  spec.schemes = sweep->schemes;
  spec.network = network;
  spec.layout = layout;
  spec.fading = fading;
  spec.pursuit = pursuit;
  spec.snr_db = snr_db;
  spec.noise_power_db = noise_power_db;
  spec.tx_power = tx_power;
  spec.seed = seed;
  spec.threads = threads;
  spec.pursuit.seed = seed;
  spec.validate();
  return spec;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::invalid_argument("override must look like key.path=value: " +
                                assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;  // fall back to a plain string

  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty())
      throw std::invalid_argument("override has an empty path segment: " +
                                  assignment);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (!node->is_object() && !node->is_null())
      throw std::invalid_argument("override path crosses a non-object: " +
                                  assignment);
    start = dot + 1;
  }
}

json solution_to_json(const AlignmentSolution& sol, const NetworkConfig& net,
                      std::uint64_t seed) {
  json trace = json::array();
  for (const auto& attempt : sol.trace) {
    trace.push_back(json{{"rank", attempt.rank},
                         {"restart", attempt.restart},
                         {"residual", attempt.residual},
                         {"objective", attempt.history.objective},
                         {"alternations", attempt.history.alternations},
                         {"line_search_failures",
                          attempt.history.line_search_failures}});
  }
  json phase = json::array();
  for (Eigen::Index l = 0; l < sol.phase.size(); ++l)
    phase.push_back(complex_to_json(sol.phase(l)));
  json decoders = json::array();
  for (const auto& u : sol.decoders) decoders.push_back(matrix_to_json(u));
  json precoders = json::array();
  for (const auto& v : sol.precoders) precoders.push_back(matrix_to_json(v));

  return json{{"format", "risia-solution-v1"},
              {"seed", seed},
              {"network", network_to_json(net)},
              {"feasible", sol.feasible},
              {"rank", sol.rank},
              {"dof", sol.dof},
              {"residual", sol.residual},
              {"phase", std::move(phase)},
              {"decoders", std::move(decoders)},
              {"precoders", std::move(precoders)},
              {"trace", std::move(trace)}};
}

StoredSolution parse_solution(const json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "risia-solution-v1")
    throw std::invalid_argument("not a risia solution file");
  StoredSolution out;
  out.seed = doc.at("seed").get<std::uint64_t>();
  out.network = parse_network(doc.at("network"));
  out.solution.feasible = doc.at("feasible").get<bool>();
  out.solution.rank = doc.at("rank").get<int>();
  out.solution.dof = doc.at("dof").get<double>();
  out.solution.residual = doc.at("residual").get<double>();
  const json& phase = doc.at("phase");
  out.solution.phase.resize(static_cast<Eigen::Index>(phase.size()));
  for (std::size_t l = 0; l < phase.size(); ++l)
    out.solution.phase(static_cast<Eigen::Index>(l)) =
        complex_from_json(phase[l], "phase");
  for (const auto& u : doc.at("decoders"))
    out.solution.decoders.push_back(matrix_from_json(u, "decoders"));
  for (const auto& v : doc.at("precoders"))
    out.solution.precoders.push_back(matrix_from_json(v, "precoders"));
  return out;
}

StoredSolution load_solution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot open solution file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw std::invalid_argument("solution parse error in " + path.string() +
                                ": " + ex.what());
  }
  return parse_solution(doc);
}

json records_to_json(const std::vector<ExperimentRecord>& records,
                     SweepVariable variable) {
  json out = json::array();
  for (const auto& rec : records) {
    out.push_back(json{{"variable", sweep_variable_name(variable)},
                       {"value", rec.value},
                       {"scheme", scheme_name(rec.scheme)},
                       {"trial", rec.trial},
                       {"trial_seed", rec.trial_seed},
                       {"rank", rec.rank},
                       {"dof", rec.dof},
                       {"residual", rec.residual},
                       {"sum_rate_bps_hz", rec.sum_rate_bps_hz},
                       {"wall_ms", rec.wall_ms},
                       {"failed", rec.failed},
                       {"error", rec.error}});
  }
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records,
                           SweepVariable variable) {
  std::ostringstream out;
  out << "variable,value,scheme,trial,rank,dof,residual,sum_rate_bps_hz,"
         "wall_ms\n";
  for (const auto& rec : records) {
    out << sweep_variable_name(variable) << ',' << format_double(rec.value)
        << ',' << scheme_name(rec.scheme) << ',' << rec.trial << ','
        << rec.rank << ',' << format_double(rec.dof) << ','
        << format_double(rec.residual) << ','
        << format_double(rec.sum_rate_bps_hz) << ','
        << format_double(rec.wall_ms) << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path dir = path.parent_path();
  if (dir.empty()) dir = fs::current_path();
  fs::create_directories(dir);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot write file: " + tmp.string());
    out << contents;
    if (!out.flush())
      throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace risia
