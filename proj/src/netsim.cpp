#include "risia/netsim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "risia/ia_core.hpp"
#include "risia/rng.hpp"

namespace risia {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Stream tags; every sampled scalar is addressed by (seed, tag, indices).
constexpr std::uint64_t kTagTxPos = 0x74787000ull;
constexpr std::uint64_t kTagRxPos = 0x72787000ull;
constexpr std::uint64_t kTagDirect = 0x64697200ull;
constexpr std::uint64_t kTagRisRx = 0x72697278ull;
constexpr std::uint64_t kTagTxRis = 0x74787269ull;
constexpr std::uint64_t kTagAngles = 0x616e6700ull;
constexpr std::uint64_t kTagPhase = 0x70687300ull;
constexpr std::uint64_t kTagTrial = 0x7472696cull;
constexpr std::uint64_t kTagScheme = 0x7363686dull;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Point2 sample_in_region(const std::array<double, 4>& region, Prng& rng) {
  return {rng.uniform(region[0], region[1]), rng.uniform(region[2], region[3])};
}

/// Unit-modulus array response with element phases e^{j pi k sin(theta)}.
Vec steering(int antennas, double angle) {
  Vec a(antennas);
  const double step = std::numbers::pi * std::sin(angle);
  for (int k = 0; k < antennas; ++k)
    a(k) = Complex(std::cos(step * k), std::sin(step * k));
  return a;
}

/// One Rician link matrix. Entries are indexed individually so the draw for
/// entry (row, col) does not depend on the matrix dimensions.
Mat rician_link(int rows, int cols, double gain, double beta, LosModel model,
                std::uint64_t seed, std::uint64_t tag, std::uint64_t i,
                std::uint64_t j) {
  double w_los, w_nlos;
  if (std::isinf(beta)) {
    w_los = 1.0;
    w_nlos = 0.0;
  } else {
    w_los = std::sqrt(beta / (1.0 + beta));
    w_nlos = std::sqrt(1.0 / (1.0 + beta));
  }

  Mat los;
  if (w_los > 0.0) {
    if (model == LosModel::SteeringOuterProduct) {
      Prng ang({seed, kTagAngles, tag, i, j});
      const double rx_angle = ang.uniform(0.0, kTwoPi);
      const double tx_angle = ang.uniform(0.0, kTwoPi);
      los = steering(rows, rx_angle) * steering(cols, tx_angle).adjoint();
    } else {
      los = Mat::Ones(rows, cols);
    }
  } else {
    los = Mat::Zero(rows, cols);
  }

  Mat out(rows, cols);
  const double amp = std::sqrt(gain);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      Complex nlos{0.0, 0.0};
      if (w_nlos > 0.0) {
        Prng entry({seed, tag, i, j, static_cast<std::uint64_t>(r),
                    static_cast<std::uint64_t>(c)});
        nlos = entry.complex_gaussian();
      }
      out(r, c) = amp * (w_los * los(r, c) + w_nlos * nlos);
    }
  }
  return out;
}

}  // namespace

void LayoutSpec::validate() const {
  auto check_region = [](const std::array<double, 4>& r, const char* name) {
    if (!(r[0] < r[1]) || !(r[2] < r[3]) || !std::isfinite(r[0]) ||
        !std::isfinite(r[1]) || !std::isfinite(r[2]) || !std::isfinite(r[3]))
      throw std::invalid_argument(std::string("layout.") + name +
                                  " is degenerate");
  };
  check_region(tx_region, "tx_region");
  check_region(rx_region, "rx_region");
  if (!std::isfinite(ris_position[0]) || !std::isfinite(ris_position[1]))
    throw std::invalid_argument("layout.ris_position must be finite");
}

void FadingSpec::validate() const {
  if (!(alpha_direct > 0.0) || !(alpha_tx_ris > 0.0) || !(alpha_ris_rx > 0.0))
    throw std::invalid_argument("fading path-loss exponents must be > 0");
  auto check_beta = [](double b, const char* name) {
    if (std::isnan(b) || b < 0.0)
      throw std::invalid_argument(std::string("fading.") + name +
                                  " must be >= 0 (inf allowed)");
  };
  check_beta(beta_rt, "beta_rt");
  check_beta(beta_it, "beta_it");
  check_beta(beta_ir, "beta_ir");
  if (!std::isfinite(t0_db))
    throw std::invalid_argument("fading.t0_db must be finite");
}

double path_loss(double distance, double alpha, double t0_db) {
  if (!(distance > 0.0))
    throw std::invalid_argument("path_loss: distance must be > 0");
  return std::pow(10.0, t0_db / 10.0) * std::pow(distance, -alpha);
}

ChannelSet sample_channels(const NetworkConfig& net, const LayoutSpec& layout,
                           const FadingSpec& fading, std::uint64_t seed,
                           double noise_power, double tx_power) {
  net.validate();
  layout.validate();
  fading.validate();

  const int k = net.pairs;
  std::vector<Point2> tx(k), rx(k);
  for (int p = 0; p < k; ++p) {
    Prng tx_rng({seed, kTagTxPos, static_cast<std::uint64_t>(p)});
    Prng rx_rng({seed, kTagRxPos, static_cast<std::uint64_t>(p)});
    tx[p] = sample_in_region(layout.tx_region, tx_rng);
    rx[p] = sample_in_region(layout.rx_region, rx_rng);
  }
  const Point2 ris{layout.ris_position[0], layout.ris_position[1]};

  ChannelSet ch;
  ch.net = net;
  ch.noise_power = noise_power;
  ch.tx_power = tx_power;
  ch.direct.assign(k, std::vector<Mat>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double gain =
          path_loss(distance(rx[i], tx[j]), fading.alpha_direct, fading.t0_db);
      ch.direct[i][j] = rician_link(net.rx_antennas[i], net.tx_antennas[j],
                                    gain, fading.beta_rt, fading.los_model,
                                    seed, kTagDirect, i, j);
    }
  }
  if (net.ris_elements > 0) {
    ch.ris_rx.resize(k);
    ch.tx_ris.resize(k);
    for (int i = 0; i < k; ++i) {
      const double gain =
          path_loss(distance(rx[i], ris), fading.alpha_ris_rx, fading.t0_db);
      ch.ris_rx[i] = rician_link(net.rx_antennas[i], net.ris_elements, gain,
                                 fading.beta_ir, fading.los_model, seed,
                                 kTagRisRx, i, 0);
      const double tgain =
          path_loss(distance(tx[i], ris), fading.alpha_tx_ris, fading.t0_db);
      ch.tx_ris[i] = rician_link(net.ris_elements, net.tx_antennas[i], tgain,
                                 fading.beta_it, fading.los_model, seed,
                                 kTagTxRis, i, 0);
    }
  }
  ch.validate();
  return ch;
}

double sum_rate(const ChannelSet& ch, const AlignmentSolution& sol,
                double snr_db, bool include_interference) {
  ch.validate();
  if (!sol.feasible)
    throw std::invalid_argument("sum_rate: solution is not feasible");
  const NetworkConfig& net = ch.net;
  const int r = sol.rank;
  const double sigma2 = ch.noise_power;
  const double power = sigma2 * std::pow(10.0, snr_db / 10.0);
  const ChannelGrid grid = composite_channel(ch, sol.phase);

  // Unit-norm precoder columns; per-stream power P/d_j.
  std::vector<Mat> precoders(net.pairs);
  for (int j = 0; j < net.pairs; ++j) {
    precoders[j] = sol.precoders[j];
    for (int c = 0; c < precoders[j].cols(); ++c) {
      const double nrm = precoders[j].col(c).norm();
      if (nrm < 1e-300)
        throw std::invalid_argument("sum_rate: zero precoder column");
      precoders[j].col(c) /= nrm;
    }
  }

  auto lifted_product = [&](int i, int j) -> Mat {
    // U_i^H (H~_ij x I_r) V_j without forming the Kronecker product.
    Mat z = Mat::Zero(net.streams[i], net.streams[j]);
    for (int m = 0; m < net.rx_antennas[i]; ++m)
      for (int n = 0; n < net.tx_antennas[j]; ++n)
        z += grid[i][j](m, n) * sol.decoders[i].middleRows(m * r, r).adjoint() *
             precoders[j].middleRows(n * r, r);
    return z;
  };

  double rate = 0.0;
  for (int i = 0; i < net.pairs; ++i) {
    const int di = net.streams[i];
    const Mat desired = lifted_product(i, i);
    const Mat signal = (power / di) * desired * desired.adjoint();
    Mat noise_plus_intf =
        sigma2 * sol.decoders[i].adjoint() * sol.decoders[i];
    if (include_interference) {
      for (int j = 0; j < net.pairs; ++j) {
        if (j == i) continue;
        const Mat cross = lifted_product(i, j);
        noise_plus_intf += (power / net.streams[j]) * cross * cross.adjoint();
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat> q_eig(noise_plus_intf);
    const auto& q_vals = q_eig.eigenvalues();
    if (q_vals(0) <= 1e-14 * q_vals(q_vals.size() - 1) || q_vals(0) <= 0.0)
      throw std::runtime_error(
          "sum_rate: whitening matrix numerically singular (eigenvalue "
          "spread " +
          std::to_string(q_vals(0)) + " .. " +
          std::to_string(q_vals(q_vals.size() - 1)) + ")");
    const Eigen::LLT<Mat> llt(noise_plus_intf);
    const Mat whitened = llt.matrixL().solve(signal);
    const Mat w = llt.matrixL().solve(whitened.adjoint()).adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> s_eig(w);
    for (int s = 0; s < di; ++s)
      rate += std::log2(1.0 + std::max(0.0, s_eig.eigenvalues()(s))) / r;
  }
  return rate;
}

AlignmentSolution random_phase_baseline(const ChannelSet& ch,
                                        const PursuitOptions& opts) {
  if (ch.net.ris_elements == 0) return riemannian_pursuit(ch, opts);
  Prng rng({opts.seed, kTagPhase});
  Vec v(ch.net.ris_elements);
  for (int l = 0; l < ch.net.ris_elements; ++l) {
    const double theta = rng.uniform(0.0, kTwoPi);
    v(l) = Complex(std::cos(theta), std::sin(theta));
  }
  return riemannian_pursuit(ch, opts, v);
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Optimized: return "optimized";
    case Scheme::RandomPhase: return "random_phase";
    case Scheme::NoRis: return "no_ris";
  }
  return "unknown";
}

const char* sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::RxAntennas: return "rx_antennas";
    case SweepVariable::Snr: return "snr_db";
    case SweepVariable::RicianRT: return "rician_rt";
    case SweepVariable::RisElements: return "ris_elements";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  if (values.empty())
    throw std::invalid_argument("sweep.values must be non-empty");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1]))
      throw std::invalid_argument("sweep.values must be strictly increasing");
  if (trials < 1) throw std::invalid_argument("sweep.trials must be >= 1");
  if (schemes.empty())
    throw std::invalid_argument("sweep.schemes must be non-empty");
  if (threads < 1) throw std::invalid_argument("sweep.threads must be >= 1");
  network.validate();
  layout.validate();
  fading.validate();
  pursuit.validate();
  if (variable == SweepVariable::RxAntennas || variable == SweepVariable::RisElements) {
    for (double v : values) {
      if (v != std::floor(v) || v < (variable == SweepVariable::RxAntennas ? 1.0 : 0.0))
        throw std::invalid_argument("sweep.values must be valid counts for this variable");
    }
  }
}

std::vector<ExperimentRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();

  struct Job {
    std::size_t value_index;
    std::size_t scheme_index;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t a = 0; a < spec.values.size(); ++a)
    for (std::size_t s = 0; s < spec.schemes.size(); ++s)
      for (int t = 0; t < spec.trials; ++t) jobs.push_back({a, s, t});

  std::vector<ExperimentRecord> records(jobs.size());
  const double noise_power = std::pow(10.0, spec.noise_power_db / 10.0);

  auto run_job = [&](const Job& job) {
    const double value = spec.values[job.value_index];
    const Scheme scheme = spec.schemes[job.scheme_index];
    // Channel seed depends on the trial only: paired across schemes by
    // sharing the set, paired across values through entry-level nesting.
    const std::uint64_t trial_seed =
        hash_tags({spec.seed, kTagTrial, static_cast<std::uint64_t>(job.trial)});

    ExperimentRecord rec;
    rec.value = value;
    rec.scheme = scheme;
    rec.trial = job.trial;
    rec.trial_seed = trial_seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      NetworkConfig net = spec.network;
      FadingSpec fading = spec.fading;
      double snr_db = spec.snr_db;
      switch (spec.variable) {
        case SweepVariable::RxAntennas:
          net.rx_antennas.assign(net.rx_antennas.size(),
                                 static_cast<int>(value));
          break;
        case SweepVariable::RisElements:
          net.ris_elements = static_cast<int>(value);
          break;
        case SweepVariable::RicianRT:
          fading.beta_rt = value;
          break;
        case SweepVariable::Snr:
          snr_db = value;
          break;
      }
      net.validate();

      const ChannelSet ch = sample_channels(net, spec.layout, fading,
                                            trial_seed, noise_power,
                                            spec.tx_power);
      PursuitOptions opts = spec.pursuit;
      opts.seed = hash_tags({trial_seed, kTagScheme,
                             static_cast<std::uint64_t>(scheme)});

      AlignmentSolution sol;
      switch (scheme) {
        case Scheme::Optimized:
          sol = riemannian_pursuit(ch, opts);
          break;
        case Scheme::RandomPhase:
          sol = random_phase_baseline(ch, opts);
          break;
        case Scheme::NoRis:
          sol = riemannian_pursuit(without_ris(ch), opts);
          break;
      }
      rec.rank = sol.rank;
      rec.dof = sol.dof;
      rec.residual = sol.residual;
      rec.sum_rate_bps_hz =
          sol.feasible ? sum_rate(scheme == Scheme::NoRis ? without_ris(ch) : ch,
                                  sol, snr_db)
                       : 0.0;
    } catch (const std::exception& ex) {
      rec.failed = true;
      rec.rank = -1;
      rec.dof = 0.0;
      rec.residual = std::numeric_limits<double>::quiet_NaN();
      rec.sum_rate_bps_hz = 0.0;
      rec.error = ex.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return rec;
  };

  if (spec.threads <= 1 || jobs.size() <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) records[i] = run_job(jobs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        records[i] = run_job(jobs[i]);
      }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(spec.threads, static_cast<int>(jobs.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;  // job order is already canonical (value, scheme, trial)
}

}  // namespace risia
