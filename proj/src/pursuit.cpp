#include "risia/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "risia/ia_core.hpp"
#include "risia/rng.hpp"

namespace risia {

namespace {

constexpr std::uint64_t kInitTag = 0x696e697400000000ull;  // factor/phase init

/// Median Frobenius norm of the direct links; the common normalization
/// constant. The IA conditions are invariant under (H/c, R/c, c X), with the
/// constant absorbed by X, so solving on the normalized set preserves the
/// solution set and the residual exactly.
double direct_norm_scale(const ChannelSet& ch) {
  std::vector<double> norms;
  norms.reserve(static_cast<std::size_t>(ch.net.pairs) * ch.net.pairs);
  for (const auto& row : ch.direct)
    for (const auto& h : row) norms.push_back(h.norm());
  std::sort(norms.begin(), norms.end());
  const std::size_t n = norms.size();
  const double median = (n % 2 == 1)
                            ? norms[n / 2]
                            : 0.5 * (norms[n / 2 - 1] + norms[n / 2]);
  return median > 1e-300 ? median : 1.0;
}

ChannelSet normalized_channels(const ChannelSet& ch, double scale) {
  ChannelSet out = ch;
  for (auto& row : out.direct)
    for (auto& h : row) h /= scale;
  for (auto& r : out.ris_rx) r /= scale;
  return out;
}

Mat stack_factors(const FactorPair& f) {
  Mat y(f.left.rows() + f.right.rows(), f.left.cols());
  y.topRows(f.left.rows()) = f.left;
  y.bottomRows(f.right.rows()) = f.right;
  return y;
}

FactorPair split_factors(const NetworkConfig& net, const Mat& stacked) {
  return {stacked.topRows(net.row_dim()), stacked.bottomRows(net.col_dim())};
}

FactorPair random_factors(const NetworkConfig& net, int rank, Prng& rng) {
  const int m = net.row_dim();
  const int n = net.col_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(rank) * (m + n));
  FactorPair f;
  f.left.resize(m, rank);
  f.right.resize(n, rank);
  for (int c = 0; c < rank; ++c) {
    for (int r = 0; r < m; ++r) f.left(r, c) = scale * rng.complex_gaussian();
    for (int r = 0; r < n; ++r) f.right(r, c) = scale * rng.complex_gaussian();
  }
  return f;
}

Vec random_phases(int count, Prng& rng) {
  Vec v(count);
  for (int l = 0; l < count; ++l) {
    const double theta = rng.uniform(0.0, 6.283185307179586476925286766559);
    v(l) = Complex(std::cos(theta), std::sin(theta));
  }
  return v;
}

/// Pad the best rank-r factor with one small Gaussian column for the warm
/// start at rank r+1.
FactorPair pad_factors(const FactorPair& f, Prng& rng) {
  const double norm =
      std::sqrt(f.left.squaredNorm() + f.right.squaredNorm());
  FactorPair out;
  out.left.resize(f.left.rows(), f.rank() + 1);
  out.right.resize(f.right.rows(), f.rank() + 1);
  out.left.leftCols(f.rank()) = f.left;
  out.right.leftCols(f.rank()) = f.right;
  Vec col(f.left.rows() + f.right.rows());
  for (Eigen::Index r = 0; r < col.size(); ++r)
    col(r) = rng.complex_gaussian();
  col *= 1e-2 * norm / std::max(col.norm(), 1e-300);
  out.left.col(f.rank()) = col.head(f.left.rows());
  out.right.col(f.rank()) = col.tail(f.right.rows());
  return out;
}

}  // namespace

void PursuitOptions::validate() const {
  if (!(outer_tol > 0.0))
    throw std::invalid_argument("pursuit.outer_tol must be > 0");
  if (max_alternations < 1)
    throw std::invalid_argument("pursuit.max_alternations must be >= 1");
  if (r_start < 1) throw std::invalid_argument("pursuit.r_start must be >= 1");
  if (r_max < r_start)
    throw std::invalid_argument("pursuit.r_max must be >= r_start");
  if (restarts_per_rank < 1)
    throw std::invalid_argument("pursuit.restarts_per_rank must be >= 1");
  inner.validate();
}

FixedRankResult solve_fixed_rank(const ChannelSet& ch, int rank,
                                 const FactorPair& init_factors,
                                 const Vec& init_phase,
                                 const PursuitOptions& opts) {
  opts.validate();
  ch.validate();
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (init_factors.rank() != rank)
    throw std::invalid_argument("init factor rank mismatch");
  const NetworkConfig& net = ch.net;
  const bool has_phase = net.ris_elements >= 1;
  if (has_phase && init_phase.size() != net.ris_elements)
    throw std::invalid_argument("init phase length mismatch");

  const double scale = direct_norm_scale(ch);
  const ChannelSet chn = normalized_channels(ch, scale);
  const Vec target = build_target(net);

  // Move the init into the normalized domain: X' = scale * X.
  Mat y = stack_factors(init_factors);
  y.bottomRows(net.col_dim()) *= scale;
  Vec v = has_phase ? init_phase : Vec();

  FixedRankResult result;
  ChannelGrid grid = composite_channel(chn, v);
  double f0 =
      f2_value_grad(net, grid, y, target).value;  // f0 at the initial point

  const double eps = opts.outer_tol;
  double f0_prev = f0;
  if (f0 > eps) {
    for (int t = 1; t <= opts.max_alternations; ++t) {
      // Factor block: minimize f2 with the phase fixed.
      grid = composite_channel(chn, v);
      auto [y_new, tr_y] = rcg_minimize<FactorGeometry>(
          [&](const Mat& z) {
            const FactorPair f = split_factors(net, z);
            return 0.5 * (apply_A2(net, grid, f) - target).squaredNorm();
          },
          [&](const Mat& z) { return f2_value_grad(net, grid, z, target).grad; },
          y, opts.inner);
      y = std::move(y_new);
      f0 = tr_y.objective.back();
      if (tr_y.termination == RcgTermination::LineSearchFail)
        ++result.history.line_search_failures;
      result.history.objective.push_back(f0);
      result.history.alternations = t;
      if (f0 <= eps) break;

      // Phase block: minimize f1 with the factors fixed.
      if (has_phase && opts.optimize_phase) {
        const PhaseSystem sys =
            assemble_phase_system(chn, split_factors(net, y), target);
        auto [v_new, tr_v] = rcg_minimize<CircleGeometry>(
            [&](const Vec& w) {
              return 0.5 * (sys.matrix * w - sys.rhs).squaredNorm();
            },
            [&](const Vec& w) {
              return Vec(sys.matrix.adjoint() * (sys.matrix * w - sys.rhs));
            },
            v, opts.inner);
        v = std::move(v_new);
        f0 = tr_v.objective.back();
        if (tr_v.termination == RcgTermination::LineSearchFail)
          ++result.history.line_search_failures;
        result.history.objective.push_back(f0);
        if (f0 <= eps) break;
      }

      // Both blocks stalled: further alternations cannot make progress.
      if (f0_prev - f0 <= 1e-14 * (1.0 + std::abs(f0))) break;
      f0_prev = f0;
    }
  }

  result.factors = split_factors(net, y);
  result.factors.right /= scale;  // back to the raw channel domain
  result.phase = v;
  result.residual = f0;
  return result;
}

AlignmentSolution riemannian_pursuit(const ChannelSet& ch,
                                     const PursuitOptions& opts,
                                     std::optional<Vec> fixed_phase) {
  opts.validate();
  ch.validate();
  const NetworkConfig& net = ch.net;
  const bool has_phase = net.ris_elements >= 1;
  if (fixed_phase && fixed_phase->size() != net.ris_elements)
    throw std::invalid_argument("fixed phase length mismatch");

  PursuitOptions run_opts = opts;
  if (fixed_phase) run_opts.optimize_phase = false;

  AlignmentSolution sol;
  FactorPair best_at_prev_rank;
  bool have_prev_rank = false;

  for (int r = opts.r_start; r <= opts.r_max; ++r) {
    double best_rank_residual = std::numeric_limits<double>::infinity();
    FactorPair best_rank_factors;
    for (int restart = 0; restart < opts.restarts_per_rank; ++restart) {
      Prng rng({opts.seed, kInitTag, static_cast<std::uint64_t>(r),
                static_cast<std::uint64_t>(restart)});
      FactorPair init;
      const bool warm = opts.warm_start_rank_increase && restart == 0 &&
                        have_prev_rank &&
                        best_at_prev_rank.rank() == r - 1;
      init = warm ? pad_factors(best_at_prev_rank, rng)
                  : random_factors(net, r, rng);
      Vec v0;
      if (has_phase)
        v0 = fixed_phase ? *fixed_phase : random_phases(net.ris_elements, rng);

      FixedRankResult run = solve_fixed_rank(ch, r, init, v0, run_opts);
      sol.trace.push_back({r, restart, run.residual, run.history});

      if (run.residual < best_rank_residual) {
        best_rank_residual = run.residual;
        best_rank_factors = run.factors;
      }
      if (run.residual < sol.residual) {
        sol.residual = run.residual;
        sol.rank = r;
        sol.factors = run.factors;
        sol.phase = run.phase;
      }
      if (run.residual <= opts.outer_tol) {
        sol.feasible = true;
        sol.rank = r;
        sol.factors = run.factors;
        sol.phase = run.phase;
        sol.residual = run.residual;
        sol.dof = static_cast<double>(net.total_streams()) / r;
        std::tie(sol.decoders, sol.precoders) =
            recover_transceivers(sol.factors, net);
        return sol;
      }
    }
    best_at_prev_rank = best_rank_factors;
    have_prev_rank = best_rank_residual < std::numeric_limits<double>::infinity();
  }
  return sol;  // infeasible: best iterate, dof stays 0
}

std::pair<std::vector<Mat>, std::vector<Mat>> recover_transceivers(
    const FactorPair& factors, const NetworkConfig& net) {
  net.validate();
  if (factors.left.rows() != net.row_dim() ||
      factors.right.rows() != net.col_dim())
    throw std::invalid_argument("factor pair shape mismatch");
  const int r = factors.rank();

  Mat stacked(factors.left.rows() + factors.right.rows(), r);
  stacked.topRows(factors.left.rows()) = factors.left;
  stacked.bottomRows(factors.right.rows()) = factors.right;
  Eigen::JacobiSVD<Mat> svd(stacked);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) < 1e-10 * s(0))
    throw std::domain_error("recover_transceivers: factor pair is rank "
                            "deficient");

  const Mat u_tilde = factors.left.adjoint();   // r x M
  const Mat v_tilde = factors.right.adjoint();  // r x N
  std::vector<Mat> decoders(net.pairs), precoders(net.pairs);
  for (int i = 0; i < net.pairs; ++i) {
    const int di = net.streams[i];
    Mat u(net.rx_antennas[i] * r, di);
    for (int m = 0; m < net.rx_antennas[i]; ++m)
      u.middleRows(m * r, r) =
          u_tilde.middleCols(net.row_offset(i) + m * di, di);
    decoders[i] = std::move(u);
  }
  for (int j = 0; j < net.pairs; ++j) {
    const int dj = net.streams[j];
    Mat v(net.tx_antennas[j] * r, dj);
    for (int n = 0; n < net.tx_antennas[j]; ++n)
      v.middleRows(n * r, r) =
          v_tilde.middleCols(net.col_offset(j) + n * dj, dj);
    precoders[j] = std::move(v);
  }
  return {std::move(decoders), std::move(precoders)};
}

AlignmentReport verify_alignment(const ChannelSet& ch, const Vec& phase,
                                 const std::vector<Mat>& decoders,
                                 const std::vector<Mat>& precoders,
                                 double tol) {
  ch.validate();
  const NetworkConfig& net = ch.net;
  if (decoders.size() != static_cast<std::size_t>(net.pairs) ||
      precoders.size() != static_cast<std::size_t>(net.pairs))
    throw std::invalid_argument("transceiver list length mismatch");
  const int r = net.rx_antennas[0] > 0
                    ? static_cast<int>(decoders[0].rows()) / net.rx_antennas[0]
                    : 0;
  for (int i = 0; i < net.pairs; ++i) {
    if (decoders[i].rows() != net.rx_antennas[i] * r ||
        decoders[i].cols() != net.streams[i])
      throw std::invalid_argument("decoder shape mismatch");
    if (precoders[i].rows() != net.tx_antennas[i] * r ||
        precoders[i].cols() != net.streams[i])
      throw std::invalid_argument("precoder shape mismatch");
  }

  const ChannelGrid grid = composite_channel(ch, phase);
  AlignmentReport report;
  for (int i = 0; i < net.pairs; ++i) {
    for (int j = 0; j < net.pairs; ++j) {
      // Dense (H~ x I_r), independently of the fast operator path.
      Mat lifted = Mat::Zero(net.rx_antennas[i] * r, net.tx_antennas[j] * r);
      for (int m = 0; m < net.rx_antennas[i]; ++m)
        for (int n = 0; n < net.tx_antennas[j]; ++n)
          lifted.block(m * r, n * r, r, r) =
              grid[i][j](m, n) * Mat::Identity(r, r);
      Mat z = decoders[i].adjoint() * lifted * precoders[j];
      if (i == j) {
        const double dev =
            (z - Mat::Identity(net.streams[i], net.streams[i])).norm();
        report.max_identity_deviation =
            std::max(report.max_identity_deviation, dev);
        report.deviation_sq_sum += dev * dev;
      } else {
        const double leak = z.norm();
        report.max_interference_leakage =
            std::max(report.max_interference_leakage, leak);
        report.leakage_sq_sum += leak * leak;
      }
    }
  }
  report.pass = report.max_interference_leakage <= tol &&
                report.max_identity_deviation <= tol;
  return report;
}

}  // namespace risia
