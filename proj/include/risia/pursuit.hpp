#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "risia/manifolds.hpp"
#include "risia/types.hpp"

namespace risia {

struct PursuitOptions {
  double outer_tol = 1e-4;   // feasibility threshold on f0
  int max_alternations = 30;  // T
  int r_start = 1;
  int r_max = 4;
  int restarts_per_rank = 3;
  RcgOptions inner;  // grad_tol 1e-10 by default
  bool warm_start_rank_increase = false;
  bool optimize_phase = true;  // false freezes the phase block (baselines)
  std::uint64_t seed = 1;

  void validate() const;
};

/// Objective history of one fixed-rank alternation run: f0 after every block
/// update, in order.
struct FixedRankHistory {
  std::vector<double> objective;
  int alternations = 0;
  int line_search_failures = 0;
};

struct FixedRankResult {
  FactorPair factors;
  Vec phase;  // empty when L = 0
  double residual = std::numeric_limits<double>::infinity();
  FixedRankHistory history;
};

/// Alternates the factor-manifold RCG on f2 (phase fixed) and the
/// circle-manifold RCG on f1 (factors fixed) until f0 <= outer_tol or
/// max_alternations is hit, warm-starting each block at its previous
/// iterate. Inner line-search failures are soft: the alternation simply
/// moves on to the other block.
FixedRankResult solve_fixed_rank(const ChannelSet& ch, int rank,
                                 const FactorPair& init_factors,
                                 const Vec& init_phase,
                                 const PursuitOptions& opts);

/// One attempt of the rank loop, kept for diagnostics.
struct RankAttempt {
  int rank = 0;
  int restart = 0;
  double residual = std::numeric_limits<double>::infinity();
  FixedRankHistory history;
};

struct AlignmentSolution {
  bool feasible = false;
  int rank = 0;  // detected channel uses (best attempt when infeasible)
  Vec phase;     // empty when L = 0
  FactorPair factors;
  std::vector<Mat> decoders;   // U_i: (M_i r) x d_i, filled when feasible
  std::vector<Mat> precoders;  // V_j: (N_j r) x d_j
  double residual = std::numeric_limits<double>::infinity();
  double dof = 0.0;  // sum_i d_i / r when feasible, else 0
  std::vector<RankAttempt> trace;
};

/// Rank pursuit: for r = r_start..r_max run independently initialized
/// fixed-rank solves; the first run reaching f0 <= outer_tol fixes the
/// detected rank. When no rank succeeds the solution is flagged infeasible
/// and carries the best iterate found. A fixed_phase, when given, is used
/// by every restart with the phase block frozen.
AlignmentSolution riemannian_pursuit(const ChannelSet& ch,
                                     const PursuitOptions& opts,
                                     std::optional<Vec> fixed_phase = {});

/// Slices the factor pair back into per-pair transceivers: U_i stacks the
/// r x d_i per-antenna blocks of left^H vertically (antenna-major), V_j
/// likewise from right^H. Fails when the stacked factor loses column rank
/// below 1e-10 relative.
std::pair<std::vector<Mat>, std::vector<Mat>> recover_transceivers(
    const FactorPair& factors, const NetworkConfig& net);

struct AlignmentReport {
  double max_interference_leakage = 0.0;
  double max_identity_deviation = 0.0;
  double leakage_sq_sum = 0.0;    // sum over i != j of squared leakage norms
  double deviation_sq_sum = 0.0;  // sum over i of squared identity deviations
  bool pass = false;
};

/// Checks the alignment conditions directly through dense Kronecker
/// products (independent of the fast operator path): the Frobenius norms of
/// U_i^H (H~_ij x I_r) V_j for i != j and of U_i^H (H~_ii x I_r) V_i - I.
AlignmentReport verify_alignment(const ChannelSet& ch, const Vec& phase,
                                 const std::vector<Mat>& decoders,
                                 const std::vector<Mat>& precoders, double tol);

}  // namespace risia
