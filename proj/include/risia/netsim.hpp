#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "risia/pursuit.hpp"
#include "risia/types.hpp"

namespace risia {

/// Placement of the RIS and the uniform regions the transmitters and
/// receivers are drawn from, in meters. Regions are (x0, x1, y0, y1).
struct LayoutSpec {
  std::array<double, 2> ris_position{25.0, 20.0};
  std::array<double, 4> tx_region{0.0, 20.0, 0.0, 20.0};
  std::array<double, 4> rx_region{30.0, 50.0, 0.0, 20.0};

  void validate() const;
};

enum class LosModel { SteeringOuterProduct, AllOnes };

/// Path-loss and Rician fading parameters. Rician factors are linear;
/// +infinity selects the pure line-of-sight component.
struct FadingSpec {
  double t0_db = -30.0;  // path loss at reference distance, dB
  double alpha_direct = 2.8;
  double alpha_tx_ris = 2.0;
  double alpha_ris_rx = 2.0;
  double beta_rt = 10.0;
  double beta_it = 10.0;
  double beta_ir = 10.0;
  LosModel los_model = LosModel::SteeringOuterProduct;

  void validate() const;
};

/// 10^(t0_db/10) * d^(-alpha). Rejects d <= 0.
double path_loss(double distance, double alpha, double t0_db);

/// Draws positions and all link matrices deterministically from the seed.
/// Each matrix entry has its own counter-based stream, so realizations nest
/// when only a dimension (antenna count, RIS size) grows.
ChannelSet sample_channels(const NetworkConfig& net, const LayoutSpec& layout,
                           const FadingSpec& fading, std::uint64_t seed,
                           double noise_power = 1e-12, double tx_power = 1.0);

/// Linear-transceiver sum rate in bits/s/Hz over r channel uses, with
/// per-stream power P/d_j (P = noise_power * 10^(snr_db/10)), unit-norm
/// precoder columns, and interference-plus-noise whitening. Set
/// include_interference = false to rate the interference-free channels.
double sum_rate(const ChannelSet& ch, const AlignmentSolution& sol,
                double snr_db, bool include_interference = true);

/// Draws one phase vector uniformly on the L-torus from the options seed and
/// runs the rank pursuit with the phase block frozen at it.
AlignmentSolution random_phase_baseline(const ChannelSet& ch,
                                        const PursuitOptions& opts);

enum class Scheme { Optimized, RandomPhase, NoRis };
enum class SweepVariable { RxAntennas, Snr, RicianRT, RisElements };

const char* scheme_name(Scheme s);
const char* sweep_variable_name(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::RisElements;
  std::vector<double> values;
  int trials = 1;
  NetworkConfig network;
  LayoutSpec layout;
  FadingSpec fading;
  PursuitOptions pursuit;
  std::vector<Scheme> schemes{Scheme::Optimized, Scheme::RandomPhase,
                              Scheme::NoRis};
  double snr_db = 120.0;  // rate evaluation point (overridden by Snr sweeps)
  double noise_power_db = -120.0;
  double tx_power = 1.0;
  std::uint64_t seed = 1;
  int threads = 1;

  void validate() const;
};

struct ExperimentRecord {
  double value = 0.0;
  Scheme scheme = Scheme::Optimized;
  int trial = 0;
  std::uint64_t trial_seed = 0;
  int rank = -1;  // -1 marks a failed trial
  double dof = 0.0;
  double residual = 0.0;
  double sum_rate_bps_hz = 0.0;
  double wall_ms = 0.0;
  bool failed = false;
  std::string error;
};

/// Full factorial over values x schemes x trials. Channels are shared
/// across schemes within a (value, trial) cell and across values within a
/// trial (paired comparisons). Individual trial failures are recorded and
/// never abort the sweep. Records come back in canonical order (value,
/// scheme, trial) regardless of the thread count.
std::vector<ExperimentRecord> run_sweep(const SweepSpec& spec);

}  // namespace risia
