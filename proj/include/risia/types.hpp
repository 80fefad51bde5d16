#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace risia {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// K x K grid of channel matrices, indexed [receiver][transmitter].
using ChannelGrid = std::vector<std::vector<Mat>>;

/// Static description of the D2D network: pair count, per-pair antenna and
/// stream counts, and the RIS size. All block offsets used by the operator
/// assemblies derive from this.
struct NetworkConfig {
  int pairs = 1;                 // K
  std::vector<int> tx_antennas;  // N_k, length K
  std::vector<int> rx_antennas;  // M_k, length K
  std::vector<int> streams;      // d_k, length K
  int ris_elements = 0;          // L; 0 encodes the no-RIS baseline

  /// M = sum_i M_i d_i (row dimension of the product matrix X).
  int row_dim() const;
  /// N = sum_j N_j d_j.
  int col_dim() const;
  /// S = sum_i sum_j d_i d_j (length of the stacked target vector).
  int target_dim() const;
  /// sum_k d_k.
  int total_streams() const;

  /// Start of pair i's row band in X. Rows are laid out pair-major, then
  /// antenna, then stream: row = row_offset(i) + m*d_i + s.
  int row_offset(int i) const;
  int col_offset(int j) const;
  /// Start of block (i,j) in an S-vector; blocks are ordered i-outer/j-inner.
  int block_offset(int i, int j) const;

  /// Throws std::invalid_argument when counts are out of range.
  void validate() const;

  /// Convenience constructor for symmetric networks.
  static NetworkConfig symmetric(int pairs, int tx_antennas, int rx_antennas,
                                 int streams, int ris_elements);
};

/// One sampled channel realization plus the power levels it was drawn for.
struct ChannelSet {
  NetworkConfig net;
  ChannelGrid direct;       // H[i][j]: M_i x N_j
  std::vector<Mat> ris_rx;  // R[i]: M_i x L
  std::vector<Mat> tx_ris;  // T[j]: L x N_j
  double noise_power = 1e-12;  // sigma^2, linear scale
  double tx_power = 1.0;       // P, linear scale

  void validate() const;
};

/// Strip the reflect path: returns a copy with L = 0 and no RIS links.
ChannelSet without_ris(const ChannelSet& ch);

/// Rank-r factorization X = left * right^H housing all transceiver
/// unknowns (left is M x r, right is N x r).
struct FactorPair {
  Mat left;
  Mat right;

  int rank() const { return static_cast<int>(left.cols()); }
  Mat product() const { return left * right.adjoint(); }
};

}  // namespace risia
