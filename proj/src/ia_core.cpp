#include "risia/ia_core.hpp"

#include <stdexcept>

namespace risia {

namespace {

void check_factor_shapes(const NetworkConfig& net, const FactorPair& f) {
  if (f.left.rows() != net.row_dim() || f.right.rows() != net.col_dim() ||
      f.left.cols() != f.right.cols() || f.left.cols() < 1) {
    throw std::invalid_argument("factor pair shape mismatch");
  }
}

void check_grid_shapes(const NetworkConfig& net, const ChannelGrid& grid) {
  if (grid.size() != static_cast<std::size_t>(net.pairs))
    throw std::invalid_argument("channel grid has wrong pair count");
  for (int i = 0; i < net.pairs; ++i) {
    if (grid[i].size() != static_cast<std::size_t>(net.pairs))
      throw std::invalid_argument("channel grid has wrong pair count");
    for (int j = 0; j < net.pairs; ++j) {
      if (grid[i][j].rows() != net.rx_antennas[i] ||
          grid[i][j].cols() != net.tx_antennas[j])
        throw std::invalid_argument("channel grid entry shape mismatch");
    }
  }
}

}  // namespace

Vec build_target(const NetworkConfig& net) {
  net.validate();
  Vec b = Vec::Zero(net.target_dim());
  for (int i = 0; i < net.pairs; ++i) {
    const int d = net.streams[i];
    const int off = net.block_offset(i, i);
    // vec(I_d) column-major: ones at positions s + s*d.
    for (int s = 0; s < d; ++s) b(off + s + s * d) = Complex(1.0, 0.0);
  }
  return b;
}

ChannelGrid composite_channel(const ChannelSet& ch, const Vec& phase) {
  ch.validate();
  if (ch.net.ris_elements == 0) return ch.direct;
  if (phase.size() != ch.net.ris_elements)
    throw std::invalid_argument("phase vector length must equal L");
  ChannelGrid grid(ch.net.pairs, std::vector<Mat>(ch.net.pairs));
  for (int i = 0; i < ch.net.pairs; ++i) {
    const Mat scaled = ch.ris_rx[i] * phase.asDiagonal();  // R_i diag(v)
    for (int j = 0; j < ch.net.pairs; ++j) {
      grid[i][j] = ch.direct[i][j] + scaled * ch.tx_ris[j];
    }
  }
  return grid;
}

Vec apply_A2(const NetworkConfig& net, const ChannelGrid& composite,
             const FactorPair& factors) {
  check_factor_shapes(net, factors);
  check_grid_shapes(net, composite);
  Vec out = Vec::Zero(net.target_dim());
  for (int i = 0; i < net.pairs; ++i) {
    const int di = net.streams[i];
    const int mi = net.rx_antennas[i];
    const auto left_band =
        factors.left.middleRows(net.row_offset(i), mi * di);
    for (int j = 0; j < net.pairs; ++j) {
      const int dj = net.streams[j];
      const int nj = net.tx_antennas[j];
      const Mat x_block =
          left_band *
          factors.right.middleRows(net.col_offset(j), nj * dj).adjoint();
      Mat z = Mat::Zero(di, dj);
      for (int m = 0; m < mi; ++m)
        for (int n = 0; n < nj; ++n)
          z += composite[i][j](m, n) * x_block.block(m * di, n * dj, di, dj);
      out.segment(net.block_offset(i, j), di * dj) = z.reshaped();
    }
  }
  return out;
}

Mat adjoint_A2(const NetworkConfig& net, const ChannelGrid& composite,
               const Vec& y) {
  check_grid_shapes(net, composite);
  if (y.size() != net.target_dim())
    throw std::invalid_argument("adjoint input must have length S");
  Mat g = Mat::Zero(net.row_dim(), net.col_dim());
  for (int i = 0; i < net.pairs; ++i) {
    const int di = net.streams[i];
    for (int j = 0; j < net.pairs; ++j) {
      const int dj = net.streams[j];
      const Mat y_block =
          y.segment(net.block_offset(i, j), di * dj).reshaped(di, dj);
      for (int m = 0; m < net.rx_antennas[i]; ++m)
        for (int n = 0; n < net.tx_antennas[j]; ++n)
          g.block(net.row_offset(i) + m * di, net.col_offset(j) + n * dj, di,
                  dj) = std::conj(composite[i][j](m, n)) * y_block;
    }
  }
  return g;
}

FactorValueGrad f2_value_grad(const NetworkConfig& net,
                              const ChannelGrid& composite, const Mat& stacked,
                              const Vec& target) {
  const int m = net.row_dim();
  const int n = net.col_dim();
  if (stacked.rows() != m + n)
    throw std::invalid_argument("stacked factor must have M+N rows");
  FactorPair f{stacked.topRows(m), stacked.bottomRows(n)};
  const Vec residual = apply_A2(net, composite, f) - target;
  FactorValueGrad out;
  out.value = 0.5 * residual.squaredNorm();
  const Mat g = adjoint_A2(net, composite, residual);
  out.grad.resize(m + n, stacked.cols());
  out.grad.topRows(m) = g * f.right;
  out.grad.bottomRows(n) = g.adjoint() * f.left;
  return out;
}

PhaseSystem assemble_phase_system(const ChannelSet& ch,
                                  const FactorPair& factors,
                                  const Vec& target) {
  ch.validate();
  const NetworkConfig& net = ch.net;
  check_factor_shapes(net, factors);
  if (net.ris_elements < 1)
    throw std::invalid_argument(
        "assemble_phase_system: phase block undefined for L = 0");
  PhaseSystem sys;
  sys.matrix = Mat::Zero(net.target_dim(), net.ris_elements);
  Vec direct_part = Vec::Zero(net.target_dim());
  for (int i = 0; i < net.pairs; ++i) {
    const int di = net.streams[i];
    const int mi = net.rx_antennas[i];
    const auto left_band =
        factors.left.middleRows(net.row_offset(i), mi * di);
    for (int j = 0; j < net.pairs; ++j) {
      const int dj = net.streams[j];
      const int nj = net.tx_antennas[j];
      const Mat x_block =
          left_band *
          factors.right.middleRows(net.col_offset(j), nj * dj).adjoint();
      const int off = net.block_offset(i, j);
      for (int m = 0; m < mi; ++m) {
        for (int n = 0; n < nj; ++n) {
          const Vec x_vec =
              x_block.block(m * di, n * dj, di, dj).reshaped();
          // a_ij[m,n] = R_i[m] diag(T_j[n]), a 1 x L row.
          const Eigen::RowVectorXcd a =
              ch.ris_rx[i].row(m).cwiseProduct(ch.tx_ris[j].col(n).transpose());
          sys.matrix.middleRows(off, di * dj) += x_vec * a;
          direct_part.segment(off, di * dj) += ch.direct[i][j](m, n) * x_vec;
        }
      }
    }
  }
  sys.rhs = target - direct_part;
  return sys;
}

PhaseValueGrad f1_value_grad(const Mat& A, const Vec& c, const Vec& v) {
  if (A.cols() != v.size() || A.rows() != c.size())
    throw std::invalid_argument("phase system shape mismatch");
  const Vec residual = A * v - c;
  return {0.5 * residual.squaredNorm(), A.adjoint() * residual};
}

double objective_f0(const ChannelSet& ch, const FactorPair& factors,
                    const Vec& phase) {
  const Vec b = build_target(ch.net);
  const ChannelGrid grid = composite_channel(ch, phase);
  return 0.5 * (apply_A2(ch.net, grid, factors) - b).squaredNorm();
}

}  // namespace risia
