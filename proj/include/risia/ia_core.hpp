#pragma once

#include "risia/types.hpp"

namespace risia {

/// Stacked alignment target b: block (i,j) is zero for i != j and the
/// column-major vectorization of I_{d_i} for i == j, blocks ordered
/// i-outer/j-inner.
Vec build_target(const NetworkConfig& net);

/// Composite channels H~[i][j] = H[i][j] + R[i] diag(v) T[j]. With L = 0 the
/// reflect term is absent and the direct grid is returned unchanged.
ChannelGrid composite_channel(const ChannelSet& ch, const Vec& phase);

/// The fixed-phase linear operator A2 applied to X = left * right^H: block
/// (i,j) of the result is vec( sum_{m,n} H~_ij[m,n] X_{i,j}[m,n] ) where
/// X_{i,j}[m,n] is the d_i x d_j sub-block at row band (i,m), column band
/// (j,n).
Vec apply_A2(const NetworkConfig& net, const ChannelGrid& composite,
             const FactorPair& factors);

/// Adjoint of apply_A2 under the complex trace pairing: the unique G with
/// <A2 X, y> = <X, G> for all X. Its (i,m) x (j,n) sub-block equals
/// conj(H~_ij[m,n]) * unvec(y block (i,j)).
Mat adjoint_A2(const NetworkConfig& net, const ChannelGrid& composite,
               const Vec& y);

struct FactorValueGrad {
  double value = 0.0;
  Mat grad;  // (M+N) x r, stacked [d/dL; d/dR]
};

/// Value and ambient gradient of f2(Y) = 0.5 || A2(L R^H) - b ||^2 at the
/// stacked factor Y = [L; R]. The gradient blocks are G R and G^H L with
/// G the adjoint applied to the residual.
FactorValueGrad f2_value_grad(const NetworkConfig& net,
                              const ChannelGrid& composite, const Mat& stacked,
                              const Vec& target);

struct PhaseSystem {
  Mat matrix;  // A: S x L
  Vec rhs;     // c = b - e
};

/// Least-squares system in the phase vector for a fixed factor pair:
/// 0.5 || A v - c ||^2 equals objective_f0 at every unit-modulus v.
/// Requires L >= 1.
PhaseSystem assemble_phase_system(const ChannelSet& ch,
                                  const FactorPair& factors, const Vec& target);

struct PhaseValueGrad {
  double value = 0.0;
  Vec grad;  // A^H (A v - c)
};

PhaseValueGrad f1_value_grad(const Mat& A, const Vec& c, const Vec& v);

/// Bilinear objective f0 = 0.5 || A(X, diag(v)) - b ||^2.
double objective_f0(const ChannelSet& ch, const FactorPair& factors,
                    const Vec& phase);

}  // namespace risia
