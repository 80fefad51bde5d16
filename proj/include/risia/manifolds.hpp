#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "risia/types.hpp"

namespace risia {

/// Knobs for the Riemannian conjugate-gradient driver.
struct RcgOptions {
  double grad_tol = 1e-10;  // stop when the Riemannian gradient norm falls below
  int max_iters = 400;
  double armijo_c1 = 1e-4;
  double armijo_shrink = 0.5;
  int armijo_max_backtracks = 50;
  double initial_step = 1.0;  // first trial step is initial_step / |grad|

  void validate() const;
};

enum class RcgTermination { GradTol, MaxIters, LineSearchFail };

struct RcgTrace {
  std::vector<double> objective;  // value at x0, then after each accepted step
  std::vector<double> grad_norm;
  std::vector<double> step_sizes;
  int iterations = 0;
  RcgTermination termination = RcgTermination::GradTol;
};

// ---------------------------------------------------------------------------
// Complex circle manifold: the product of L unit circles in C.
// ---------------------------------------------------------------------------

/// Orthogonal projection of an ambient vector onto the tangent space at v:
/// g - Re{g .* conj(v)} .* v. Rejects v whose moduli drift more than 1e-6
/// from one.
Vec circle_project(const Vec& v, const Vec& g);

/// Moved-point retraction (v + step) / |v + step| elementwise. Throws when
/// any |v_l + step_l| < 1e-14 (a degenerate step the line search must
/// shrink).
Vec circle_retract(const Vec& v, const Vec& step);

/// Transport of a tangent vector into the tangent space at v_next; for this
/// manifold that is exactly the projection at the new point.
Vec circle_transport(const Vec& v_next, const Vec& eta);

/// Geometry callbacks for rcg_minimize on the circle manifold. try_retract
/// reports degeneracy via nullopt instead of throwing so the line search can
/// back off.
struct CircleGeometry {
  using Point = Vec;

  static Point project(const Point& v, const Point& g) {
    return g - g.cwiseProduct(v.conjugate()).real().cast<Complex>().cwiseProduct(v);
  }

  static std::optional<Point> try_retract(const Point& v, const Point& step) {
    Point moved = v + step;
    Eigen::VectorXd mod = moved.cwiseAbs();
    if ((mod.array() < 1e-14).any()) return std::nullopt;
    return Point(moved.cwiseQuotient(mod.cast<Complex>()));
  }

  static Point transport(const Point& v_next, const Point& eta) {
    return project(v_next, eta);
  }

  /// Real part of the Hermitian inner product.
  static double inner(const Point& a, const Point& b) {
    return b.dot(a).real();
  }
};

// ---------------------------------------------------------------------------
// Non-compact Stiefel manifold: full-column-rank (M+N) x r matrices. The set
// is open in the ambient space, so projection and transport are identities
// and the retraction is plain addition with a rank guard.
// ---------------------------------------------------------------------------

struct FactorGeometry {
  using Point = Mat;

  static Point project(const Point&, const Point& g) { return g; }

  static std::optional<Point> try_retract(const Point& y, const Point& step) {
    Point moved = y + step;
    Eigen::JacobiSVD<Mat> svd(moved);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) < 1e-12 * s(0)) return std::nullopt;
    return moved;
  }

  static Point transport(const Point&, const Point& eta) { return eta; }

  static double inner(const Point& a, const Point& b) {
    return a.cwiseProduct(b.conjugate()).sum().real();
  }
};

/// Throwing wrapper around FactorGeometry::try_retract.
Mat factor_retract(const Mat& y, const Mat& step);

// ---------------------------------------------------------------------------
// Generic RCG driver.
// ---------------------------------------------------------------------------

/// Minimizes `objective` over the manifold described by `Geometry`, starting
/// from x0. Directions follow the Polak-Ribiere+ rule with a descent reset,
/// step sizes come from Armijo backtracking (first trial 1/|grad|, then
/// twice the previously accepted step). `on_iterate`, when given, is called
/// with every accepted point.
template <class Geometry, class Objective, class EuclidGrad>
std::pair<typename Geometry::Point, RcgTrace> rcg_minimize(
    Objective&& objective, EuclidGrad&& euclid_grad,
    const typename Geometry::Point& x0, const RcgOptions& opts = {},
    const std::function<void(const typename Geometry::Point&)>& on_iterate =
        {}) {
  using Point = typename Geometry::Point;
  opts.validate();

  RcgTrace trace;
  Point x = x0;
  double f = objective(x);
  Point grad = Geometry::project(x, euclid_grad(x));
  double grad_sq = Geometry::inner(grad, grad);
  double grad_norm = std::sqrt(grad_sq);
  trace.objective.push_back(f);
  trace.grad_norm.push_back(grad_norm);
  if (grad_norm <= opts.grad_tol) {
    trace.termination = RcgTermination::GradTol;
    return {std::move(x), std::move(trace)};
  }

  Point dir = -grad;
  double step_guess = opts.initial_step / grad_norm;
  trace.termination = RcgTermination::MaxIters;

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    double slope = Geometry::inner(dir, grad);
    if (slope >= 0.0) {  // not a descent direction: fall back to steepest
      dir = -grad;
      slope = -grad_sq;
    }

    double alpha = step_guess;
    bool accepted = false;
    Point candidate;
    double f_candidate = f;
    for (int bt = 0; bt < opts.armijo_max_backtracks; ++bt) {
      auto moved = Geometry::try_retract(x, Point(alpha * dir));
      if (moved) {
        f_candidate = objective(*moved);
        if (f_candidate <= f + opts.armijo_c1 * alpha * slope) {
          candidate = std::move(*moved);
          accepted = true;
          break;
        }
      }
      alpha *= opts.armijo_shrink;
    }
    if (!accepted) {
      trace.termination = RcgTermination::LineSearchFail;
      break;
    }

    Point grad_new = Geometry::project(candidate, euclid_grad(candidate));
    const double grad_sq_new = Geometry::inner(grad_new, grad_new);
    const double grad_norm_new = std::sqrt(grad_sq_new);

    f = f_candidate;
    trace.objective.push_back(f);
    trace.grad_norm.push_back(grad_norm_new);
    trace.step_sizes.push_back(alpha);
    trace.iterations = iter + 1;
    if (on_iterate) on_iterate(candidate);

    if (grad_norm_new <= opts.grad_tol) {
      x = std::move(candidate);
      trace.termination = RcgTermination::GradTol;
      break;
    }

    // Polak-Ribiere+ with the previous gradient transported to the new point.
    const Point grad_prev = Geometry::transport(candidate, grad);
    double beta =
        Geometry::inner(grad_new, Point(grad_new - grad_prev)) / grad_sq;
    beta = std::max(0.0, beta);
    dir = Point(-grad_new + beta * Geometry::transport(candidate, dir));

    x = std::move(candidate);
    grad = std::move(grad_new);
    grad_sq = grad_sq_new;
    step_guess = 2.0 * alpha;
  }

  return {std::move(x), std::move(trace)};
}

}  // namespace risia
