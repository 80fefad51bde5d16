#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "risia/manifolds.hpp"

using namespace risia;
using testing::random_cmat;
using testing::random_cvec;
using testing::random_unit_modulus;

namespace {
const Complex kI(0.0, 1.0);
}

TEST_CASE("circle_project keeps tangent vectors and kills radial ones") {
  Vec v(2);
  v << Complex(1, 0), Complex(1, 0);
  Vec g(2);
  g << kI, -kI;
  CHECK((circle_project(v, g) - g).norm() == doctest::Approx(0.0));

  Vec v1(1), g1(1);
  v1 << Complex(1, 0);
  g1 << Complex(3, 0);
  CHECK(circle_project(v1, g1).norm() == doctest::Approx(0.0));
}

TEST_CASE("circle_project output is tangent and projection is idempotent") {
  Prng rng({42});
  for (int trial = 0; trial < 20; ++trial) {
    const Vec v = random_unit_modulus(8, rng);
    const Vec g = random_cvec(8, rng);
    const Vec t = circle_project(v, g);
    CHECK(t.cwiseProduct(v.conjugate()).real().cwiseAbs().maxCoeff() < 1e-12);
    CHECK((circle_project(v, t) - t).norm() < 1e-12);
  }
}

TEST_CASE("circle_project rejects off-circle points") {
  Vec v(2);
  v << Complex(1.1, 0), Complex(1, 0);
  CHECK_THROWS_AS(circle_project(v, v), std::invalid_argument);
}

TEST_CASE("circle_retract examples") {
  Vec v(2);
  v << Complex(1, 0), kI;
  CHECK((circle_retract(v, Vec::Zero(2)) - v).norm() == doctest::Approx(0.0));

  Vec v1(1), step(1);
  v1 << Complex(1, 0);
  step << kI;
  const Complex expected = Complex(1, 1) / std::sqrt(2.0);
  CHECK(std::abs(circle_retract(v1, step)(0) - expected) < 1e-15);
}

TEST_CASE("circle_retract stays on the manifold") {
  Prng rng({7});
  for (int trial = 0; trial < 20; ++trial) {
    const Vec v = random_unit_modulus(16, rng);
    const Vec step = circle_project(v, random_cvec(16, rng));
    const Vec moved = circle_retract(v, step);
    CHECK((moved.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("circle_retract flags degenerate steps") {
  Vec v(1), step(1);
  v << Complex(1, 0);
  step << Complex(-1, 0);
  CHECK_THROWS_AS(circle_retract(v, step), std::domain_error);
}

TEST_CASE("circle_transport is projection at the new point") {
  Prng rng({11});
  const Vec v_next = random_unit_modulus(6, rng);
  const Vec eta = random_cvec(6, rng);
  CHECK((circle_transport(v_next, eta) - circle_project(v_next, eta)).norm() <
        1e-15);

  // Already tangent: unchanged.
  const Vec t = circle_project(v_next, eta);
  CHECK((circle_transport(v_next, t) - t).norm() < 1e-12);

  // Radial: annihilated.
  Vec one(1), radial(1);
  one << Complex(1, 0);
  radial << Complex(2, 0);
  CHECK(circle_transport(one, radial).norm() == doctest::Approx(0.0));
}

TEST_CASE("Riemannian gradient matches directional differences") {
  Prng rng({13});
  const int l = 6, s = 9;
  for (int trial = 0; trial < 10; ++trial) {
    const Mat a = random_cmat(s, l, rng);
    const Vec c = random_cvec(s, rng);
    auto f = [&](const Vec& w) { return 0.5 * (a * w - c).squaredNorm(); };
    const Vec v = random_unit_modulus(l, rng);
    const Vec grad = circle_project(v, a.adjoint() * (a * v - c));
    const Vec dir = circle_project(v, random_cvec(l, rng));
    const double h = 1e-6;
    const double fd =
        (f(circle_retract(v, h * dir)) - f(circle_retract(v, -h * dir))) /
        (2.0 * h);
    const double analytic = CircleGeometry::inner(grad, dir);
    CHECK(std::abs(fd - analytic) <= 1e-5 * (1.0 + std::abs(analytic)));
  }
}

TEST_CASE("rcg_minimize converges to the projected target on the circle") {
  Prng rng({17});
  const Vec target = random_unit_modulus(4, rng);
  auto objective = [&](const Vec& w) { return 0.5 * (w - target).squaredNorm(); };
  auto egrad = [&](const Vec& w) { return Vec(w - target); };

  const Vec x0 = random_unit_modulus(4, rng);
  auto [x, trace] = rcg_minimize<CircleGeometry>(objective, egrad, x0);
  CHECK(trace.termination == RcgTermination::GradTol);
  CHECK(trace.iterations < 100);
  CHECK(trace.grad_norm.back() <= 1e-10);
  CHECK((x - target).norm() < 1e-6);
}

TEST_CASE("rcg_minimize returns immediately at a stationary start") {
  Vec v(3);
  v << Complex(1, 0), kI, Complex(0, -1);
  auto objective = [&](const Vec& w) { return 0.5 * (w - v).squaredNorm(); };
  auto egrad = [&](const Vec& w) { return Vec(w - v); };
  auto [x, trace] = rcg_minimize<CircleGeometry>(objective, egrad, v);
  CHECK(trace.iterations == 0);
  CHECK(trace.termination == RcgTermination::GradTol);
  CHECK((x - v).norm() == doctest::Approx(0.0));
}

TEST_CASE("rcg_minimize descent and feasibility over random quadratics") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Prng rng({1000, seed});
    const int l = 8, s = 12;
    const Mat a = random_cmat(s, l, rng);
    const Vec c = random_cvec(s, rng);
    auto objective = [&](const Vec& w) {
      return 0.5 * (a * w - c).squaredNorm();
    };
    auto egrad = [&](const Vec& w) { return Vec(a.adjoint() * (a * w - c)); };
    const Vec x0 = random_unit_modulus(l, rng);

    double worst_modulus = 0.0;
    auto watch = [&](const Vec& w) {
      worst_modulus = std::max(
          worst_modulus, (w.cwiseAbs().array() - 1.0).abs().maxCoeff());
    };
    RcgOptions opts;
    opts.max_iters = 200;
    auto [x, trace] = rcg_minimize<CircleGeometry>(objective, egrad, x0, opts,
                                                   watch);
    CHECK(worst_modulus <= 1e-12);
    for (std::size_t t = 1; t < trace.objective.size(); ++t)
      CHECK(trace.objective[t] <= trace.objective[t - 1] + 1e-12);
  }
}

TEST_CASE("rcg_minimize reports a line-search failure on a bad gradient") {
  Prng rng({23});
  const Vec target = random_unit_modulus(4, rng);
  auto objective = [&](const Vec& w) { return 0.5 * (w - target).squaredNorm(); };
  // Wrong sign: every direction the driver tries is uphill.
  auto egrad = [&](const Vec& w) { return Vec(target - w); };
  const Vec x0 = random_unit_modulus(4, rng);
  auto [x, trace] = rcg_minimize<CircleGeometry>(objective, egrad, x0);
  CHECK(trace.termination == RcgTermination::LineSearchFail);
}

TEST_CASE("factor geometry is the open-set geometry with a rank guard") {
  Prng rng({29});
  const Mat y = random_cmat(6, 2, rng);
  const Mat g = random_cmat(6, 2, rng);
  CHECK((FactorGeometry::project(y, g) - g).norm() == 0.0);
  CHECK((FactorGeometry::transport(y, g) - g).norm() == 0.0);
  CHECK((factor_retract(y, g) - (y + g)).norm() == 0.0);

  // Step that collapses the second column onto the first.
  Mat collapse = y;
  collapse.col(1) = y.col(0);
  CHECK_THROWS_AS(factor_retract(y, Mat(collapse - y)), std::domain_error);
}

TEST_CASE("factor-manifold gradient check via directional differences") {
  Prng rng({31});
  const int rows = 5, rank = 2;
  const Mat target = random_cmat(rows, rank, rng);
  auto objective = [&](const Mat& y) {
    return 0.5 * (y - target).squaredNorm();
  };
  auto egrad = [&](const Mat& y) { return Mat(y - target); };
  const Mat y = random_cmat(rows, rank, rng);
  const Mat dir = random_cmat(rows, rank, rng);
  const double h = 1e-6;
  const double fd = (objective(y + h * dir) - objective(y - h * dir)) / (2 * h);
  CHECK(std::abs(fd - FactorGeometry::inner(egrad(y), dir)) < 1e-6);
}
