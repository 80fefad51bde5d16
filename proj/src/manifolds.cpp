#include "risia/manifolds.hpp"

#include <stdexcept>

namespace risia {

void RcgOptions::validate() const {
  if (!(grad_tol > 0.0)) throw std::invalid_argument("rcg.grad_tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("rcg.max_iters must be >= 1");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0))
    throw std::invalid_argument("rcg.armijo_c1 must lie in (0,1)");
  if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0))
    throw std::invalid_argument("rcg.armijo_shrink must lie in (0,1)");
  if (armijo_max_backtracks < 1)
    throw std::invalid_argument("rcg.armijo_max_backtracks must be >= 1");
  if (!(initial_step > 0.0))
    throw std::invalid_argument("rcg.initial_step must be > 0");
}

namespace {

void check_on_circle(const Vec& v, const char* who) {
  for (Eigen::Index l = 0; l < v.size(); ++l) {
    if (std::abs(std::abs(v(l)) - 1.0) > 1e-6) {
      throw std::invalid_argument(std::string(who) +
                                  ": point is off the unit circle (corrupted "
                                  "iterate)");
    }
  }
}

}  // namespace

Vec circle_project(const Vec& v, const Vec& g) {
  check_on_circle(v, "circle_project");
  return CircleGeometry::project(v, g);
}

Vec circle_retract(const Vec& v, const Vec& step) {
  check_on_circle(v, "circle_retract");
  auto moved = CircleGeometry::try_retract(v, step);
  if (!moved) {
    throw std::domain_error(
        "circle_retract: degenerate retraction, |v + step| below 1e-14");
  }
  return *moved;
}

Vec circle_transport(const Vec& v_next, const Vec& eta) {
  check_on_circle(v_next, "circle_transport");
  return CircleGeometry::transport(v_next, eta);
}

Mat factor_retract(const Mat& y, const Mat& step) {
  auto moved = FactorGeometry::try_retract(y, step);
  if (!moved) {
    throw std::domain_error(
        "factor_retract: retracted point lost column rank");
  }
  return *moved;
}

}  // namespace risia
