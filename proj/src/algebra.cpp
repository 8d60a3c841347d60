#include "su2geom/algebra.hpp"

#include <cmath>

#include "su2geom/errors.hpp"

namespace su2 {

namespace {

// sin(r)/r, series below 1e-4 (truncation error there < 1e-16 relative)
double sinc(double r) {
  if (std::fabs(r) < 1e-4) {
    const double r2 = r * r;
    return 1.0 - r2 / 6.0 + r2 * r2 / 120.0 - r2 * r2 * r2 / 5040.0 +
           r2 * r2 * r2 * r2 / 362880.0;
  }
  return std::sin(r) / r;
}

// r/sin(r) for r in [0, 1e-4)
double inv_sinc_small(double r) {
  const double r2 = r * r;
  return 1.0 + r2 / 6.0 + 7.0 * r2 * r2 / 360.0 +
         31.0 * r2 * r2 * r2 / 15120.0 +
         127.0 * r2 * r2 * r2 * r2 / 604800.0;
}

}  // namespace

GroupElement multiply_raw(const GroupElement& x, const GroupElement& y) {
  return {x.q0 * y.q0 - x.q1 * y.q1 - x.q2 * y.q2 - x.q3 * y.q3,
          x.q0 * y.q1 + x.q1 * y.q0 + x.q2 * y.q3 - x.q3 * y.q2,
          x.q0 * y.q2 + x.q2 * y.q0 + x.q3 * y.q1 - x.q1 * y.q3,
          x.q0 * y.q3 + x.q3 * y.q0 + x.q1 * y.q2 - x.q2 * y.q1};
}

GroupElement multiply(const GroupElement& x, const GroupElement& y) {
  return multiply_raw(x, y).renormalized();
}

GroupElement exp_map(const AlgebraVector& v) {
  const double rho = v.rho();
  const double f = 0.5 * sinc(rho);
  return {std::cos(rho), f * v.x1, f * v.x2, f * v.x3};
}

AlgebraVector log_map(const GroupElement& x) {
  if (x.q0 < -1.0 + 1e-12) {
    throw AntipodeError("log_map: element within 1e-12 of -I, logarithm non-unique");
  }
  const double s = std::sqrt(x.q1 * x.q1 + x.q2 * x.q2 + x.q3 * x.q3);
  // For a unit quaternion (cos rho, sin(rho) u), s equals sin(rho) exactly,
  // and atan2 recovers rho without the cancellation arccos(q0) suffers near 1.
  const double rho = std::atan2(s, x.q0);
  double f;  // 2 * rho / sin(rho)
  if (rho < 1e-4) {
    f = 2.0 * inv_sinc_small(rho);
  } else {
    f = 2.0 * rho / s;
  }
  return {f * x.q1, f * x.q2, f * x.q3};
}

AlgebraVector adjoint(const GroupElement& y, const AlgebraVector& v) {
  // Conjugate the pure quaternion (0, v/2) and read back coordinates.
  const GroupElement p{0.0, 0.5 * v.x1, 0.5 * v.x2, 0.5 * v.x3};
  const GroupElement w = multiply_raw(multiply_raw(y, p), y.inverse());
  return {2.0 * w.q1, 2.0 * w.q2, 2.0 * w.q3};
}

AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v) {
  return {u.x2 * v.x3 - u.x3 * v.x2,
          u.x3 * v.x1 - u.x1 * v.x3,
          u.x1 * v.x2 - u.x2 * v.x1};
}

GroupElement exp_axis(int axis, double t) {
  const double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
  switch (axis) {
    case 1: return {c, s, 0.0, 0.0};
    case 2: return {c, 0.0, s, 0.0};
    default: return {c, 0.0, 0.0, s};
  }
}

GroupElement commutator(double u, double v) {
  const GroupElement a = exp_axis(1, -u);
  const GroupElement b = exp_axis(2, -v);
  return multiply(multiply(multiply(a, b), exp_axis(1, u)), exp_axis(2, v));
}

GroupElement commutator_closed_form(double u, double v) {
  const double cu = std::cos(u), su = std::sin(u);
  const double cv = std::cos(v), sv = std::sin(v);
  // Coefficients of I, e1, e2, e3; quaternion components carry a 1/2 since
  // q_i multiplies 2e_i.
  const double c0 = 0.5 * ((1.0 + cu) + cv * (1.0 - cu));
  const double c1 = -(1.0 - cv) * su;
  const double c2 = sv * (1.0 - cu);
  const double c3 = sv * su;
  return GroupElement{c0, 0.5 * c1, 0.5 * c2, 0.5 * c3};
}

AlgebraVector commutator_direction(double u, double v) {
  const double uv = u * v;
  if (std::fabs(uv) < 1e-14) return {0.0, 0.0, 1.0};
  const AlgebraVector w = log_map(commutator(u, v));
  return (1.0 / uv) * w;
}

GroupElement coords_second_kind(double y1, double y2, double y3) {
  return multiply(multiply(exp_axis(1, y1), exp_axis(2, y2)), exp_axis(3, y3));
}

}  // namespace su2
