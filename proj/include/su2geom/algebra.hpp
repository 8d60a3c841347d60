#pragma once

#include <array>
#include <cmath>

namespace su2 {

// A point of SU(2) stored as a unit quaternion.  The identification is
//   x = q0*I + q1*(2e1) + q2*(2e2) + q3*(2e3)
// with {e1,e2,e3} the Pauli standard Milnor basis; {I, 2e1, 2e2, 2e3}
// multiply exactly like the Hamilton units {1, i, j, k}.
struct GroupElement {
  double q0 = 1.0, q1 = 0.0, q2 = 0.0, q3 = 0.0;

  static GroupElement identity() { return {1.0, 0.0, 0.0, 0.0}; }

  double norm() const { return std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3); }

  // trace of the 2x2 matrix form
  double trace() const { return 2.0 * q0; }

  GroupElement inverse() const { return {q0, -q1, -q2, -q3}; }

  GroupElement renormalized() const {
    const double s = 1.0 / norm();
    return {q0 * s, q1 * s, q2 * s, q3 * s};
  }

  GroupElement negated() const { return {-q0, -q1, -q2, -q3}; }
};

// An element of su(2) in Pauli Milnor coordinates: v = x1*e1 + x2*e2 + x3*e3.
struct AlgebraVector {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;

  // Euclidean norm with respect to -Killing (e_i orthonormal).
  double norm2() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

  // rho^2 = det(A) of the matrix form (Remark after the exp closed form).
  double rho() const { return 0.5 * norm2(); }
};

inline AlgebraVector operator+(const AlgebraVector& a, const AlgebraVector& b) {
  return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
}
inline AlgebraVector operator-(const AlgebraVector& a, const AlgebraVector& b) {
  return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
}
inline AlgebraVector operator*(double c, const AlgebraVector& a) {
  return {c * a.x1, c * a.x2, c * a.x3};
}

// Group product (Hamilton product, renormalized).
GroupElement multiply(const GroupElement& x, const GroupElement& y);

// Raw Hamilton product without renormalization; used where exactness of the
// basis identities matters.
GroupElement multiply_raw(const GroupElement& x, const GroupElement& y);

// exp(A) = cos(rho) I + (sin(rho)/rho) A with rho = |v|/2.
GroupElement exp_map(const AlgebraVector& v);

// Inverse of exp_map on {rho < pi}; throws AntipodeError within 1e-12 of -I.
AlgebraVector log_map(const GroupElement& x);

// Ad_y v = y v y^{-1}; the induced 3x3 map lies in SO(3).
AlgebraVector adjoint(const GroupElement& y, const AlgebraVector& v);

// [u,v]; the cross product in Milnor coordinates.
AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v);

// Group commutator H(u,v) = exp(-u e1) exp(-v e2) exp(u e1) exp(v e2),
// computed as the product of the four exponentials.
GroupElement commutator(double u, double v);

// The same element from the trigonometric closed form; used to cross-check
// the product form (they agree to 1e-12).
GroupElement commutator_closed_form(double u, double v);

// h(u,v) = log(H(u,v))/(uv), extended continuously by h(0,0) = e3.
AlgebraVector commutator_direction(double u, double v);

// Coordinates of the second kind: exp(y1 e1) exp(y2 e2) exp(y3 e3).
// (First-kind coordinates are exp_map itself.)
GroupElement coords_second_kind(double y1, double y2, double y3);

// exp(t * e_i) for a single basis direction; handy and exact.
GroupElement exp_axis(int axis, double t);

}  // namespace su2
