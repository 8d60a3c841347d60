#pragma once

#include <array>
#include <limits>

#include "su2geom/algebra.hpp"
#include "su2geom/linalg.hpp"

namespace su2 {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class MetricKind {
  riemannian,               // all three parameters finite
  subriemannian2,           // a3 = inf, horizontal span {e1,e2}
  subriemannian_degenerate  // a2 = a3 = inf; diagnostics only
};

// A left-invariant (sub-)Riemannian geometry on SU(2).
//
// params = (a1,a2,a3) are the sorted square roots of the eigenvalues of the
// quadratic form Q relative to the -Killing inner product; frame is the
// rotation whose columns carry the Pauli basis to the standard Milnor basis
// diagonalizing the metric.  Q = frame diag(a^2) frame^T in the Riemannian
// case.
struct MetricSpec {
  std::array<double, 3> params{1.0, 1.0, 1.0};
  Mat3 Q = mat3_identity();
  Mat3 frame = mat3_identity();
  MetricKind kind = MetricKind::riemannian;

  double a1() const { return params[0]; }
  double a2() const { return params[1]; }
  double a3() const { return params[2]; }
  bool riemannian() const { return kind == MetricKind::riemannian; }

  // The unique metric with the given parameters in the Pauli frame.
  static MetricSpec from_params(double a1, double a2, double a3);
};

// Diagonalize an SPD quadratic form given in the Pauli basis.  Cyclic Jacobi
// on the 3x3 matrix; deterministic tie-breaking; the eigenvector matrix is
// flipped to det +1 by negating its first column if necessary, which keeps
// the columns a standard Milnor basis.
MetricSpec diagonalize(const Mat3& Q);

// Multiply all parameters by c (distances scale by c, Q by c^2).
MetricSpec scale(const MetricSpec& m, double c);

// |v|_g = sqrt(v^T Q v); +inf when a3 = inf and the e3-frame component of v
// exceeds 1e-12 (similarly for the degenerate kind).
double metric_norm(const MetricSpec& m, const AlgebraVector& v);

// Diagonal Ricci values Ric(e_i, e_i) in the diagonalizing frame.
// Riemannian metrics only.
std::array<double, 3> ricci(const MetricSpec& m);

// Ric(e_i,e_i)/g(e_i,e_i) for each i, and the index (0-based) attaining the
// minimum.  The minimum is bounded below by -0.5*(a3/(a1*a2))^2.
struct RicciRatios {
  std::array<double, 3> ratio;
  int argmin;
};
RicciRatios ricci_ratios(const MetricSpec& m);

// Replace each parameter by min(a_i, 1/eps); the result is Riemannian and
// approximates the sub-Riemannian geometry as eps -> 0.
MetricSpec epsilon_truncate(const MetricSpec& m, double eps);

}  // namespace su2
