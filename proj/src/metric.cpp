#include "su2geom/metric.hpp"

#include <algorithm>
#include <cmath>

#include "su2geom/errors.hpp"
#include "su2geom/jacobi.hpp"

namespace su2 {

namespace {

MetricKind kind_from_params(double a2, double a3) {
  if (std::isinf(a2)) return MetricKind::subriemannian_degenerate;
  if (std::isinf(a3)) return MetricKind::subriemannian2;
  return MetricKind::riemannian;
}

}  // namespace

MetricSpec MetricSpec::from_params(double a1, double a2, double a3) {
  MetricSpec m;
  m.params = {a1, a2, a3};
  m.kind = kind_from_params(a2, a3);
  m.frame = mat3_identity();
  if (m.kind == MetricKind::riemannian) {
    m.Q = mat3_diag(a1 * a1, a2 * a2, a3 * a3);
  } else {
    m.Q = mat3_diag(a1 * a1, std::isinf(a2) ? 0.0 : a2 * a2, 0.0);
  }
  return m;
}

MetricSpec diagonalize(const Mat3& Q) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::fabs(Q[i][j] - Q[j][i]) > 1e-12)
        throw NotSPDError("diagonalize: Q is not symmetric");

  Eig3 eig = jacobi_eig3(Q);
  if (eig.values[0] <= 1e-12)
    throw NotSPDError("diagonalize: smallest eigenvalue not positive");

  // Orientation fix: det -1 means the eigenbasis brackets with a global sign;
  // negating the first column restores a standard Milnor basis.
  if (det3(eig.vectors) < 0.0) {
    for (int i = 0; i < 3; ++i) eig.vectors[i][0] = -eig.vectors[i][0];
  }

  MetricSpec m;
  m.params = {std::sqrt(eig.values[0]), std::sqrt(eig.values[1]),
              std::sqrt(eig.values[2])};
  m.frame = eig.vectors;
  m.Q = Q;
  m.kind = MetricKind::riemannian;
  return m;
}

MetricSpec scale(const MetricSpec& m, double c) {
  MetricSpec out = m;
  for (auto& a : out.params) a *= c;
  for (auto& row : out.Q)
    for (auto& v : row) v *= c * c;
  return out;
}

double metric_norm(const MetricSpec& m, const AlgebraVector& v) {
  const Vec3 w = matvec_t(m.frame, {v.x1, v.x2, v.x3});  // frame coordinates
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (std::isinf(m.params[i])) {
      if (std::fabs(w[i]) > 1e-12) return kInf;
    } else {
      s += m.params[i] * m.params[i] * w[i] * w[i];
    }
  }
  return std::sqrt(s);
}

std::array<double, 3> ricci(const MetricSpec& m) {
  if (!m.riemannian())
    throw SubRiemannianUnsupportedError("ricci: infinite parameter");
  const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
  auto ric = [](double ai, double aj, double ak) {
    const double d = aj * aj - ak * ak;
    return (ai * ai * ai * ai - d * d) / (2.0 * aj * aj * ak * ak);
  };
  return {ric(a1, a2, a3), ric(a2, a3, a1), ric(a3, a1, a2)};
}

RicciRatios ricci_ratios(const MetricSpec& m) {
  const auto r = ricci(m);
  RicciRatios out{};
  int arg = 0;
  for (int i = 0; i < 3; ++i) {
    out.ratio[i] = r[i] / (m.params[i] * m.params[i]);
    if (out.ratio[i] < out.ratio[arg]) arg = i;
  }
  out.argmin = arg;
  return out;
}

MetricSpec epsilon_truncate(const MetricSpec& m, double eps) {
  const double cap = 1.0 / eps;
  MetricSpec out;
  out.params = {std::min(m.params[0], cap), std::min(m.params[1], cap),
                std::min(m.params[2], cap)};
  out.frame = m.frame;
  out.kind = MetricKind::riemannian;
  const Mat3 d = mat3_diag(out.params[0] * out.params[0],
                           out.params[1] * out.params[1],
                           out.params[2] * out.params[2]);
  out.Q = matmul(matmul(out.frame, d), transpose(out.frame));
  return out;
}

}  // namespace su2
