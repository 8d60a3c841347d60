#include "su2geom/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace su2 {

namespace {

double offdiag_norm(const std::vector<double>& A, int n) {
  double s = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) s += A[p * n + q] * A[p * n + q];
  return std::sqrt(2.0 * s);
}

}  // namespace

void jacobi_eigensymm(std::vector<double>& A, int n, std::vector<double>& evals,
                      std::vector<double>* evecs, double tol) {
  if (evecs) {
    evecs->assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) (*evecs)[i * n + i] = 1.0;
  }

  double fro = 0;
  for (int i = 0; i < n * n; ++i) fro += A[i] * A[i];
  fro = std::sqrt(fro);
  const double stop = tol * (fro > 0 ? fro : 1.0);

  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(A, n) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A[p * n + q];
        if (apq == 0.0) continue;
        const double app = A[p * n + p];
        const double aqq = A[q * n + q];
        // skip rotations that cannot move the off-norm at this scale
        if (std::fabs(apq) < 1e-300) {
          A[p * n + q] = A[q * n + p] = 0.0;
          continue;
        }
        const double theta = 0.5 * (aqq - app) / apq;
        double t;
        if (std::fabs(theta) > 1e154) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double h = t * apq;

        A[p * n + p] = app - h;
        A[q * n + q] = aqq + h;
        A[p * n + q] = A[q * n + p] = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = A[i * n + p];
          const double aiq = A[i * n + q];
          A[i * n + p] = A[p * n + i] = aip - s * (aiq + tau * aip);
          A[i * n + q] = A[q * n + i] = aiq + s * (aip - tau * aiq);
        }
        if (evecs) {
          for (int i = 0; i < n; ++i) {
            const double vip = (*evecs)[i * n + p];
            const double viq = (*evecs)[i * n + q];
            (*evecs)[i * n + p] = vip - s * (viq + tau * vip);
            (*evecs)[i * n + q] = viq + s * (vip - tau * viq);
          }
        }
      }
    }
  }

  evals.resize(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = A[i * n + i];
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return diag[a] < diag[b]; });
  for (int i = 0; i < n; ++i) evals[i] = diag[order[i]];
  if (evecs) {
    std::vector<double> v(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) v[i * n + j] = (*evecs)[i * n + order[j]];
    evecs->swap(v);
  }
}

std::vector<double> tridiag_eigenvalues(std::vector<double> diag,
                                        std::vector<double> off) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return {};
  off.push_back(0.0);  // sentinel e[n-1]

  auto hypot2 = [](double a, double b) { return std::hypot(a, b); };

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      for (; m < n - 1; ++m) {
        const double dd = std::fabs(diag[m]) + std::fabs(diag[m + 1]);
        if (std::fabs(off[m]) <= 1e-16 * dd) break;
      }
      if (m == l) break;
      if (++iter > 60)
        throw std::runtime_error("tridiag_eigenvalues: QL failed to converge");

      double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
      double r = hypot2(g, 1.0);
      g = diag[m] - diag[l] +
          off[l] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        double f = s * off[i];
        const double b = c * off[i];
        r = hypot2(f, g);
        off[i + 1] = r;
        if (r == 0.0) {
          diag[i + 1] -= p;
          off[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
      }
      if (r == 0.0 && i >= l) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0.0;
    }
  }
  std::sort(diag.begin(), diag.end());
  return diag;
}

Eig3 jacobi_eig3(const Mat3& m, double tol) {
  std::vector<double> A(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A[i * 3 + j] = m[i][j];
  std::vector<double> evals, evecs;
  jacobi_eigensymm(A, 3, evals, &evecs, tol);
  Eig3 out;
  for (int i = 0; i < 3; ++i) {
    out.values[i] = evals[i];
    for (int j = 0; j < 3; ++j) out.vectors[i][j] = evecs[i * 3 + j];
  }
  return out;
}

}  // namespace su2
