#include "su2geom/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "su2geom/errors.hpp"
#include "su2geom/jacobi.hpp"
#include "su2geom/parallel.hpp"

namespace su2 {

namespace {

bool half_integer(double j) {
  const double tj = 2.0 * j;
  return j >= 0.0 && std::fabs(tj - std::round(tj)) < 1e-9;
}

// raising coefficient sqrt(j(j+1) - m(m+1))
double cplus(double j, double m) {
  return std::sqrt(std::max(0.0, j * (j + 1.0) - m * (m + 1.0)));
}

}  // namespace

IrrepGenerators irrep_generators(double j) {
  if (!half_integer(j))
    throw std::invalid_argument("irrep_generators: 2j must be a nonnegative integer");
  const int dim = static_cast<int>(std::lround(2.0 * j)) + 1;
  if (dim > kMaxIrrepDim)
    throw CutoffExceededError("irrep_generators: 2j+1 exceeds 512");

  IrrepGenerators g;
  g.j = j;
  g.dim = dim;
  g.E1.assign(static_cast<size_t>(dim) * dim, Complex(0, 0));
  g.E2 = g.E1;
  g.E3 = g.E1;

  // Basis |m> with m = j - r for row r.  E_i = -i J_i turns the standard
  // angular momentum algebra [J1,J2] = i J3 into the Milnor relations.
  for (int r = 0; r < dim; ++r) {
    const double m = j - r;
    g.E3[r * dim + r] = Complex(0, -m);
    if (r > 0) {
      const double c = cplus(j, m);  // <m+1| J+ |m>
      // Jx = (J+ + J-)/2, Jy = (J+ - J-)/(2i)
      g.E1[(r - 1) * dim + r] = Complex(0, -0.5 * c);
      g.E1[r * dim + (r - 1)] = Complex(0, -0.5 * c);
      g.E2[(r - 1) * dim + r] = Complex(-0.5 * c, 0);
      g.E2[r * dim + (r - 1)] = Complex(0.5 * c, 0);
    }
  }
  return g;
}

CMat laplacian_matrix(const IrrepGenerators& g, const MetricSpec& m) {
  if (m.kind == MetricKind::subriemannian_degenerate)
    throw SubRiemannianUnsupportedError(
        "laplacian_matrix: degenerate geometry rejected");
  const int d = g.dim;
  CMat L(static_cast<size_t>(d) * d, Complex(0, 0));
  const CMat* gens[3] = {&g.E1, &g.E2, &g.E3};
  for (int which = 0; which < 3; ++which) {
    const double a = m.params[which];
    if (std::isinf(a)) continue;
    const double w = 1.0 / (a * a);
    const CMat& E = *gens[which];
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        Complex s(0, 0);
        for (int k = 0; k < d; ++k) s += E[r * d + k] * E[k * d + c];
        L[r * d + c] -= w * s;
      }
  }
  return L;
}

namespace {

// Eigenvalues of the spin-j Laplacian block.  In the |m> basis the operator
//   i1 Jx^2 + i2 Jy^2 + i3 Jz^2
// is real symmetric and couples only m -> m, m+-2, so it splits into two
// blocks over the parity sublattices; each is handed to Jacobi.
std::vector<double> irrep_eigenvalues(double j, double i1, double i2, double i3) {
  const int dim = static_cast<int>(std::lround(2.0 * j)) + 1;
  std::vector<double> evals;
  evals.reserve(dim);

  auto diag = [&](int r) {
    const double m = j - r;
    return 0.5 * (i1 + i2) * (j * (j + 1.0) - m * m) + i3 * m * m;
  };
  auto off = [&](int r) {  // <r-2| L |r>
    const double m = j - r;
    return 0.25 * (i1 - i2) * cplus(j, m) * cplus(j, m + 1.0);
  };

  for (int parity = 0; parity < 2 && parity < dim; ++parity) {
    std::vector<int> rows;
    for (int r = parity; r < dim; r += 2) rows.push_back(r);
    std::vector<double> d(rows.size()), e;
    for (size_t a = 0; a < rows.size(); ++a) {
      d[a] = diag(rows[a]);
      if (a > 0) e.push_back(off(rows[a]));
    }
    const std::vector<double> ev = tridiag_eigenvalues(std::move(d), std::move(e));
    evals.insert(evals.end(), ev.begin(), ev.end());
  }
  std::sort(evals.begin(), evals.end());
  return evals;
}

}  // namespace

double SpectrumTable::lambda1() const {
  for (const auto& [lam, mult] : entries)
    if (lam > 1e-12) return lam;
  return 0.0;
}

long long SpectrumTable::total_multiplicity() const {
  long long s = 0;
  for (const auto& [lam, mult] : entries) s += mult;
  return s;
}

double irrep_lambda_lower_bound(const MetricSpec& m, double j) {
  if (m.kind == MetricKind::subriemannian2) {
    // -(i1 E1^2 + i2 E2^2) >= i2 (Casimir - Jz^2) >= i2 * j
    return j / (m.a2() * m.a2());
  }
  // -(sum) >= a3^-2 Casimir >= (j^2/4) a3^-2 (conservative)
  return j * j / (4.0 * m.a3() * m.a3());
}

double adaptive_j_max(const MetricSpec& m, double t_min) {
  const double need = 50.0 / t_min;
  const double cap = (kMaxIrrepDim - 1) / 2.0;  // 255.5
  for (double j = 1.0; j <= cap; j += 0.5) {
    if (irrep_lambda_lower_bound(m, j) >= need) return j;
  }
  return cap;
}

SpectrumTable spectrum_table(const MetricSpec& m, double j_max,
                             unsigned threads) {
  if (m.kind == MetricKind::subriemannian_degenerate)
    throw SubRiemannianUnsupportedError("spectrum_table: degenerate geometry");
  if (!half_integer(j_max))
    throw std::invalid_argument("spectrum_table: j_max must be a half-integer");
  if (2.0 * j_max + 1.0 > kMaxIrrepDim)
    throw CutoffExceededError("spectrum_table: 2j+1 exceeds 512");

  const double i1 = 1.0 / (m.params[0] * m.params[0]);
  const double i2 = 1.0 / (m.params[1] * m.params[1]);
  const double i3 = m.riemannian() ? 1.0 / (m.params[2] * m.params[2]) : 0.0;

  const int count = static_cast<int>(std::lround(2.0 * j_max)) + 1;
  std::vector<std::vector<double>> per_irrep(count);
  parallel_for(
      0, static_cast<size_t>(count),
      [&](std::size_t idx) {
        const double j = 0.5 * static_cast<double>(idx);
        per_irrep[idx] = irrep_eigenvalues(j, i1, i2, i3);
      },
      threads);

  std::vector<std::pair<double, long long>> raw;
  for (int idx = 0; idx < count; ++idx) {
    const long long mult = idx + 1;  // 2j+1
    for (double lam : per_irrep[idx]) raw.emplace_back(lam, mult);
  }
  std::sort(raw.begin(), raw.end());

  SpectrumTable t;
  t.params = m.params;
  t.sub = !m.riemannian();
  t.j_max = j_max;
  for (const auto& [lam, mult] : raw) {
    if (!t.entries.empty() && lam - t.entries.back().first <= 1e-9) {
      t.entries.back().second += mult;
    } else {
      t.entries.emplace_back(std::max(0.0, lam), mult);
    }
  }
  return t;
}

double lambda1_exact(const MetricSpec& m) {
  if (!m.riemannian())
    throw SubRiemannianUnsupportedError("lambda1_exact: infinite parameter");
  const double i1 = 1.0 / (m.params[0] * m.params[0]);
  const double i2 = 1.0 / (m.params[1] * m.params[1]);
  const double i3 = 1.0 / (m.params[2] * m.params[2]);
  return std::min(0.25 * (i1 + i2 + i3), i2 + i3);
}

double truncation_bound(const SpectrumTable& t, double time) {
  MetricSpec m;
  m.params = t.params;
  m.kind = t.sub ? MetricKind::subriemannian2 : MetricKind::riemannian;
  double s = 0.0;
  for (double j = t.j_max + 0.5; j < t.j_max + 200000.0; j += 0.5) {
    const double dim = 2.0 * j + 1.0;
    const double term = dim * dim * std::exp(-time * irrep_lambda_lower_bound(m, j));
    s += term;
    if (term < 1e-30 && j > t.j_max + 2.0) break;
  }
  return s;
}

double heat_trace_safe_time(const SpectrumTable& t) {
  double lo = 1e-12, hi = 1e12;
  if (truncation_bound(t, lo) <= 1e-8) return lo;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (truncation_bound(t, mid) > 1e-8)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double heat_trace(const SpectrumTable& t, double time) {
  if (!(time > 0.0)) throw std::invalid_argument("heat_trace: time <= 0");
  const double bound = truncation_bound(t, time);
  if (bound > 1e-8)
    throw TraceTruncatedError("heat_trace: tail bound above 1e-8", bound);
  double s = 0.0;
  for (auto it = t.entries.rbegin(); it != t.entries.rend(); ++it)
    s += static_cast<double>(it->second) * std::exp(-time * it->first);
  return s;
}

double heat_trace_centered(const SpectrumTable& t, double time) {
  if (!(time > 0.0)) throw std::invalid_argument("heat_trace_centered: time <= 0");
  double s = 0.0;
  for (auto it = t.entries.rbegin(); it != t.entries.rend(); ++it) {
    if (it->first <= 1e-12) continue;
    s += static_cast<double>(it->second) * std::exp(-time * it->first);
  }
  return s;
}

long long weyl_count(const SpectrumTable& t, double s) {
  if (s > weyl_safe_threshold(t))
    throw CountTruncatedError(
        "weyl_count: threshold reaches the omitted irreps");
  long long c = 0;
  for (const auto& [lam, mult] : t.entries) {
    if (lam < s)
      c += mult;
    else
      break;
  }
  return c;
}

double weyl_safe_threshold(const SpectrumTable& t) {
  MetricSpec m;
  m.params = t.params;
  m.kind = t.sub ? MetricKind::subriemannian2 : MetricKind::riemannian;
  return irrep_lambda_lower_bound(m, t.j_max + 0.5);
}

double weyl_model(const MetricSpec& m, double t) {
  if (!m.riemannian())
    throw SubRiemannianUnsupportedError("weyl_model: infinite parameter");
  if (!(t > 0.0)) throw std::invalid_argument("weyl_model: t <= 0");
  const double a1 = m.a1(), a2 = m.a2(), a3 = m.a3();
  if (t < 1.0 / (a2 * a2)) return 1.0;
  if (t < 1.0 / (a1 * a1)) return a2 * a2 * t;
  const double bp = (a3 * a3) / (a1 * a1 * a2 * a2);
  if (t < bp) return a1 * a1 * a2 * a2 * t * t;
  return a1 * a2 * a3 * std::pow(t, 1.5);
}

}  // namespace su2
