#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "su2geom/errors.hpp"
#include "su2geom/jacobi.hpp"
#include "su2geom/rng.hpp"
#include "su2geom/spectrum.hpp"
#include "oracles.hpp"

using namespace su2;

namespace {

CMat cmat_mul(const CMat& a, const CMat& b, int d) {
  CMat r(static_cast<size_t>(d) * d, Complex(0, 0));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      const Complex aik = a[i * d + k];
      if (aik == Complex(0, 0)) continue;
      for (int j = 0; j < d; ++j) r[i * d + j] += aik * b[k * d + j];
    }
  return r;
}

double cmat_dist(const CMat& a, const CMat& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

CMat cmat_sub(const CMat& a, const CMat& b) {
  CMat r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// eigenvalues of a Hermitian matrix through the real-symmetric embedding
// [[Re, -Im], [Im, Re]]; each eigenvalue appears twice
std::vector<double> hermitian_eigenvalues_embedding(const CMat& h, int d) {
  const int n = 2 * d;
  std::vector<double> A(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      A[i * n + j] = h[i * d + j].real();
      A[(i + d) * n + (j + d)] = h[i * d + j].real();
      A[i * n + (j + d)] = -h[i * d + j].imag();
      A[(i + d) * n + j] = h[i * d + j].imag();
    }
  std::vector<double> evals;
  jacobi_eigensymm(A, n, evals, nullptr, 1e-13);
  std::vector<double> out;
  for (int i = 0; i < n; i += 2) {
    // the pair must agree to numerical precision
    REQUIRE(std::fabs(evals[i] - evals[i + 1]) < 1e-9);
    out.push_back(evals[i]);
  }
  return out;
}

}  // namespace

TEST_CASE("irrep_generators: j=1/2 is the Pauli basis, j=0 is zero") {
  const IrrepGenerators half = irrep_generators(0.5);
  CHECK(half.dim == 2);
  const CMat* gens[3] = {&half.E1, &half.E2, &half.E3};
  for (int i = 0; i < 3; ++i) {
    const auto p = oracle::pauli(i + 1);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        CHECK(std::abs((*gens[i])[r * 2 + c] - p[r * 2 + c]) < 1e-15);
  }

  const IrrepGenerators zero = irrep_generators(0.0);
  CHECK(zero.dim == 1);
  CHECK(std::abs(zero.E1[0]) == 0.0);
  CHECK(std::abs(zero.E3[0]) == 0.0);

  CHECK_THROWS_AS((void)irrep_generators(256.0), CutoffExceededError);
  CHECK_THROWS((void)irrep_generators(0.7));
}

TEST_CASE("irrep invariants: skew-Hermitian, brackets, Casimir") {
  for (double j : {0.5, 1.0, 1.5, 2.0, 3.5, 7.0}) {
    const IrrepGenerators g = irrep_generators(j);
    const int d = g.dim;
    const CMat* E[3] = {&g.E1, &g.E2, &g.E3};

    for (int i = 0; i < 3; ++i)
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
          CHECK(std::abs((*E[i])[r * d + c] + std::conj((*E[i])[c * d + r])) <
                1e-12);

    // [E_i, E_j] = E_k cyclically
    for (int i = 0; i < 3; ++i) {
      const int jj = (i + 1) % 3, k = (i + 2) % 3;
      const CMat comm = cmat_sub(cmat_mul(*E[i], *E[jj], d),
                                 cmat_mul(*E[jj], *E[i], d));
      CHECK(cmat_dist(comm, *E[k]) < 1e-12 * d);
    }

    // Casimir
    CMat cas(static_cast<size_t>(d) * d, Complex(0, 0));
    for (int i = 0; i < 3; ++i) {
      const CMat sq = cmat_mul(*E[i], *E[i], d);
      for (size_t t = 0; t < cas.size(); ++t) cas[t] -= sq[t];
    }
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        const Complex expect = r == c ? Complex(j * (j + 1), 0) : Complex(0, 0);
        CHECK(std::abs(cas[r * d + c] - expect) < 1e-12 * d);
      }
  }
}

TEST_CASE("laplacian_matrix: Casimir at the bi-invariant point, j=1/2 cases") {
  for (double j : {0.5, 1.0, 2.5}) {
    const IrrepGenerators g = irrep_generators(j);
    const CMat L = laplacian_matrix(g, MetricSpec::from_params(1, 1, 1));
    for (int r = 0; r < g.dim; ++r)
      for (int c = 0; c < g.dim; ++c) {
        const Complex expect =
            r == c ? Complex(j * (j + 1), 0) : Complex(0, 0);
        CHECK(std::abs(L[r * g.dim + c] - expect) < 1e-13 * g.dim);
      }
  }

  // j=1/2, params (1,1,a): (2 + a^-2)/4 with multiplicity 2
  const IrrepGenerators half = irrep_generators(0.5);
  for (double a : {1.0, 2.0, 5.0}) {
    const CMat L = laplacian_matrix(half, MetricSpec::from_params(1, 1, a));
    const double expect = (2.0 + 1.0 / (a * a)) / 4.0;
    CHECK(std::abs(L[0] - Complex(expect, 0)) < 1e-14);
    CHECK(std::abs(L[3] - Complex(expect, 0)) < 1e-14);
    CHECK(std::abs(L[1]) < 1e-15);
  }

  // hypoelliptic sub-Laplacian at (1,1,inf), j=1/2: eigenvalue 1/2, mult 2
  const CMat Ls =
      laplacian_matrix(half, MetricSpec::from_params(1, 1, kInf));
  CHECK(std::abs(Ls[0] - Complex(0.5, 0)) < 1e-15);
  CHECK(std::abs(Ls[3] - Complex(0.5, 0)) < 1e-15);
}

TEST_CASE("spectrum_table at the bi-invariant point is the Casimir table") {
  const SpectrumTable t = spectrum_table(MetricSpec::from_params(1, 1, 1), 5.0);
  REQUIRE(t.entries.size() == 11);  // j = 0, 1/2, ..., 5
  int idx = 0;
  for (double j = 0; j <= 5.0; j += 0.5, ++idx) {
    CHECK(std::fabs(t.entries[idx].first - j * (j + 1)) < 1e-10);
    const long long dim = static_cast<long long>(2 * j + 1);
    CHECK(t.entries[idx].second == dim * dim);
  }
  CHECK(t.entries[0].first == 0.0);
  CHECK(t.entries[0].second == 1);
  // lambda1 = 3/4 with multiplicity 4
  CHECK(t.lambda1() == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("spectrum_table: frozen Berger gap and dimension counts") {
  const SpectrumTable t = spectrum_table(MetricSpec::from_params(1, 1, 2), 3.0);
  CHECK(t.lambda1() == doctest::Approx(0.5625).epsilon(1e-12));

  const SpectrumTable t1 = spectrum_table(MetricSpec::from_params(1, 1, 1), 1.0);
  CHECK(t1.total_multiplicity() == 14);  // 1 + 4 + 9
}

TEST_CASE("per-irrep eigenvalues agree with the Hermitian-embedding solver") {
  Xoshiro256pp rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    double a[3];
    for (double& v : a) v = 0.2 + 3 * rng.uniform01();
    std::sort(a, a + 3);
    const MetricSpec m = MetricSpec::from_params(a[0], a[1], a[2]);
    const double j = 0.5 * (1 + static_cast<int>(rng.uniform01() * 6));

    // fast path: assemble the full table at j and strip lower spins
    const SpectrumTable t = spectrum_table(m, j);
    std::vector<std::pair<double, long long>> all;
    for (const auto& e : t.entries) all.push_back(e);

    // reference: complex Laplacian through the real-symmetric embedding
    const IrrepGenerators g = irrep_generators(j);
    const CMat L = laplacian_matrix(g, m);
    const auto ref = hermitian_eigenvalues_embedding(L, g.dim);

    // every reference eigenvalue appears in the merged table
    for (double lam : ref) {
      bool found = false;
      for (const auto& [tl, mult] : all)
        if (std::fabs(tl - lam) < 1e-8) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("lambda1_exact: frozen values and scaling homogeneity") {
  CHECK(lambda1_exact(MetricSpec::from_params(1, 1, 1)) == 0.75);
  CHECK(lambda1_exact(MetricSpec::from_params(1, 1, 10)) ==
        doctest::Approx(0.5025).epsilon(1e-15));
  CHECK_THROWS_AS((void)lambda1_exact(MetricSpec::from_params(1, 1, kInf)),
                  SubRiemannianUnsupportedError);

  Xoshiro256pp rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    double a[3];
    for (double& v : a) v = 0.1 + 3 * rng.uniform01();
    std::sort(a, a + 3);
    const MetricSpec m = MetricSpec::from_params(a[0], a[1], a[2]);
    const double c = 0.5 + 2 * rng.uniform01();
    CHECK(lambda1_exact(scale(m, c)) ==
          doctest::Approx(lambda1_exact(m) / (c * c)).epsilon(1e-12));
  }
}

TEST_CASE("spectral lambda1 equals the closed form across random parameters") {
  Xoshiro256pp rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    double a[3];
    for (double& v : a) v = 0.05 + 2 * rng.uniform01();
    std::sort(a, a + 3);
    const MetricSpec m = MetricSpec::from_params(a[0], a[1], a[2]);
    const SpectrumTable t = spectrum_table(m, 2.0);
    const double exact = lambda1_exact(m);
    CHECK(std::fabs(t.lambda1() - exact) <= 1e-9 * std::max(1.0, exact));
  }
}

TEST_CASE("weyl_count: gap zone, frozen counts, monotonicity, truncation") {
  const SpectrumTable t = spectrum_table(MetricSpec::from_params(1, 1, 1), 8.0);
  // below the gap only the constant counts
  CHECK(weyl_count(t, 0.5) == 1);
  CHECK(weyl_count(t, 0.7) == 1);
  // past the j=1/2 level 3/4 (multiplicity 4): the spec example lists 1 at
  // s=1, but the Casimir oracle gives 1+4 (3/4 < 1); the oracle wins
  CHECK(weyl_count(t, 0.8) == 5);
  CHECK(weyl_count(t, 1.0) == 5);
  CHECK(weyl_count(t, 2.0001) == 14);

  long long prev = 0;
  for (double s = 0.1; s < weyl_safe_threshold(t); s *= 1.5) {
    const long long c = weyl_count(t, s);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK_THROWS_AS((void)weyl_count(t, weyl_safe_threshold(t) * 1.01),
                  CountTruncatedError);
}

TEST_CASE("weyl_model: branches, frozen value, breakpoint continuity") {
  const MetricSpec m111 = MetricSpec::from_params(1, 1, 1);
  CHECK(weyl_model(m111, 0.5) == 1.0);
  CHECK(weyl_model(m111, 4.0) == 8.0);  // t^(3/2) branch

  Xoshiro256pp rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    double a[3];
    for (double& v : a) v = 0.1 + 2 * rng.uniform01();
    std::sort(a, a + 3);
    const MetricSpec m = MetricSpec::from_params(a[0], a[1], a[2]);
    const double t1 = 1 / (a[1] * a[1]);
    const double t2 = 1 / (a[0] * a[0]);
    const double t3 = (a[2] * a[2]) / std::pow(a[0] * a[1], 2);
    for (double b : {t1, t2, t3}) {
      const double lo = weyl_model(m, b * (1 - 1e-12));
      const double hi = weyl_model(m, b * (1 + 1e-12));
      CHECK(std::fabs(hi - lo) <= 1e-9 * hi);
    }
    // piecewise monotone
    double prev = 0;
    for (double t = 0.01; t < 100; t *= 1.3) {
      const double v = weyl_model(m, t);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("heat_trace: direct-summation oracle and the dominated tail") {
  const SpectrumTable t = spectrum_table(MetricSpec::from_params(1, 1, 1), 30.0);
  for (double time : {0.5, 1.0, 2.0}) {
    const double oracle_sum = oracle::casimir_heat_trace(time, 30.0);
    CHECK(heat_trace(t, time) == doctest::Approx(oracle_sum).epsilon(1e-12));
  }

  // time -> infinity: 1 + mult1 e^{-50} + o()
  const double lam1 = t.lambda1();
  const double big = 50.0 / lam1;
  CHECK(std::fabs(heat_trace(t, big) - (1.0 + 4.0 * std::exp(-50.0))) < 1e-9);

  // strictly decreasing
  double prev = kInf;
  for (double time = 0.3; time < 40; time *= 1.7) {
    const double v = heat_trace(t, time);
    CHECK(v < prev);
    prev = v;
  }

  CHECK_THROWS_AS((void)heat_trace(t, 1e-4), TraceTruncatedError);
  CHECK(truncation_bound(t, heat_trace_safe_time(t) * 1.01) <= 1e-8);
}

TEST_CASE("ergodicity rate: L2 distance to equilibrium decays like the gap") {
  const MetricSpec m = MetricSpec::from_params(1, 1, 1);
  const SpectrumTable t = spectrum_table(m, 12.0);
  const double lam1 = t.lambda1();
  const double diam_sq = std::pow(2 * 3.14159265358979324, 2);

  // the centered sum agrees with heat_trace(2t) - 1 where the subtraction is
  // still representable
  for (double time : {0.5, 1.0, 4.0}) {
    CHECK(heat_trace_centered(t, 2 * time) ==
          doctest::Approx(heat_trace(t, 2 * time) - 1.0).epsilon(1e-10));
  }

  // ||p_t - 1||_2^2 = heat_trace_centered(2t), sandwiched by e^{-2 lambda1 t}
  for (double time = diam_sq; time <= 10 * diam_sq; time *= 1.5) {
    const double l2sq = heat_trace_centered(t, 2 * time);
    const double rate = std::exp(-2 * lam1 * time);
    CHECK(l2sq >= rate * 0.99);
    CHECK(l2sq <= rate * 10.0);
  }
}

TEST_CASE("sub-Laplacian spectra are monotone limits of truncated ones") {
  const MetricSpec sub = MetricSpec::from_params(0.5, 1, kInf);
  const SpectrumTable limit = spectrum_table(sub, 3.0);
  std::vector<double> prev;
  for (double inv_eps : {10.0, 100.0, 1000.0, 10000.0}) {
    const MetricSpec m = MetricSpec::from_params(0.5, 1, inv_eps);
    const SpectrumTable t = spectrum_table(m, 3.0);
    REQUIRE(t.entries.size() >= limit.entries.size());
    std::vector<double> flat;
    for (const auto& [lam, mult] : t.entries)
      for (long long c = 0; c < mult; ++c) flat.push_back(lam);
    if (!prev.empty())
      for (size_t i = 0; i < std::min(prev.size(), flat.size()); ++i)
        CHECK(flat[i] <= prev[i] + 1e-12);  // decreasing in 1/eps
    prev = flat;
  }
  // extrapolated agreement at inv_eps = 1e4: within 1e-9 against a3 = inf
  const MetricSpec fine = MetricSpec::from_params(0.5, 1, 1e4);
  const SpectrumTable t_fine = spectrum_table(fine, 3.0);
  std::vector<double> limit_flat, fine_flat;
  for (const auto& [lam, mult] : limit.entries)
    for (long long c = 0; c < mult; ++c) limit_flat.push_back(lam);
  for (const auto& [lam, mult] : t_fine.entries)
    for (long long c = 0; c < mult; ++c) fine_flat.push_back(lam);
  for (size_t i = 0; i < limit_flat.size(); ++i) {
    // per-irrep eigenvalues differ by at most (eps^2) * max m^2 <= 1e-8 * 36
    CHECK(std::fabs(fine_flat[i] - limit_flat[i]) < 1e-6);
    CHECK(fine_flat[i] >= limit_flat[i] - 1e-12);
  }
}

TEST_CASE("adaptive j_max: bound rule and the hard cap") {
  const MetricSpec m = MetricSpec::from_params(1, 1, 1);
  const double j = adaptive_j_max(m, 0.5);
  // smallest j with j^2/4 >= 100
  CHECK(j == 20.0);
  CHECK(irrep_lambda_lower_bound(m, j) >= 100.0);
  CHECK(irrep_lambda_lower_bound(m, j - 0.5) < 100.0);

  const MetricSpec hard = MetricSpec::from_params(0.05, 1, 20);
  CHECK(adaptive_j_max(hard, 1e-6) == 255.5);

  const MetricSpec sub = MetricSpec::from_params(1, 1, kInf);
  CHECK(irrep_lambda_lower_bound(sub, 6.0) == 6.0);
}
