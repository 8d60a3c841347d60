#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "su2geom/metric.hpp"

namespace su2 {

using Complex = std::complex<double>;
using CMat = std::vector<Complex>;  // row-major square

// Generators of the spin-j irreducible representation, normalized so that
// E1,E2,E3 obey the Milnor relations [E1,E2]=E3 (cyclic), are skew-Hermitian,
// and -(E1^2+E2^2+E3^2) = j(j+1) I.  For j=1/2 these are the Pauli basis
// matrices themselves.
struct IrrepGenerators {
  double j = 0.0;
  int dim = 1;  // 2j+1
  CMat E1, E2, E3;
};

// Spin cap: 2j+1 <= 512.
constexpr int kMaxIrrepDim = 512;

IrrepGenerators irrep_generators(double j);

// -(sum over finite a_i) a_i^-2 E_i^2 : the Laplace-Beltrami operator
// restricted to the irrep (Riemannian), or the hypoelliptic sub-Laplacian
// when a3 = inf.  Hermitian positive semidefinite.
CMat laplacian_matrix(const IrrepGenerators& g, const MetricSpec& m);

// Sorted eigenvalues with Peter-Weyl multiplicities: each eigenvalue of the
// spin-j block enters with multiplicity 2j+1; numerically equal levels are
// merged within 1e-9.
struct SpectrumTable {
  std::array<double, 3> params{1, 1, 1};
  bool sub = false;
  std::vector<std::pair<double, long long>> entries;  // (lambda, multiplicity)
  double j_max = 0.0;

  double lambda1() const;  // smallest nonzero eigenvalue
  long long total_multiplicity() const;
};

// Lower bound on the smallest eigenvalue of the spin-j block; drives the
// truncation accounting.
double irrep_lambda_lower_bound(const MetricSpec& m, double j);

// Smallest j_max whose first omitted irrep has eigenvalue lower bound at
// least 50/t_min, capped at 2j+1 <= 512.
double adaptive_j_max(const MetricSpec& m, double t_min);

SpectrumTable spectrum_table(const MetricSpec& m, double j_max,
                             unsigned threads = 1);

// Lauret's closed form for the spectral gap:
// min{ (1/4)(a1^-2 + a2^-2 + a3^-2), a2^-2 + a3^-2 }.
double lambda1_exact(const MetricSpec& m);

// Bound on the heat-trace contribution of all irreps above the table cutoff.
double truncation_bound(const SpectrumTable& t, double time);

// Smallest time at which the truncation bound drops below 1e-8.
double heat_trace_safe_time(const SpectrumTable& t);

// sum of multiplicity * exp(-time * lambda); throws TraceTruncatedError when
// the tail bound at this time exceeds 1e-8.
double heat_trace(const SpectrumTable& t, double time);

// heat_trace(time) - 1 summed directly over the nonzero eigenvalues, so the
// L2 distance to equilibrium ||p_t - 1||^2 = heat_trace_centered(2t) stays
// representable long after the full trace rounds to 1.
double heat_trace_centered(const SpectrumTable& t, double time);

// Multiplicity-weighted count of eigenvalues strictly below s; throws
// CountTruncatedError when s reaches the omitted irreps.
long long weyl_count(const SpectrumTable& t, double s);

// Largest threshold safely countable from the table.
double weyl_safe_threshold(const SpectrumTable& t);

// The explicit four-branch counting model
//   1 | a2^2 t | a1^2 a2^2 t^2 | a1 a2 a3 t^(3/2)
// on [0,1/a2^2], (1/a2^2,1/a1^2], (1/a1^2, a3^2/(a1 a2)^2], and beyond.
double weyl_model(const MetricSpec& m, double t);

}  // namespace su2
