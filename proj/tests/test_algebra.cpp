#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "su2geom/algebra.hpp"
#include "su2geom/errors.hpp"
#include "su2geom/rng.hpp"
#include "oracles.hpp"

using namespace su2;

namespace {

constexpr double kPi = 3.14159265358979323846;

GroupElement random_element(Xoshiro256pp& rng) {
  GaussianSource g(rng.next());
  return haar_sample(g);
}

AlgebraVector random_vector(Xoshiro256pp& rng, double scale = 1.0) {
  GaussianSource g(rng.next());
  return {scale * g.next(), scale * g.next(), scale * g.next()};
}

double elem_dist(const GroupElement& a, const GroupElement& b) {
  return std::sqrt((a.q0 - b.q0) * (a.q0 - b.q0) + (a.q1 - b.q1) * (a.q1 - b.q1) +
                   (a.q2 - b.q2) * (a.q2 - b.q2) + (a.q3 - b.q3) * (a.q3 - b.q3));
}

}  // namespace

TEST_CASE("multiply: identity, basis squares, basis products") {
  const GroupElement e = GroupElement::identity();
  const GroupElement i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};

  Xoshiro256pp rng(42);
  const GroupElement x = random_element(rng);
  CHECK(elem_dist(multiply(e, x), x) < 1e-15);

  // (2e1)^2 = -I and (2e1)(2e2) = 2e3: the Milnor identities scaled by 4 and 2
  const GroupElement ii = multiply(i, i);
  CHECK(ii.q0 == -1.0);
  CHECK(ii.q1 == 0.0);
  const GroupElement ij = multiply(i, j);
  CHECK(ij.q3 == 1.0);
  CHECK(ij.q0 == 0.0);
}

TEST_CASE("Milnor identities hold exactly for the Pauli basis matrices") {
  // e_i^2 = -(1/4) I, e_i e_j = (1/2) e_k, anticommutators vanish
  for (int i = 1; i <= 3; ++i) {
    const auto sq = oracle::mat_mul(oracle::pauli(i), oracle::pauli(i));
    const auto target = oracle::mat_scale(-0.25, oracle::identity2());
    CHECK(oracle::mat_dist(sq, target) < 1e-15);
  }
  for (int i = 1; i <= 3; ++i) {
    const int j = i % 3 + 1, k = j % 3 + 1;
    const auto prod = oracle::mat_mul(oracle::pauli(i), oracle::pauli(j));
    const auto half_ek = oracle::mat_scale(0.5, oracle::pauli(k));
    CHECK(oracle::mat_dist(prod, half_ek) < 1e-15);
    const auto anti = oracle::mat_add(
        oracle::mat_mul(oracle::pauli(i), oracle::pauli(j)),
        oracle::mat_mul(oracle::pauli(j), oracle::pauli(i)));
    CHECK(oracle::mat_dist(anti, {oracle::Cx(0), oracle::Cx(0), oracle::Cx(0),
                                  oracle::Cx(0)}) < 1e-15);
  }
}

TEST_CASE("multiply matches the 2x2 matrix product") {
  Xoshiro256pp rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupElement x = random_element(rng);
    const GroupElement y = random_element(rng);
    const auto lhs = oracle::to_matrix(multiply(x, y));
    const auto rhs = oracle::mat_mul(oracle::to_matrix(x), oracle::to_matrix(y));
    CHECK(oracle::mat_dist(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("associativity within 1e-12") {
  Xoshiro256pp rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupElement x = random_element(rng);
    const GroupElement y = random_element(rng);
    const GroupElement z = random_element(rng);
    CHECK(elem_dist(multiply(multiply(x, y), z), multiply(x, multiply(y, z))) <
          1e-12);
  }
}

TEST_CASE("unit norm preserved through 1e4 products") {
  Xoshiro256pp rng(11);
  GroupElement acc = GroupElement::identity();
  for (int s = 0; s < 10000; ++s) acc = multiply(acc, random_element(rng));
  CHECK(std::fabs(acc.norm() - 1.0) < 1e-9);
}

TEST_CASE("trace and unitarity via the matrix bridge") {
  Xoshiro256pp rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const GroupElement x = random_element(rng);
    const auto m = oracle::to_matrix(x);
    CHECK(std::fabs((m[0] + m[3]).real() - x.trace()) < 1e-14);
    CHECK(std::fabs((m[0] + m[3]).imag()) < 1e-14);
    CHECK(std::abs(oracle::det2(m) - oracle::Cx(1, 0)) < 1e-13);
  }
}

TEST_CASE("exp_map: zero, 2 pi e1, pi e1, series oracle") {
  const GroupElement z = exp_map({0, 0, 0});
  CHECK(elem_dist(z, GroupElement::identity()) == 0.0);

  // exp(2 pi e1) = -I
  const GroupElement m = exp_map({2 * kPi, 0, 0});
  CHECK(std::fabs(m.q0 + 1.0) < 1e-15);
  CHECK(std::fabs(m.q1) < 1e-15);

  // exp(pi e1) = 2e1 (frozen from the closed form; checked against the
  // truncated matrix exponential series)
  const GroupElement h = exp_map({kPi, 0, 0});
  CHECK(elem_dist(h, GroupElement{0, 1, 0, 0}) < 1e-15);
  const auto series = oracle::mat_exp_series(oracle::to_matrix(AlgebraVector{kPi, 0, 0}));
  CHECK(oracle::mat_dist(oracle::to_matrix(h), series) < 1e-12);
}

TEST_CASE("exp_map matches the series oracle on random vectors") {
  Xoshiro256pp rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const AlgebraVector v = random_vector(rng);
    const auto series = oracle::mat_exp_series(oracle::to_matrix(v));
    CHECK(oracle::mat_dist(oracle::to_matrix(exp_map(v)), series) < 1e-12);
  }
}

TEST_CASE("matrix form of algebra vectors satisfies A^2 = -det(A) I") {
  Xoshiro256pp rng(19);
  for (int trial = 0; trial < 1000; ++trial) {
    const AlgebraVector v = random_vector(rng, 2.0);
    const auto A = oracle::to_matrix(v);
    const auto A2 = oracle::mat_mul(A, A);
    const auto target = oracle::mat_scale(-oracle::det2(A), oracle::identity2());
    CHECK(oracle::mat_dist(A2, target) < 1e-12);
    // rho^2 = det A
    CHECK(std::fabs(v.rho() * v.rho() - oracle::det2(A).real()) < 1e-12);
  }
}

TEST_CASE("log_map: identity, frozen value, antipode error") {
  const AlgebraVector z = log_map(GroupElement::identity());
  CHECK(z.norm2() == 0.0);

  // log(cos .3, sin .3, 0, 0) = (0.6, 0, 0): inversion of the closed form
  const AlgebraVector v = log_map({std::cos(0.3), std::sin(0.3), 0, 0});
  CHECK(std::fabs(v.x1 - 0.6) < 1e-14);
  CHECK(std::fabs(v.x2) < 1e-14);

  CHECK_THROWS_AS((void)log_map(GroupElement{-1, 0, 0, 0}), AntipodeError);
  CHECK_THROWS_AS((void)log_map(GroupElement{-1 + 1e-13, 1e-7, 0, 0}.renormalized()),
                  AntipodeError);
}

TEST_CASE("exp/log round trip: 1e4 random vectors with rho < pi - 0.01") {
  Xoshiro256pp rng(23);
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    AlgebraVector v = random_vector(rng);
    // rescale rho into (0, pi - 0.01)
    const double target_rho = 1e-6 + (kPi - 0.01 - 1e-6) * rng.uniform01();
    const double r = v.rho();
    if (r == 0) continue;
    v = (target_rho / r) * v;
    const AlgebraVector w = log_map(exp_map(v));
    worst = std::max(worst, (w - v).norm2());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("adjoint: identity, rotation formula, bracket preservation") {
  Xoshiro256pp rng(29);
  const AlgebraVector v = random_vector(rng);
  const AlgebraVector id = adjoint(GroupElement::identity(), v);
  CHECK((id - v).norm2() < 1e-15);

  // e^{s e1} e2 e^{-s e1} = cos(s) e2 + sin(s) e3
  for (double s : {0.3, 1.1, 2.7, -0.9}) {
    const AlgebraVector r = adjoint(exp_axis(1, s), {0, 1, 0});
    CHECK(std::fabs(r.x1) < 1e-14);
    CHECK(std::fabs(r.x2 - std::cos(s)) < 1e-14);
    CHECK(std::fabs(r.x3 - std::sin(s)) < 1e-14);
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const GroupElement y = random_element(rng);
    const AlgebraVector u = random_vector(rng);
    const AlgebraVector w = random_vector(rng);
    const AlgebraVector lhs = adjoint(y, bracket(u, w));
    const AlgebraVector rhs = bracket(adjoint(y, u), adjoint(y, w));
    CHECK((lhs - rhs).norm2() < 1e-11);
  }
}

TEST_CASE("adjoint induces a rotation: orthogonal with det +1") {
  Xoshiro256pp rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupElement y = random_element(rng);
    Mat3 R{};
    for (int c = 0; c < 3; ++c) {
      AlgebraVector e{c == 0 ? 1.0 : 0.0, c == 1 ? 1.0 : 0.0, c == 2 ? 1.0 : 0.0};
      const AlgebraVector r = adjoint(y, e);
      R[0][c] = r.x1;
      R[1][c] = r.x2;
      R[2][c] = r.x3;
    }
    const Mat3 RtR = matmul(transpose(R), R);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::fabs(RtR[i][j] - (i == j ? 1.0 : 0.0)) < 1e-12);
    CHECK(std::fabs(det3(R) - 1.0) < 1e-12);
  }
}

TEST_CASE("bracket: cyclic relations, antisymmetry, matrix commutator oracle") {
  const AlgebraVector e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  CHECK((bracket(e1, e2) - e3).norm2() == 0.0);
  CHECK((bracket(e2, e3) - e1).norm2() == 0.0);
  CHECK((bracket(e3, e1) - e2).norm2() == 0.0);

  Xoshiro256pp rng(37);
  for (int trial = 0; trial < 1000; ++trial) {
    const AlgebraVector u = random_vector(rng);
    const AlgebraVector v = random_vector(rng);
    CHECK(bracket(u, u).norm2() < 1e-15);
    const auto lhs = oracle::to_matrix(bracket(u, v));
    const auto uv = oracle::mat_mul(oracle::to_matrix(u), oracle::to_matrix(v));
    const auto vu = oracle::mat_mul(oracle::to_matrix(v), oracle::to_matrix(u));
    const auto rhs = oracle::mat_add(uv, oracle::mat_scale(-1.0, vu));
    CHECK(oracle::mat_dist(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("commutator H: closed form, H(u,0)=I, H(pi,pi)=-I, h -> e3") {
  Xoshiro256pp rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    const double u = (rng.uniform01() - 0.5) * 2 * kPi;
    const double v = (rng.uniform01() - 0.5) * 2 * kPi;
    CHECK(elem_dist(commutator(u, v), commutator_closed_form(u, v)) < 1e-12);
  }
  for (double u : {0.0, 0.5, 1.7, 3.0})
    CHECK(elem_dist(commutator(u, 0.0), GroupElement::identity()) < 1e-15);

  const GroupElement hpp = commutator(kPi, kPi);
  CHECK(std::fabs(hpp.q0 + 1.0) < 1e-12);
  CHECK(std::fabs(hpp.q1) < 1e-12);

  const AlgebraVector h = commutator_direction(1e-3, 1e-3);
  CHECK((h - AlgebraVector{0, 0, 1}).norm2() < 1e-3);
  const AlgebraVector h0 = commutator_direction(0, 0);
  CHECK((h0 - AlgebraVector{0, 0, 1}).norm2() == 0.0);
}

TEST_CASE("coords of the second kind: degenerate cases and conjugation") {
  CHECK(elem_dist(coords_second_kind(0, 0, 0), GroupElement::identity()) == 0.0);
  for (double s : {0.4, -1.2, 2.9})
    CHECK(elem_dist(coords_second_kind(s, 0, 0), exp_axis(1, s)) < 1e-15);

  // exp(s e1) exp(t e2) exp(-s e1) = exp(t cos s e2 + t sin s e3)
  Xoshiro256pp rng(43);
  for (int trial = 0; trial < 1000; ++trial) {
    const double s = (rng.uniform01() - 0.5) * 6;
    const double t = (rng.uniform01() - 0.5) * 6;
    const GroupElement lhs =
        multiply(multiply(exp_axis(1, s), exp_axis(2, t)), exp_axis(1, -s));
    const GroupElement rhs =
        exp_map({0, t * std::cos(s), t * std::sin(s)});
    CHECK(elem_dist(lhs, rhs) < 1e-11);
  }
}

TEST_CASE("conjugation identity with a rotated Milnor basis") {
  // exp(s e1) exp(t (cos(th) e2 + sin(th) e3)) exp(-s e1)
  //   = exp(t (cos(th+s) e2 + sin(th+s) e3))
  Xoshiro256pp rng(47);
  for (int trial = 0; trial < 1000; ++trial) {
    const double s = (rng.uniform01() - 0.5) * 6;
    const double t = (rng.uniform01() - 0.5) * 6;
    const double th = (rng.uniform01() - 0.5) * 6;
    const GroupElement mid = exp_map({0, t * std::cos(th), t * std::sin(th)});
    const GroupElement lhs =
        multiply(multiply(exp_axis(1, s), mid), exp_axis(1, -s));
    const GroupElement rhs =
        exp_map({0, t * std::cos(th + s), t * std::sin(th + s)});
    CHECK(elem_dist(lhs, rhs) < 1e-11);
  }
}

TEST_CASE("second-kind coordinate identity from the rotated-basis corollary") {
  // e^{s e1} e^{t e2} e^{-s e1} in components:
  // cos(t/2) I + 2 sin(t/2)(cos s e2 + sin s e3)
  Xoshiro256pp rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    const double s = (rng.uniform01() - 0.5) * 6;
    const double t = (rng.uniform01() - 0.5) * 6;
    const GroupElement lhs =
        multiply(multiply(exp_axis(1, s), exp_axis(2, t)), exp_axis(1, -s));
    CHECK(std::fabs(lhs.q0 - std::cos(t / 2)) < 1e-12);
    CHECK(std::fabs(lhs.q1) < 1e-12);
    CHECK(std::fabs(lhs.q2 - std::sin(t / 2) * std::cos(s)) < 1e-12);
    CHECK(std::fabs(lhs.q3 - std::sin(t / 2) * std::sin(s)) < 1e-12);
  }
}
