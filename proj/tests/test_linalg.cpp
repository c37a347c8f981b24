#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cspt/linalg.hpp"

using namespace cspt;

namespace {

ComplexTensor random_matrix(i64 r, i64 c, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexTensor t({r, c});
  for (i64 i = 0; i < t.size(); ++i) t[i] = cx{dist(rng), dist(rng)};
  return t;
}

// Random matrix of prescribed rank via a product of thin factors.
ComplexTensor random_rank_deficient(i64 n, i64 rank, unsigned seed) {
  const ComplexTensor a = random_matrix(n, rank, seed);
  const ComplexTensor b = random_matrix(rank, n, seed + 1000);
  return matmul(a, b);
}

double recon_error(const SvdResult& svd, const ComplexTensor& m) {
  ComplexTensor us = svd.u;
  for (i64 i = 0; i < us.extent(0); ++i)
    for (i64 j = 0; j < us.extent(1); ++j)
      us[i * us.extent(1) + j] *= svd.s[static_cast<size_t>(j)];
  return (matmul(us, svd.v) - m).norm();
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("svd of diag(3,2,1) truncated to two values") {
  ComplexTensor m({3, 3});
  m.at({0, 0}) = 3.0;
  m.at({1, 1}) = 2.0;
  m.at({2, 2}) = 1.0;
  const SvdResult svd = svd_truncate(m, 2, 0.0);
  REQUIRE(svd.s.size() == 2);
  CHECK(svd.s[0] == doctest::Approx(3.0));
  CHECK(svd.s[1] == doctest::Approx(2.0));
  CHECK(svd.discarded_weight == doctest::Approx(1.0 / 14.0));
}

TEST_CASE("svd of the identity keeps both unit values") {
  const SvdResult svd = svd_truncate(ComplexTensor::identity(2), 2, 0.0);
  REQUIRE(svd.s.size() == 2);
  CHECK(svd.s[0] == doctest::Approx(1.0));
  CHECK(svd.s[1] == doctest::Approx(1.0));
  CHECK(svd.discarded_weight == 0.0);
}

TEST_CASE("full-rank svd reconstructs a random 8x8 to 1e-12") {
  const ComplexTensor m = random_matrix(8, 8, 7);
  const SvdResult svd = svd_truncate(m, 8, 0.0);
  CHECK(recon_error(svd, m) < 1e-12);
}

TEST_CASE("svd rejects non-finite input") {
  ComplexTensor m({2, 2});
  m[0] = cx{std::nan(""), 0};
  CHECK_THROWS_AS(static_cast<void>(svd_truncate(m, 2, 0.0)), NumericError);
}

TEST_CASE("pseudo inverse of the identity") {
  const PseudoInverseResult inv = pseudo_inverse(ComplexTensor::identity(4), 1e-12);
  CHECK((inv.pinv - ComplexTensor::identity(4)).norm() < 1e-13);
  CHECK(inv.report.numerical_rank == 4);
}

TEST_CASE("pseudo inverse cutoff semantics on diag(1, 1e-20)") {
  ComplexTensor m({2, 2});
  m.at({0, 0}) = 1.0;
  m.at({1, 1}) = 1e-20;
  const PseudoInverseResult inv = pseudo_inverse(m, 1e-12);
  CHECK(inv.report.numerical_rank == 1);
  CHECK(std::abs(inv.pinv.at({0, 0})) == doctest::Approx(1.0));
  CHECK(std::abs(inv.pinv.at({1, 1})) == doctest::Approx(0.0));
}

TEST_CASE("pseudo inverse satisfies all four Penrose identities") {
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    const ComplexTensor m = random_rank_deficient(6, 3, seed);
    const ComplexTensor p = pseudo_inverse(m, 1e-10).pinv;
    const ComplexTensor mpm = matmul(matmul(m, p), m);
    const ComplexTensor pmp = matmul(matmul(p, m), p);
    const ComplexTensor mp = matmul(m, p);
    const ComplexTensor pm = matmul(p, m);
    CHECK((mpm - m).norm() < 1e-10);
    CHECK((pmp - p).norm() < 1e-10);
    CHECK((mp - mp.adjoint()).norm() < 1e-10);
    CHECK((pm - pm.adjoint()).norm() < 1e-10);
  }
}

TEST_CASE("pseudo inverse flags ambiguous conditioning and zero rank") {
  ComplexTensor m({2, 2});
  m.at({0, 0}) = 1.0;
  m.at({1, 1}) = 5e-10;  // within 10x of the 1e-10 cutoff
  const PseudoInverseResult inv = pseudo_inverse(m, 1e-10);
  CHECK(inv.report.conditioning_warning);

  ComplexTensor z({3, 3});
  CHECK_THROWS_AS(static_cast<void>(pseudo_inverse(z, 1e-10)), SingularMetricError);
}

TEST_CASE("matrix exponential basics") {
  const ComplexTensor m = random_matrix(4, 4, 17);
  CHECK((matrix_exponential(m, 0.0) - ComplexTensor::identity(4)).norm() < 1e-14);

  ComplexTensor sz({3, 3});
  sz.at({0, 0}) = 1.0;
  sz.at({2, 2}) = -1.0;
  const ComplexTensor u = matrix_exponential(sz, cx{0, -std::numbers::pi});
  CHECK(std::abs(u.at({0, 0}) - cx{-1, 0}) < 1e-12);
  CHECK(std::abs(u.at({1, 1}) - cx{1, 0}) < 1e-12);
  CHECK(std::abs(u.at({2, 2}) - cx{-1, 0}) < 1e-12);
}

TEST_CASE("exp(-i pi Sy) is the real pi-rotation and squares to identity") {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexTensor sy({3, 3});
  sy.at({0, 1}) = cx{0, -r};
  sy.at({1, 0}) = cx{0, r};
  sy.at({1, 2}) = cx{0, -r};
  sy.at({2, 1}) = cx{0, r};
  const ComplexTensor u = matrix_exponential(sy, cx{0, -std::numbers::pi});
  // Oracle: eigendecomposition route exp(-i pi Sy) = V exp(-i pi D) V^dag,
  // evaluated here against the known rotation matrix.
  ComplexTensor expect({3, 3});
  expect.at({0, 2}) = 1.0;
  expect.at({1, 1}) = -1.0;
  expect.at({2, 0}) = 1.0;
  CHECK((u - expect).norm() < 1e-12);
  CHECK((matmul(u, u) - ComplexTensor::identity(3)).norm() < 1e-12);
}

TEST_CASE("exponential semigroup property for commuting arguments") {
  const ComplexTensor m = random_matrix(5, 5, 23);
  const ComplexTensor a = matrix_exponential(m, cx{0.3, 0.1});
  const ComplexTensor b = matrix_exponential(m, cx{0.2, -0.4});
  const ComplexTensor ab = matrix_exponential(m, cx{0.5, -0.3});
  CHECK((matmul(a, b) - ab).norm() < 1e-10);
}

TEST_CASE("matrix exponential rejects non-square input") {
  CHECK_THROWS_AS(static_cast<void>(matrix_exponential(ComplexTensor({2, 3}), 1.0)),
                  DimensionError);
}

TEST_CASE("dominant eigenpair of diag(2,1)") {
  ComplexTensor m({2, 2});
  m.at({0, 0}) = 2.0;
  m.at({1, 1}) = 1.0;
  const EigenPair p = dominant_eigenpair(m, 1e-12, 1000);
  CHECK(std::abs(p.eigenvalue - cx{2, 0}) < 1e-10);
  CHECK(std::abs(p.eigenvector[0]) == doctest::Approx(1.0));
  CHECK(std::abs(p.eigenvector[1]) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(p.gap.dominance_ratio == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("dominant eigenpair flags a degenerate dominant pair") {
  ComplexTensor m({2, 2});
  m.at({0, 0}) = 1.0;
  m.at({1, 1}) = -1.0;
  const EigenPair p = dominant_eigenpair(m, 1e-12, 2000);
  CHECK(p.gap.degenerate_warning);
}

TEST_CASE("dominant eigenpair convergence error on a rotation") {
  // Complex conjugate pair of equal modulus, seed far from invariant: the
  // block iteration resolves it; a 1-step budget must throw instead.
  ComplexTensor rot({2, 2});
  rot.at({0, 1}) = -1.0;
  rot.at({1, 0}) = 1.0;
  CHECK_THROWS_AS(static_cast<void>(dominant_eigenpair(rot, 1e-14, 1)),
                  ConvergenceError);
}

}  // TEST_SUITE
