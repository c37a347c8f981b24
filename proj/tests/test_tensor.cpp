#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <random>

#include "cspt/kernels.hpp"
#include "cspt/linalg.hpp"
#include "cspt/tensor.hpp"

using namespace cspt;

namespace {

ComplexTensor pauli_x() {
  ComplexTensor t({2, 2});
  t.at({0, 1}) = 1.0;
  t.at({1, 0}) = 1.0;
  return t;
}

ComplexTensor pauli_y() {
  ComplexTensor t({2, 2});
  t.at({0, 1}) = cx{0, -1};
  t.at({1, 0}) = cx{0, 1};
  return t;
}

ComplexTensor pauli_z() {
  ComplexTensor t({2, 2});
  t.at({0, 0}) = 1.0;
  t.at({1, 1}) = -1.0;
  return t;
}

ComplexTensor random_tensor(std::vector<i64> shape, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ComplexTensor t(std::move(shape));
  for (i64 i = 0; i < t.size(); ++i) t[i] = cx{dist(rng), dist(rng)};
  return t;
}

}  // namespace

TEST_SUITE("tensor") {

TEST_CASE("identity contraction maps a vector to itself") {
  const ComplexTensor id = ComplexTensor::identity(2);
  ComplexTensor v({2});
  v[0] = cx{0.3, -1.2};
  v[1] = cx{2.0, 0.7};
  const ComplexTensor w = contract(id, v, {{1, 0}});
  REQUIRE(w.shape() == std::vector<i64>{2});
  CHECK((w - v).norm() == doctest::Approx(0.0));
}

TEST_CASE("X squared is the identity") {
  const ComplexTensor xx = contract(pauli_x(), pauli_x(), {{1, 0}});
  CHECK((xx - ComplexTensor::identity(2)).norm() < 1e-15);
}

TEST_CASE("AKLT transfer matrix has dominant eigenvalue 3") {
  // sum over {X, Y, Z} of A (x) conj(A), reshaped to 4x4.
  const ComplexTensor paulis[3] = {pauli_x(), pauli_y(), pauli_z()};
  ComplexTensor transfer({4, 4});
  for (const auto& a : paulis) {
    const ComplexTensor ac = a.conjugated();
    for (i64 i = 0; i < 2; ++i)
      for (i64 j = 0; j < 2; ++j)
        for (i64 p = 0; p < 2; ++p)
          for (i64 q = 0; q < 2; ++q)
            transfer[(i * 2 + p) * 4 + (j * 2 + q)] += a[i * 2 + j] * ac[p * 2 + q];
  }
  // Independent oracle: dense eigenvalues of the 4x4.
  const std::vector<cx> vals = dense_eigenvalues(transfer);
  double dominant = 0;
  for (const cx& v : vals) dominant = std::max(dominant, std::abs(v));
  CHECK(dominant == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("extent mismatch names the offending axis pair") {
  const ComplexTensor a({2, 3});
  const ComplexTensor b({2, 2});
  CHECK_THROWS_WITH_AS(static_cast<void>(contract(a, b, {{1, 0}})),
                       doctest::Contains("(1,0)"), DimensionError);
}

TEST_CASE("contract is bilinear on random tensors") {
  const ComplexTensor a = random_tensor({3, 4, 2}, 11);
  const ComplexTensor b = random_tensor({3, 4, 2}, 12);
  const ComplexTensor c = random_tensor({4, 5, 2}, 13);
  const cx alpha{0.7, -0.4};
  const ComplexTensor lhs =
      contract(a * alpha + b, c, {{1, 0}, {2, 2}});
  const ComplexTensor rhs =
      contract(a, c, {{1, 0}, {2, 2}}) * alpha + contract(b, c, {{1, 0}, {2, 2}});
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("reshape and permute preserve the element multiset") {
  const ComplexTensor t = random_tensor({2, 3, 4}, 21);
  static constexpr int perm[3] = {2, 0, 1};
  const ComplexTensor p = t.permuted(perm);
  CHECK(p.shape() == std::vector<i64>{4, 2, 3});
  auto sorted_abs = [](const ComplexTensor& x) {
    std::vector<double> v;
    for (i64 i = 0; i < x.size(); ++i) v.push_back(std::abs(x[i]));
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(sorted_abs(p) == sorted_abs(t));
  CHECK(sorted_abs(t.reshaped({6, 4})) == sorted_abs(t));
  // Round trip through the inverse permutation restores the tensor.
  static constexpr int inv[3] = {1, 2, 0};
  CHECK((p.permuted(inv) - t).norm() == 0.0);
}

TEST_CASE("parallel kernels match the serial reference bit for bit") {
  const ComplexTensor a = random_tensor({37, 53}, 31);
  const ComplexTensor b = random_tensor({53, 61}, 32);
  std::vector<cx> c_par(37 * 61), c_ser(37 * 61);
  kernels::matmul(a.raw(), b.raw(), c_par.data(), 37, 53, 61);
  kernels::matmul_serial(a.raw(), b.raw(), c_ser.data(), 37, 53, 61);
  CHECK(std::memcmp(c_par.data(), c_ser.data(), sizeof(cx) * c_par.size()) == 0);

  const ComplexTensor big = random_tensor({64, 33, 35}, 33);
  std::vector<cx> p_par(big.size()), p_ser(big.size());
  const std::vector<int> perm{2, 0, 1};
  kernels::permute_copy(big.raw(), p_par.data(), big.shape(), perm);
  kernels::permute_copy_serial(big.raw(), p_ser.data(), big.shape(), perm);
  CHECK(std::memcmp(p_par.data(), p_ser.data(), sizeof(cx) * p_par.size()) == 0);
}

TEST_CASE("kron matches explicit block structure") {
  const ComplexTensor k = kron(pauli_z(), pauli_x());
  CHECK(k.at({0, 1}) == cx{1, 0});
  CHECK(k.at({1, 0}) == cx{1, 0});
  CHECK(k.at({2, 3}) == cx{-1, 0});
  CHECK(k.at({3, 2}) == cx{-1, 0});
  CHECK(k.at({0, 0}) == cx{0, 0});
}

}  // TEST_SUITE
