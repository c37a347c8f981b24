#include <doctest.h>

#include <cmath>

#include "cspt/linalg.hpp"
#include "cspt/symmetry.hpp"

using namespace cspt;

namespace {

// u(g) transported to the Cartesian physical basis; unitary elements
// transform as U^dag u U, the antiunitary one as U^dag u conj(U).
ComplexTensor action_in_cartesian(const sym::SymmetryAction& g) {
  const ComplexTensor& u = sym::cartesian_to_sz();
  const ComplexTensor right = g.antiunitary ? u.conjugated() : u;
  return matmul(matmul(u.adjoint(), g.u), right);
}

cx commutator_defect(const ComplexTensor& a, const ComplexTensor& b) {
  return (matmul(a, b) - matmul(b, a)).norm();
}

}  // namespace

TEST_SUITE("symmetry") {

TEST_CASE("spin-1 matrices in the Sz eigenbasis") {
  const auto& s = sym::spin1_matrices();
  CHECK(s.sz.at({0, 0}) == cx{1, 0});
  CHECK(s.sz.at({1, 1}) == cx{0, 0});
  CHECK(s.sz.at({2, 2}) == cx{-1, 0});
  CHECK(s.sz2.at({0, 0}) == cx{1, 0});
  CHECK(s.sz2.at({1, 1}) == cx{0, 0});
  CHECK(s.sz2.at({2, 2}) == cx{1, 0});

  // [Sa, Sb] = i eps_abc Sc
  const ComplexTensor comm_xy = matmul(s.sx, s.sy) - matmul(s.sy, s.sx);
  CHECK((comm_xy - s.sz * cx{0, 1}).norm() < 1e-12);
  const ComplexTensor comm_yz = matmul(s.sy, s.sz) - matmul(s.sz, s.sy);
  CHECK((comm_yz - s.sx * cx{0, 1}).norm() < 1e-12);

  // Casimir s(s+1) = 2
  const ComplexTensor casimir =
      matmul(s.sx, s.sx) + matmul(s.sy, s.sy) + matmul(s.sz, s.sz);
  CHECK((casimir - ComplexTensor::identity(3) * cx{2, 0}).norm() < 1e-12);
}

TEST_CASE("group actions: gz diagonal, identity, involutions") {
  const auto gz = sym::group_action("gz");
  ComplexTensor expect({3, 3});
  expect.at({0, 0}) = -1.0;
  expect.at({1, 1}) = 1.0;
  expect.at({2, 2}) = -1.0;
  CHECK((gz.u - expect).norm() < 1e-12);

  CHECK((sym::group_action("e").u - ComplexTensor::identity(3)).norm() == 0.0);

  const auto gx = sym::group_action("gx");
  CHECK((matmul(gx.u, gx.u) - ComplexTensor::identity(3)).norm() < 1e-12);
  CHECK_FALSE(gx.antiunitary);
  CHECK(sym::group_action("T").antiunitary);
  CHECK_THROWS_AS(static_cast<void>(sym::group_action("bogus")), Error);
}

TEST_CASE("each u(g) is unitary and gx gz = +-gy on the physical leg") {
  for (const char* label : {"e", "gx", "gy", "gz", "T"}) {
    const auto g = sym::group_action(label);
    CHECK((matmul(g.u.adjoint(), g.u) - ComplexTensor::identity(3)).norm() < 1e-12);
  }
  const ComplexTensor prod =
      matmul(sym::group_action("gx").u, sym::group_action("gz").u);
  const ComplexTensor gy = sym::group_action("gy").u;
  const double plus = (prod - gy).norm();
  const double minus = (prod + gy).norm();
  CHECK(std::min(plus, minus) < 1e-12);
}

TEST_CASE("catalog tensors and expected index rows") {
  const auto psi0 = sym::catalog_state("psi0");
  CHECK(psi0.expected_indices == std::array<int, 4>{-1, -1, -1, -1});
  CHECK(psi0.tensor_cartesian.at({0, 0, 1}) == cx{1, 0});   // X block
  CHECK(psi0.tensor_cartesian.at({1, 0, 1}) == cx{0, -1});  // Y block
  CHECK(psi0.tensor_cartesian.at({2, 0, 0}) == cx{1, 0});   // Z block

  const auto psix = sym::catalog_state("psix");
  CHECK(psix.expected_indices == std::array<int, 4>{-1, +1, -1, +1});
  CHECK(psix.tensor_cartesian.at({0, 0, 1}) == cx{0, 1});  // iX block

  const auto psiz = sym::catalog_state("psiz");
  CHECK(psiz.expected_indices == std::array<int, 4>{-1, +1, +1, -1});

  CHECK(sym::catalog_state("aklt").tensor_cartesian.data().size() ==
        psi0.tensor_cartesian.data().size());
  CHECK_THROWS_AS(static_cast<void>(sym::catalog_state("psiw")), Error);
}

TEST_CASE("basis change is unitary and maps |z> to |0>") {
  const ComplexTensor& u = sym::cartesian_to_sz();
  CHECK((matmul(u.adjoint(), u) - ComplexTensor::identity(3)).norm() < 1e-12);
  // |z> = |m=0>: column 2 must be (0, 1, 0).
  CHECK(std::abs(u.at({1, 2}) - cx{1, 0}) < 1e-15);
  CHECK(std::abs(u.at({0, 2})) < 1e-15);
  CHECK(std::abs(u.at({2, 2})) < 1e-15);
}

TEST_CASE("Cartesian tensors satisfy the bond symmetry relation by 2x2 algebra") {
  // sum_j u_cart(g)_ij A^j = R^{-1} A^i R with R(gx) = X, R(gz) = Z from the
  // state table (alpha = 1 for these generators on all four states).
  ComplexTensor x({2, 2}), z({2, 2});
  x.at({0, 1}) = 1.0;
  x.at({1, 0}) = 1.0;
  z.at({0, 0}) = 1.0;
  z.at({1, 1}) = -1.0;

  for (const char* name : {"psi0", "psix", "psiy", "psiz"}) {
    const auto st = sym::catalog_state(name);
    for (const char* label : {"gx", "gz"}) {
      const ComplexTensor ucart = action_in_cartesian(sym::group_action(label));
      const ComplexTensor& r = std::string(label) == "gx" ? x : z;
      const ComplexTensor rotated = contract(ucart, st.tensor_cartesian, {{1, 0}});
      for (i64 i = 0; i < 3; ++i)
        for (i64 a = 0; a < 2; ++a)
          for (i64 b = 0; b < 2; ++b) {
            cx rhs = 0;  // (R A^i R)_{ab}, using R^{-1} = R
            for (i64 p = 0; p < 2; ++p)
              for (i64 q = 0; q < 2; ++q)
                rhs += r.at({a, p}) * st.tensor_cartesian.at({i, p, q}) * r.at({q, b});
            CHECK(std::abs(rotated.at({i, a, b}) - rhs) < 1e-12);
          }
    }
  }
}

TEST_CASE("blocked action is the Kronecker power") {
  const auto gz = sym::group_action("gz");
  const auto blocked = sym::blocked_action(gz, 2);
  CHECK(blocked.u.extent(0) == 9);
  CHECK((blocked.u - kron(gz.u, gz.u)).norm() == 0.0);
  (void)commutator_defect;
}

}  // TEST_SUITE
