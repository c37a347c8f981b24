#include "cspt/symmetry.hpp"

#include <cmath>
#include <numbers>

#include "cspt/linalg.hpp"

namespace cspt::sym {

namespace {

constexpr cx kI{0.0, 1.0};

ComplexTensor make_sx() {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexTensor t({3, 3});
  t.at({0, 1}) = r;
  t.at({1, 0}) = r;
  t.at({1, 2}) = r;
  t.at({2, 1}) = r;
  return t;
}

ComplexTensor make_sy() {
  const double r = 1.0 / std::numbers::sqrt2;
  ComplexTensor t({3, 3});
  t.at({0, 1}) = -kI * r;
  t.at({1, 0}) = kI * r;
  t.at({1, 2}) = -kI * r;
  t.at({2, 1}) = kI * r;
  return t;
}

ComplexTensor make_sz() {
  ComplexTensor t({3, 3});
  t.at({0, 0}) = 1.0;
  t.at({2, 2}) = -1.0;
  return t;
}

ComplexTensor pauli(char which) {
  ComplexTensor t({2, 2});
  switch (which) {
    case 'x':
      t.at({0, 1}) = 1.0;
      t.at({1, 0}) = 1.0;
      break;
    case 'y':
      t.at({0, 1}) = -kI;
      t.at({1, 0}) = kI;
      break;
    case 'z':
      t.at({0, 0}) = 1.0;
      t.at({1, 1}) = -1.0;
      break;
    default:
      t.at({0, 0}) = 1.0;
      t.at({1, 1}) = 1.0;
  }
  return t;
}

// Site tensor (3, 2, 2) from three 2x2 blocks in the Cartesian physical basis.
ComplexTensor stack_blocks(const ComplexTensor& ax, const ComplexTensor& ay,
                           const ComplexTensor& az) {
  ComplexTensor t({3, 2, 2});
  for (i64 a = 0; a < 2; ++a)
    for (i64 b = 0; b < 2; ++b) {
      t.at({0, a, b}) = ax.at({a, b});
      t.at({1, a, b}) = ay.at({a, b});
      t.at({2, a, b}) = az.at({a, b});
    }
  return t;
}

}  // namespace

const Spin1Matrices& spin1_matrices() {
  static const Spin1Matrices m = [] {
    Spin1Matrices s{make_sx(), make_sy(), make_sz(), {}};
    s.sz2 = matmul(s.sz, s.sz);
    return s;
  }();
  return m;
}

SymmetryAction group_action(const std::string& label) {
  const auto& s = spin1_matrices();
  const cx minus_i_pi = -kI * std::numbers::pi;
  if (label == "e") return {label, ComplexTensor::identity(3), false};
  if (label == "gx") return {label, matrix_exponential(s.sx, minus_i_pi), false};
  if (label == "gz") return {label, matrix_exponential(s.sz, minus_i_pi), false};
  if (label == "gy") {
    // g_y = g_x g_z exactly, not an independent exponential.
    return {label, matmul(group_action("gx").u, group_action("gz").u), false};
  }
  if (label == "T") return {label, matrix_exponential(s.sy, minus_i_pi), true};
  throw Error("unknown group element: " + label);
}

SymmetryAction blocked_action(const SymmetryAction& g, int k) {
  return {g.label, kron_power(g.u, k), g.antiunitary};
}

const ComplexTensor& cartesian_to_sz() {
  static const ComplexTensor u = [] {
    // |x> = (|-1> - |+1>)/sqrt2, |y> = i(|+1> + |-1>)/sqrt2, |z> = |0>.
    const double r = 1.0 / std::numbers::sqrt2;
    ComplexTensor t({3, 3});
    t.at({0, 0}) = -r;
    t.at({0, 1}) = kI * r;
    t.at({1, 2}) = 1.0;
    t.at({2, 0}) = r;
    t.at({2, 1}) = kI * r;
    return t;
  }();
  return u;
}

namespace {

ComplexTensor to_sz_basis(const ComplexTensor& cart) {
  // A_sz^m = sum_a U_{ma} A_cart^a.
  return contract(cartesian_to_sz(), cart, {{1, 0}});
}

}  // namespace

CatalogState catalog_state(const std::string& name) {
  const ComplexTensor x = pauli('x');
  const ComplexTensor y = pauli('y');
  const ComplexTensor z = pauli('z');

  CatalogState st;
  st.name = name;
  if (name == "psi0" || name == "aklt") {
    st.tensor_cartesian = stack_blocks(x, y, z);
    st.expected_indices = {-1, -1, -1, -1};
  } else if (name == "psix") {
    st.tensor_cartesian = stack_blocks(kI * x, y, z);
    st.expected_indices = {-1, +1, -1, +1};
  } else if (name == "psiy") {
    st.tensor_cartesian = stack_blocks(x, kI * y, z);
    st.expected_indices = {-1, +1, +1, +1};
  } else if (name == "psiz") {
    st.tensor_cartesian = stack_blocks(x, y, kI * z);
    st.expected_indices = {-1, +1, +1, -1};
  } else if (name == "trivial") {
    // Product state |m=0> = |z>, bond dimension 1.
    ComplexTensor cart({3, 1, 1});
    cart.at({2, 0, 0}) = 1.0;
    st.tensor_cartesian = cart;
    st.expected_indices = {+1, +1, +1, +1};
  } else {
    throw Error("unknown catalog state: " + name);
  }
  st.tensor_sz = to_sz_basis(st.tensor_cartesian);
  return st;
}

}  // namespace cspt::sym
