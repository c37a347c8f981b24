#pragma once

#include <array>
#include <string>

#include "cspt/tensor.hpp"

namespace cspt::sym {

struct Spin1Matrices {
  ComplexTensor sx, sy, sz, sz2;  // 3x3 in the Sz eigenbasis {|+1>,|0>,|-1>}
};

/// Standard spin-1 operators in the Sz eigenbasis.
const Spin1Matrices& spin1_matrices();

/// Physical-leg action of a group element: u(g) = exp(-i pi s(g)) for the
/// dihedral elements, and the unitary part of time reversal for "T".
struct SymmetryAction {
  std::string label;   // e, gx, gy, gz, T
  ComplexTensor u;     // d x d on the physical leg (Sz basis for d = 3)
  bool antiunitary = false;
};

SymmetryAction group_action(const std::string& label);

/// Kronecker-power action on a k-site blocked physical leg.
SymmetryAction blocked_action(const SymmetryAction& g, int k);

/// Unitary taking Cartesian-basis coefficients to Sz-basis coefficients:
/// c_sz = U c_cart with |x>,|y>,|z> the standard spin-1 Cartesian states.
const ComplexTensor& cartesian_to_sz();

struct CatalogState {
  std::string name;
  ComplexTensor tensor_cartesian;          // (3, D, D), physical leg in {x,y,z}
  ComplexTensor tensor_sz;                 // (3, D, D), physical leg in Sz basis
  std::array<int, 4> expected_indices;     // (omega, beta, gamma_gx, gamma_gz)
};

/// Model states: psi0 (alias aklt), psix, psiy, psiz, trivial.
CatalogState catalog_state(const std::string& name);

}  // namespace cspt::sym
