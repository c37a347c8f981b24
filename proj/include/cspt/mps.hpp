#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cspt/linalg.hpp"
#include "cspt/local_term.hpp"
#include "cspt/tensor.hpp"

namespace cspt::mps {

/// Infinite MPS with a k-site unit cell in Gamma-Lambda canonical form.
/// Site tensors gammas[i] have shape (d, D_{i-1}, D_i); lambdas[i] holds the
/// Schmidt values on the bond to the right of site i (bond k-1 closes the
/// cell). Lambda vectors are strictly positive, descending, sum of squares 1.
struct UnitCellMPS {
  int k = 0;
  i64 d = 0;
  std::vector<ComplexTensor> gammas;
  std::vector<std::vector<double>> lambdas;
  i64 D = 0;  // largest bond dimension present

  i64 bond_dim(int bond) const;
  int bond_index(int bond) const;  // periodic wrap
  /// B-form site tensor Gamma_i * diag(lambda_i).
  ComplexTensor b_tensor(int site) const;
  /// A-form site tensor diag(lambda_{i-1}) * Gamma_i.
  ComplexTensor a_tensor(int site) const;
  void refresh_max_bond();
};

/// Max deviation of the one-sided isometry conditions over all sites.
double canonical_residual(const UnitCellMPS& s);

/// Full gauge fixing into canonical Gamma-Lambda form. Schmidt values below
/// 1e-14 (relative to the largest on the bond) are purged.
UnitCellMPS canonicalize(const UnitCellMPS& s);

/// Canonical k-site cell representing the translation-invariant state of a
/// single site tensor A (d, D, D). Throws NonInjectiveError when the
/// single-site transfer matrix has a degenerate dominant eigenvalue.
UnitCellMPS from_tensor(const ComplexTensor& a, int k);

/// Deterministically seeded random canonical state.
UnitCellMPS random_mps(i64 d, i64 bond, int k, std::uint64_t seed);

/// Squared Schmidt values (probability weights) across a bond, descending.
std::vector<double> entanglement_spectrum(const UnitCellMPS& s, int bond);

struct MixedFixedPoints {
  ComplexTensor sigma_l;  // (D_right x D_left) left eigen-tensor, unit Frobenius
  ComplexTensor sigma_r;  // (D_right x D_left) right eigen-tensor, unit Frobenius
  cx overlap_rate;        // dominant eigenvalue of the mixed cell transfer
  GapReport gap;          // degenerate dominance is reported, not thrown
};

/// Dominant fixed points of the unit-cell transfer matrix built from
/// conj(left) and right.
MixedFixedPoints mixed_transfer_fixed_points(const UnitCellMPS& left,
                                             const UnitCellMPS& right);

/// Biorthogonal expectation density <L|op|R> / <L|R>, normalized so the
/// identity measures 1 and averaged over the k placements in the cell.
cx measure_local(const UnitCellMPS& left, const UnitCellMPS& right,
                 const LocalTerm& op);

struct FiniteMPSVector {
  int n = 0;
  std::vector<cx> amplitudes;  // dim d^n, unit 2-norm
};

/// Periodic trace closure of n_cells repetitions of the cell
/// (n_cells * k <= 12 sites).
FiniteMPSVector to_finite_vector(const UnitCellMPS& s, int n_cells);

/// Binary serialization with a versioned header; round-trips bit-exactly.
void save_mps(const UnitCellMPS& s, const std::string& path);
UnitCellMPS load_mps(const std::string& path);

/// Split a window tensor theta (D_left, d^m, D_right), already bracketed by
/// canonical boundary bonds, back into m Vidal site tensors via successive
/// SVDs truncated to d_max with the given relative weight floor. lambdas has
/// m-1 interior bond vectors. Schmidt values below 1e-14 relative are always
/// purged; throws StateCollapseError if a bond loses all weight.
struct WindowSplit {
  std::vector<ComplexTensor> gammas;
  std::vector<std::vector<double>> lambdas;
  double discarded_weight = 0;  // max over interior bonds
};
WindowSplit split_window(const ComplexTensor& theta,
                         std::span<const double> lambda_left,
                         std::span<const double> lambda_right, int m, i64 d,
                         i64 d_max, double weight_floor);

/// Multiply tensor entries by weights along one axis (bond-weight helper).
ComplexTensor scale_axis(const ComplexTensor& t, int axis,
                         std::span<const double> w);
ComplexTensor scale_axis_inverse(const ComplexTensor& t, int axis,
                                 std::span<const double> w);

/// Product of `count` consecutive B-form site tensors starting at `first`
/// (periodic), grouped into one (d^count, D_left, D_right) tensor.
ComplexTensor cell_blob(const UnitCellMPS& s, int first, int count);

}  // namespace cspt::mps
