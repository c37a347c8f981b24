#pragma once

#include <string>

#include "cspt/mps.hpp"
#include "cspt/symmetry.hpp"
#include "cspt/tensor.hpp"

namespace cspt::spt {

/// One SPT index before and after Z2 rounding.
struct IndexValue {
  cx raw{0, 0};
  int rounded = 0;          // +1 / -1 / 0 when indeterminate
  bool determinate = false; // raw within 1e-4 of +-1 and expression scalar
  double distance = 1.0;    // |raw - rounded|
};

/// Block a canonical k-site cell into one injective translation-invariant
/// super-site tensor (d^k, D, D); the symmetry action on it is u(g)^{x k}.
ComplexTensor block_to_ti(const mps::UnitCellMPS& s);

struct UnitaryExtraction {
  cx alpha;         // dominant eigenvalue (1D representation), |alpha| ~ 1
  ComplexTensor r;  // unitary bond representation, phase-fixed to R^2 = I
  double dominance; // |lambda_2| / |lambda_1| of the mixed transfer
};

/// Bond representation R(g) from the mixed transfer matrix built from the
/// u(g)-rotated tensor and the original. Throws NotSymmetricError when the
/// dominant modulus is below 1 - 1e-6, DegenerateDominanceError on a
/// degenerate dominant eigenvalue.
UnitaryExtraction extract_unitary(const ComplexTensor& a,
                                  const sym::SymmetryAction& g);

struct AntiunitaryExtraction {
  cx alpha;
  ComplexTensor m;  // normalized so that M conj(M) = +-I
  cx mmbar;         // the +-1 scalar of M conj(M)
  double dominance;
};

AntiunitaryExtraction extract_antiunitary(const ComplexTensor& a,
                                          const sym::SymmetryAction& tr);

/// Scalar of R(gx)^{-1} R(gz)^{-1} R(gx) R(gz) rounded to +-1.
IndexValue omega_index(const ComplexTensor& rx, const ComplexTensor& rz);
/// Scalar of M conj(M).
IndexValue beta_index(const ComplexTensor& m);
/// Scalar of conj(R)^{-1} M^{-1} R M; invariant under R -> -R.
IndexValue gamma_index(const ComplexTensor& r, const ComplexTensor& m);

struct IndexReport {
  IndexValue omega, beta, gamma_gx, gamma_gz;
  double dominance_gx = 0, dominance_gz = 0, dominance_t = 0;
  cx alpha_gx{1, 0}, alpha_gz{1, 0}, alpha_t{1, 0};
  std::string failure;  // non-empty when extraction failed outright

  /// Determinacy of the classification indices (omega, gamma_gz, gamma_gx).
  bool determinate() const {
    return failure.empty() && omega.determinate && gamma_gz.determinate &&
           gamma_gx.determinate;
  }
};

/// Full pipeline: block, extract R(gx), R(gz), M, compute all four indices.
IndexReport extract_indices(const mps::UnitCellMPS& s);

/// Phase table lookup on the (omega, gamma_gz, gamma_gx) triples of the two
/// sides: Trivial, Haldane, CSPT, or other-composite.
std::string classify_pair(const IndexReport& left, const IndexReport& right);

/// Relative split (p1 - p2) / p1 of the two leading entanglement weights.
double leading_doublet_split(const mps::UnitCellMPS& s, int bond = -1);

}  // namespace cspt::spt
