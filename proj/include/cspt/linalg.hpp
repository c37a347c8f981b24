#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cspt/tensor.hpp"

namespace cspt {

struct SvdResult {
  ComplexTensor u;          // m x r, orthonormal columns
  std::vector<double> s;    // r kept singular values, descending
  ComplexTensor v;          // r x n, orthonormal rows (u * diag(s) * v ~ input)
  double discarded_weight;  // sum of dropped s^2 over sum of all s^2
};

/// Rank-2 SVD keeping at most d_max singular values and dropping entries
/// below weight_floor * s_max. Throws NumericError on non-finite input.
SvdResult svd_truncate(const ComplexTensor& m, i64 d_max, double weight_floor);

struct ConditionReport {
  double sigma_max = 0;
  double sigma_min = 0;  // smallest retained singular value
  i64 numerical_rank = 0;
  bool conditioning_warning = false;  // retained sigma within 10x of the cutoff
};

struct SingularMetricError : Error {
  explicit SingularMetricError(const std::string& what, ConditionReport rep)
      : Error(what), report(rep) {}
  ConditionReport report;
};

struct PseudoInverseResult {
  ComplexTensor pinv;
  ConditionReport report;
};

/// Moore-Penrose inverse with singular values below rel_cutoff * sigma_max
/// treated as zero. Throws SingularMetricError when the numerical rank is 0.
PseudoInverseResult pseudo_inverse(const ComplexTensor& m, double rel_cutoff = 1e-10);

/// exp(scale * m) for square m, accurate to 1e-12 for ||scale * m|| <= 50.
ComplexTensor matrix_exponential(const ComplexTensor& m, cx scale);

struct GapReport {
  double dominance_ratio = 0;  // |lambda_2| / |lambda_1| estimate
  i64 iterations = 0;
  double residual = 0;
  bool degenerate_warning = false;  // ratio > 1 - 1e-6
};

using LinearMap = std::function<void(std::span<const cx>, std::span<cx>)>;

struct EigenPair {
  cx eigenvalue;
  std::vector<cx> eigenvector;  // unit norm, phase-fixed
  GapReport gap;
};

/// Dominant eigenpair of a linear map on C^n via two-vector subspace
/// iteration from a deterministic seed. Satisfies |op(v) - lambda v| <=
/// tol * |lambda| on return; throws ConvergenceError past max_iter.
EigenPair dominant_eigenpair(const LinearMap& op, i64 n, double tol = 1e-12,
                             i64 max_iter = 20000);

/// Dominant eigenpair of a dense square matrix (convenience overload).
EigenPair dominant_eigenpair(const ComplexTensor& m, double tol = 1e-12,
                             i64 max_iter = 20000);

/// Compact SVD without truncation policy; u * diag(s) * v = input.
SvdResult svd_compact(const ComplexTensor& m);

/// Solve a x = b for square a (partial-pivot LU), rank-2 tensors.
ComplexTensor solve(const ComplexTensor& a, const ComplexTensor& b);

/// Inverse of a square rank-2 tensor.
ComplexTensor inverse(const ComplexTensor& a);

/// Eigenvalues of a dense square matrix (unsorted).
std::vector<cx> dense_eigenvalues(const ComplexTensor& m);

}  // namespace cspt
