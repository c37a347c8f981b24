#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cspt/errors.hpp"

namespace cspt {

using cx = std::complex<double>;
using i64 = std::int64_t;

/// Dense complex tensor with a fixed row-major linearization (last axis
/// fastest). Rank 0 is a scalar holding one element.
class ComplexTensor {
 public:
  ComplexTensor() = default;
  explicit ComplexTensor(std::vector<i64> shape);
  ComplexTensor(std::vector<i64> shape, std::vector<cx> data);

  static ComplexTensor identity(i64 n);
  static ComplexTensor diagonal(std::span<const double> entries);
  static ComplexTensor scalar(cx value);

  const std::vector<i64>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  i64 extent(int axis) const { return shape_.at(static_cast<size_t>(axis)); }
  i64 size() const { return static_cast<i64>(data_.size()); }

  std::span<const cx> data() const { return data_; }
  std::span<cx> data() { return data_; }
  const cx* raw() const { return data_.data(); }
  cx* raw() { return data_.data(); }

  cx& operator[](i64 flat) { return data_[static_cast<size_t>(flat)]; }
  const cx& operator[](i64 flat) const { return data_[static_cast<size_t>(flat)]; }

  cx& at(std::initializer_list<i64> idx);
  const cx& at(std::initializer_list<i64> idx) const;
  i64 flat_index(std::span<const i64> idx) const;

  /// Same data, new shape; element count must match.
  ComplexTensor reshaped(std::vector<i64> shape) const;
  /// New tensor with axis p of the result = axis perm[p] of *this.
  ComplexTensor permuted(std::span<const int> perm) const;
  ComplexTensor conjugated() const;
  /// Rank-2 only: conjugate transpose.
  ComplexTensor adjoint() const;
  /// Rank-2 only: plain transpose.
  ComplexTensor transposed() const;

  ComplexTensor& operator+=(const ComplexTensor& other);
  ComplexTensor& operator-=(const ComplexTensor& other);
  ComplexTensor& operator*=(cx factor);
  friend ComplexTensor operator+(ComplexTensor a, const ComplexTensor& b) { return a += b; }
  friend ComplexTensor operator-(ComplexTensor a, const ComplexTensor& b) { return a -= b; }
  friend ComplexTensor operator*(ComplexTensor a, cx factor) { return a *= factor; }
  friend ComplexTensor operator*(cx factor, ComplexTensor a) { return a *= factor; }

  double norm() const;          // Frobenius
  double max_abs() const;
  bool is_finite() const;
  cx trace() const;             // rank-2 square only

  std::string shape_string() const;

 private:
  std::vector<i64> shape_;
  std::vector<cx> data_;
};

/// Sum over the paired axes of a and b. Result extents are the unpaired
/// extents of a followed by those of b, in their original order.
/// Throws DimensionError naming the offending pair on an extent mismatch.
ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       std::span<const std::pair<int, int>> axis_pairs);
ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       std::initializer_list<std::pair<int, int>> axis_pairs);

/// Rank-2 matrix product helper (equivalent to contract over (1,0)).
ComplexTensor matmul(const ComplexTensor& a, const ComplexTensor& b);

/// Kronecker product of two rank-2 tensors, row-major block convention.
ComplexTensor kron(const ComplexTensor& a, const ComplexTensor& b);

/// n-fold Kronecker power of a rank-2 tensor.
ComplexTensor kron_power(const ComplexTensor& a, int n);

}  // namespace cspt
