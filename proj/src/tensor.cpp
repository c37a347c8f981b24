#include "cspt/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cspt/kernels.hpp"

namespace cspt {

namespace {

i64 checked_product(const std::vector<i64>& shape) {
  i64 n = 1;
  for (i64 e : shape) {
    if (e <= 0) throw DimensionError("tensor extents must be positive");
    n *= e;
  }
  return n;
}

}  // namespace

ComplexTensor::ComplexTensor(std::vector<i64> shape)
    : shape_(std::move(shape)), data_(static_cast<size_t>(checked_product(shape_))) {}

ComplexTensor::ComplexTensor(std::vector<i64> shape, std::vector<cx> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (checked_product(shape_) != static_cast<i64>(data_.size()))
    throw DimensionError("tensor data length does not match shape product");
}

ComplexTensor ComplexTensor::identity(i64 n) {
  ComplexTensor t({n, n});
  for (i64 i = 0; i < n; ++i) t[i * n + i] = 1.0;
  return t;
}

ComplexTensor ComplexTensor::diagonal(std::span<const double> entries) {
  const i64 n = static_cast<i64>(entries.size());
  ComplexTensor t({n, n});
  for (i64 i = 0; i < n; ++i) t[i * n + i] = entries[static_cast<size_t>(i)];
  return t;
}

ComplexTensor ComplexTensor::scalar(cx value) {
  ComplexTensor t;
  t.shape_ = {};
  t.data_ = {value};
  return t;
}

i64 ComplexTensor::flat_index(std::span<const i64> idx) const {
  if (static_cast<int>(idx.size()) != rank())
    throw DimensionError("index rank mismatch");
  i64 flat = 0;
  for (int ax = 0; ax < rank(); ++ax) {
    if (idx[ax] < 0 || idx[ax] >= shape_[static_cast<size_t>(ax)])
      throw DimensionError("index out of range on axis " + std::to_string(ax));
    flat = flat * shape_[static_cast<size_t>(ax)] + idx[ax];
  }
  return flat;
}

cx& ComplexTensor::at(std::initializer_list<i64> idx) {
  return data_[static_cast<size_t>(flat_index(std::vector<i64>(idx)))];
}

const cx& ComplexTensor::at(std::initializer_list<i64> idx) const {
  return data_[static_cast<size_t>(flat_index(std::vector<i64>(idx)))];
}

ComplexTensor ComplexTensor::reshaped(std::vector<i64> shape) const {
  if (checked_product(shape) != size())
    throw DimensionError("reshape changes element count: " + shape_string());
  ComplexTensor t;
  t.shape_ = std::move(shape);
  t.data_ = data_;
  return t;
}

ComplexTensor ComplexTensor::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != rank())
    throw DimensionError("permutation rank mismatch");
  std::vector<char> seen(static_cast<size_t>(rank()), 0);
  for (int p : perm) {
    if (p < 0 || p >= rank() || seen[static_cast<size_t>(p)])
      throw DimensionError("invalid axis permutation");
    seen[static_cast<size_t>(p)] = 1;
  }
  std::vector<i64> new_shape(perm.size());
  for (size_t i = 0; i < perm.size(); ++i)
    new_shape[i] = shape_[static_cast<size_t>(perm[i])];
  ComplexTensor out;
  out.shape_ = std::move(new_shape);
  out.data_.resize(data_.size());
  if (!data_.empty())
    kernels::permute_copy(data_.data(), out.data_.data(), shape_, perm);
  return out;
}

ComplexTensor ComplexTensor::conjugated() const {
  ComplexTensor t = *this;
  for (cx& v : t.data_) v = std::conj(v);
  return t;
}

ComplexTensor ComplexTensor::adjoint() const {
  if (rank() != 2) throw DimensionError("adjoint requires rank 2");
  static constexpr int swap[2] = {1, 0};
  return permuted(swap).conjugated();
}

ComplexTensor ComplexTensor::transposed() const {
  if (rank() != 2) throw DimensionError("transpose requires rank 2");
  static constexpr int swap[2] = {1, 0};
  return permuted(swap);
}

ComplexTensor& ComplexTensor::operator+=(const ComplexTensor& other) {
  if (shape_ != other.shape_)
    throw DimensionError("shape mismatch in tensor addition");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexTensor& ComplexTensor::operator-=(const ComplexTensor& other) {
  if (shape_ != other.shape_)
    throw DimensionError("shape mismatch in tensor subtraction");
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexTensor& ComplexTensor::operator*=(cx factor) {
  for (cx& v : data_) v *= factor;
  return *this;
}

double ComplexTensor::norm() const {
  double s = 0;
  for (const cx& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexTensor::max_abs() const {
  double s = 0;
  for (const cx& v : data_) s = std::max(s, std::abs(v));
  return s;
}

bool ComplexTensor::is_finite() const {
  for (const cx& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

cx ComplexTensor::trace() const {
  if (rank() != 2 || extent(0) != extent(1))
    throw DimensionError("trace requires a square rank-2 tensor");
  cx t = 0;
  const i64 n = extent(0);
  for (i64 i = 0; i < n; ++i) t += data_[static_cast<size_t>(i * n + i)];
  return t;
}

std::string ComplexTensor::shape_string() const {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < shape_.size(); ++i)
    os << shape_[i] << (i + 1 < shape_.size() ? "," : "");
  os << ")";
  return os.str();
}

ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       std::span<const std::pair<int, int>> axis_pairs) {
  std::vector<char> paired_a(static_cast<size_t>(a.rank()), 0);
  std::vector<char> paired_b(static_cast<size_t>(b.rank()), 0);
  for (const auto& [pa, pb] : axis_pairs) {
    if (pa < 0 || pa >= a.rank() || pb < 0 || pb >= b.rank())
      throw DimensionError("contraction axis out of range");
    if (paired_a[static_cast<size_t>(pa)] || paired_b[static_cast<size_t>(pb)])
      throw DimensionError("contraction axis repeated");
    if (a.extent(pa) != b.extent(pb))
      throw DimensionError("extent mismatch on axis pair (" +
                           std::to_string(pa) + "," + std::to_string(pb) +
                           "): " + std::to_string(a.extent(pa)) + " vs " +
                           std::to_string(b.extent(pb)));
    paired_a[static_cast<size_t>(pa)] = 1;
    paired_b[static_cast<size_t>(pb)] = 1;
  }

  std::vector<int> perm_a, perm_b;
  std::vector<i64> out_shape;
  i64 m = 1, k = 1, n = 1;
  for (int ax = 0; ax < a.rank(); ++ax)
    if (!paired_a[static_cast<size_t>(ax)]) {
      perm_a.push_back(ax);
      out_shape.push_back(a.extent(ax));
      m *= a.extent(ax);
    }
  for (const auto& [pa, pb] : axis_pairs) {
    perm_a.push_back(pa);
    k *= a.extent(pa);
  }
  for (const auto& [pa, pb] : axis_pairs) perm_b.push_back(pb);
  for (int ax = 0; ax < b.rank(); ++ax)
    if (!paired_b[static_cast<size_t>(ax)]) {
      perm_b.push_back(ax);
      out_shape.push_back(b.extent(ax));
      n *= b.extent(ax);
    }

  const ComplexTensor ap = a.permuted(perm_a);
  const ComplexTensor bp = b.permuted(perm_b);
  ComplexTensor out(out_shape.empty() ? std::vector<i64>{} : out_shape);
  if (out.rank() == 0) out = ComplexTensor::scalar(0.0);
  kernels::matmul(ap.raw(), bp.raw(), out.raw(), m, k, n);
  return out;
}

ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       std::initializer_list<std::pair<int, int>> axis_pairs) {
  return contract(a, b, std::span<const std::pair<int, int>>(axis_pairs.begin(), axis_pairs.size()));
}

ComplexTensor matmul(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.rank() != 2 || b.rank() != 2)
    throw DimensionError("matmul requires rank-2 tensors");
  return contract(a, b, {{1, 0}});
}

ComplexTensor kron(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.rank() != 2 || b.rank() != 2)
    throw DimensionError("kron requires rank-2 tensors");
  const i64 ar = a.extent(0), ac = a.extent(1);
  const i64 br = b.extent(0), bc = b.extent(1);
  ComplexTensor out({ar * br, ac * bc});
  for (i64 i = 0; i < ar; ++i)
    for (i64 j = 0; j < ac; ++j) {
      const cx f = a[i * ac + j];
      if (f == cx{}) continue;
      for (i64 p = 0; p < br; ++p)
        for (i64 q = 0; q < bc; ++q)
          out[(i * br + p) * (ac * bc) + (j * bc + q)] = f * b[p * bc + q];
    }
  return out;
}

ComplexTensor kron_power(const ComplexTensor& a, int n) {
  if (n < 1) throw DimensionError("kron_power requires n >= 1");
  ComplexTensor out = a;
  for (int i = 1; i < n; ++i) out = kron(out, a);
  return out;
}

}  // namespace cspt
