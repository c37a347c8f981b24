#pragma once

#include <complex>
#include <cstdint>
#include <span>

namespace cspt::kernels {

using cx = std::complex<double>;
using i64 = std::int64_t;

// Dense row-major complex matrix product c = a * b with a: m x k, b: k x n.
// The OpenMP variant parallelizes over output rows only; every element is
// accumulated in the same (fixed) k order as the serial variant, so the two
// are bit-identical for all inputs and any thread count.
void matmul(const cx* a, const cx* b, cx* c, i64 m, i64 k, i64 n);
void matmul_serial(const cx* a, const cx* b, cx* c, i64 m, i64 k, i64 n);

// Permuted copy: dst is the tensor src with axes reordered so that
// dst axis p corresponds to src axis perm[p]. shape is the SOURCE shape.
void permute_copy(const cx* src, cx* dst, std::span<const i64> shape,
                  std::span<const int> perm);
void permute_copy_serial(const cx* src, cx* dst, std::span<const i64> shape,
                         std::span<const int> perm);

}  // namespace cspt::kernels
