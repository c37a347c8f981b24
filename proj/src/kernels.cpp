#include "cspt/kernels.hpp"

#include <algorithm>
#include <array>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cspt::kernels {

namespace {

// Complex MAC written out in real arithmetic; avoids libgcc's __muldc3 call
// and vectorizes cleanly. Accumulation order over p is identical in the
// serial and parallel paths.
inline void row_product(const cx* arow, const cx* b, cx* crow, i64 k, i64 n) {
  auto* c2 = reinterpret_cast<double*>(crow);
  std::fill(c2, c2 + 2 * n, 0.0);
  for (i64 p = 0; p < k; ++p) {
    const double ar = arow[p].real();
    const double ai = arow[p].imag();
    if (ar == 0.0 && ai == 0.0) continue;
    const auto* b2 = reinterpret_cast<const double*>(b + p * n);
    for (i64 j = 0; j < n; ++j) {
      const double br = b2[2 * j];
      const double bi = b2[2 * j + 1];
      c2[2 * j] += ar * br - ai * bi;
      c2[2 * j + 1] += ar * bi + ai * br;
    }
  }
}

constexpr i64 kParallelFlopCutoff = 1 << 16;

}  // namespace

void matmul_serial(const cx* a, const cx* b, cx* c, i64 m, i64 k, i64 n) {
  for (i64 i = 0; i < m; ++i) row_product(a + i * k, b, c + i * n, k, n);
}

void matmul(const cx* a, const cx* b, cx* c, i64 m, i64 k, i64 n) {
  if (m * k * n < kParallelFlopCutoff || m == 1) {
    matmul_serial(a, b, c, m, k, n);
    return;
  }
#pragma omp parallel for schedule(static)
  for (i64 i = 0; i < m; ++i) row_product(a + i * k, b, c + i * n, k, n);
}

namespace {

struct PermutePlan {
  int rank;
  std::array<i64, 16> dst_shape;
  std::array<i64, 16> src_stride_in_dst_order;
  i64 total;
};

PermutePlan make_plan(std::span<const i64> shape, std::span<const int> perm) {
  PermutePlan plan{};
  plan.rank = static_cast<int>(shape.size());
  std::array<i64, 16> src_stride{};
  i64 s = 1;
  for (int ax = plan.rank - 1; ax >= 0; --ax) {
    src_stride[ax] = s;
    s *= shape[ax];
  }
  plan.total = s;
  for (int p = 0; p < plan.rank; ++p) {
    plan.dst_shape[p] = shape[perm[p]];
    plan.src_stride_in_dst_order[p] = src_stride[perm[p]];
  }
  return plan;
}

inline void permute_range(const cx* src, cx* dst, const PermutePlan& plan,
                          i64 begin, i64 end) {
  std::array<i64, 16> idx{};
  // Decompose `begin` into destination multi-index.
  i64 rem = begin;
  for (int p = plan.rank - 1; p >= 0; --p) {
    idx[p] = rem % plan.dst_shape[p];
    rem /= plan.dst_shape[p];
  }
  i64 src_off = 0;
  for (int p = 0; p < plan.rank; ++p)
    src_off += idx[p] * plan.src_stride_in_dst_order[p];
  const i64 inner = plan.rank - 1;
  for (i64 flat = begin; flat < end; ++flat) {
    dst[flat] = src[src_off];
    // Increment destination multi-index with carries.
    int p = static_cast<int>(inner);
    while (p >= 0) {
      ++idx[p];
      src_off += plan.src_stride_in_dst_order[p];
      if (idx[p] < plan.dst_shape[p]) break;
      src_off -= idx[p] * plan.src_stride_in_dst_order[p];
      idx[p] = 0;
      --p;
    }
  }
}

}  // namespace

void permute_copy_serial(const cx* src, cx* dst, std::span<const i64> shape,
                         std::span<const int> perm) {
  const PermutePlan plan = make_plan(shape, perm);
  permute_range(src, dst, plan, 0, plan.total);
}

void permute_copy(const cx* src, cx* dst, std::span<const i64> shape,
                  std::span<const int> perm) {
  const PermutePlan plan = make_plan(shape, perm);
  if (plan.total < kParallelFlopCutoff) {
    permute_range(src, dst, plan, 0, plan.total);
    return;
  }
#ifdef _OPENMP
  const int nthreads = omp_get_max_threads();
#else
  const int nthreads = 1;
#endif
  const i64 chunk = (plan.total + nthreads - 1) / nthreads;
#pragma omp parallel for schedule(static, 1)
  for (int t = 0; t < nthreads; ++t) {
    const i64 begin = t * chunk;
    const i64 end = std::min(plan.total, begin + chunk);
    if (begin < end) permute_range(src, dst, plan, begin, end);
  }
}

}  // namespace cspt::kernels
