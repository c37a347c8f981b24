#include "cspt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace cspt {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// BLAS threading is pinned to one thread so results do not depend on the
// caller's OpenMP context.
void init_blas() {
  static std::once_flag flag;
  std::call_once(flag, [] { openblas_set_num_threads(1); });
}

Mat to_eigen(const ComplexTensor& t) {
  if (t.rank() != 2) throw DimensionError("expected a rank-2 tensor, got " + t.shape_string());
  const i64 r = t.extent(0), c = t.extent(1);
  Mat m(r, c);
  for (i64 i = 0; i < r; ++i)
    for (i64 j = 0; j < c; ++j) m(i, j) = t[i * c + j];
  return m;
}

ComplexTensor from_eigen(const Mat& m) {
  ComplexTensor t({m.rows(), m.cols()});
  for (i64 i = 0; i < m.rows(); ++i)
    for (i64 j = 0; j < m.cols(); ++j) t[i * m.cols() + j] = m(i, j);
  return t;
}

struct RawSvd {
  Mat u;
  Eigen::VectorXd s;
  Mat vdag;
};

// Economy SVD via LAPACK zgesdd, with zgesvd as the fallback for the rare
// divide-and-conquer convergence failure.
RawSvd lapack_svd(Mat a) {
  init_blas();
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int r = std::min(m, n);
  RawSvd out;
  out.u.resize(m, r);
  out.s.resize(r);
  out.vdag.resize(r, n);
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, a.data(), m,
                                   out.s.data(), out.u.data(), m,
                                   out.vdag.data(), r);
  if (info != 0) {
    Eigen::VectorXd superb(std::max<lapack_int>(1, r - 1));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, a.data(), m,
                          out.s.data(), out.u.data(), m, out.vdag.data(), r,
                          superb.data());
    if (info != 0) throw NumericError("SVD failed to converge (info=" + std::to_string(info) + ")");
  }
  return out;
}

}  // namespace

SvdResult svd_compact(const ComplexTensor& m) {
  const RawSvd raw = lapack_svd(to_eigen(m));
  SvdResult res;
  res.u = from_eigen(raw.u);
  res.s.assign(raw.s.data(), raw.s.data() + raw.s.size());
  res.v = from_eigen(raw.vdag);
  res.discarded_weight = 0;
  return res;
}

SvdResult svd_truncate(const ComplexTensor& m, i64 d_max, double weight_floor) {
  if (!m.is_finite()) throw NumericError("svd_truncate: non-finite input");
  if (d_max < 1) throw DimensionError("svd_truncate: d_max must be >= 1");
  const RawSvd raw = lapack_svd(to_eigen(m));

  const i64 full = raw.s.size();
  double total = 0;
  for (i64 i = 0; i < full; ++i) total += raw.s[i] * raw.s[i];
  const double floor_abs = weight_floor * (full > 0 ? raw.s[0] : 0.0);

  i64 keep = std::min<i64>(d_max, full);
  while (keep > 0 && raw.s[keep - 1] < floor_abs) --keep;
  // A zero matrix keeps its single largest (zero) value so callers always
  // get a well-formed factorization.
  if (keep == 0) keep = 1;

  double kept_weight = 0;
  for (i64 i = 0; i < keep; ++i) kept_weight += raw.s[i] * raw.s[i];

  SvdResult res;
  res.u = from_eigen(raw.u.leftCols(keep));
  res.s.assign(raw.s.data(), raw.s.data() + keep);
  res.v = from_eigen(raw.vdag.topRows(keep));
  res.discarded_weight = total > 0 ? (total - kept_weight) / total : 0.0;
  return res;
}

PseudoInverseResult pseudo_inverse(const ComplexTensor& m, double rel_cutoff) {
  if (!m.is_finite()) throw NumericError("pseudo_inverse: non-finite input");
  const RawSvd raw = lapack_svd(to_eigen(m));
  const i64 full = raw.s.size();

  ConditionReport rep;
  rep.sigma_max = full > 0 ? raw.s[0] : 0.0;
  const double cut = rel_cutoff * rep.sigma_max;
  i64 rank = 0;
  while (rank < full && raw.s[rank] > cut) ++rank;
  rep.numerical_rank = rank;
  if (rank == 0)
    throw SingularMetricError("pseudo_inverse: numerical rank 0", rep);
  rep.sigma_min = raw.s[rank - 1];
  // Retained values within a factor 10 of the cutoff make the rank decision
  // ambiguous; surface that to the caller.
  rep.conditioning_warning = rep.sigma_min < 10.0 * cut;

  Mat pinv = raw.vdag.topRows(rank).adjoint() *
             raw.s.head(rank).cwiseInverse().asDiagonal() *
             raw.u.leftCols(rank).adjoint();
  return {from_eigen(pinv), rep};
}

ComplexTensor matrix_exponential(const ComplexTensor& m, cx scale) {
  if (m.rank() != 2 || m.extent(0) != m.extent(1))
    throw DimensionError("matrix_exponential: matrix must be square");
  Mat a = to_eigen(m) * scale;
  return from_eigen(a.exp());
}

ComplexTensor solve(const ComplexTensor& a, const ComplexTensor& b) {
  Mat ea = to_eigen(a);
  Mat eb = to_eigen(b);
  return from_eigen(ea.partialPivLu().solve(eb));
}

ComplexTensor inverse(const ComplexTensor& a) {
  Mat ea = to_eigen(a);
  return from_eigen(ea.inverse());
}

std::vector<cx> dense_eigenvalues(const ComplexTensor& m) {
  Eigen::ComplexEigenSolver<Mat> es(to_eigen(m), /*computeEigenvectors=*/false);
  std::vector<cx> vals(es.eigenvalues().data(),
                       es.eigenvalues().data() + es.eigenvalues().size());
  return vals;
}

namespace {

void phase_fix(Vec& v) {
  i64 arg = 0;
  double best = 0;
  for (i64 i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best * (1.0 + 1e-12)) {
      best = a;
      arg = i;
    }
  }
  if (best > 0) v *= std::conj(v[arg]) / std::abs(v[arg]);
}

}  // namespace

EigenPair dominant_eigenpair(const LinearMap& op, i64 n, double tol, i64 max_iter) {
  if (n < 1) throw DimensionError("dominant_eigenpair: n must be >= 1");
  if (n == 1) {
    cx in = 1.0, out = 0.0;
    op(std::span<const cx>(&in, 1), std::span<cx>(&out, 1));
    EigenPair p;
    p.eigenvalue = out;
    p.eigenvector = {1.0};
    p.gap = {0.0, 1, 0.0, false};
    return p;
  }

  const i64 block = 2;
  Mat q(n, block);
  q.setZero();
  q.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  q(0, 1) = 1.0;  // orthogonalized below
  {
    Eigen::HouseholderQR<Mat> qr(q);
    q = qr.householderQ() * Mat::Identity(n, block);
  }

  Mat w(n, block);
  EigenPair result;
  for (i64 it = 1; it <= max_iter; ++it) {
    for (i64 c = 0; c < block; ++c) {
      std::span<const cx> in(q.col(c).data(), static_cast<size_t>(n));
      std::span<cx> out(w.col(c).data(), static_cast<size_t>(n));
      op(in, out);
    }
    // Project to the 2x2 Rayleigh quotient and take its dominant pair.
    Mat h = q.adjoint() * w;
    Eigen::ComplexEigenSolver<Mat> es(h, /*computeEigenvectors=*/true);
    i64 dominant = 0, sub = 1;
    if (std::abs(es.eigenvalues()[1]) > std::abs(es.eigenvalues()[0]))
      std::swap(dominant, sub);
    const cx theta = es.eigenvalues()[dominant];
    const cx theta2 = es.eigenvalues()[sub];
    Vec y = es.eigenvectors().col(dominant);
    Vec ritz = q * y;
    Vec image = w * y;
    const double res = (image - theta * ritz).norm();
    const double scale = std::max(std::abs(theta), 1e-300);

    if (res <= tol * scale) {
      phase_fix(ritz);
      ritz.normalize();
      result.eigenvalue = theta;
      result.eigenvector.assign(ritz.data(), ritz.data() + n);
      result.gap.dominance_ratio = std::abs(theta2) / scale;
      result.gap.iterations = it;
      result.gap.residual = res / scale;
      result.gap.degenerate_warning = result.gap.dominance_ratio > 1.0 - 1e-6;
      return result;
    }

    // Re-orthonormalize the iterated block.
    Eigen::HouseholderQR<Mat> qr(w);
    q = qr.householderQ() * Mat::Identity(n, block);

    // A vanishing image means the seed lies in the kernel; restart from a
    // shifted deterministic seed.
    if (w.col(0).norm() < 1e-280) {
      q.setZero();
      const i64 shift = it % n;
      q(shift, 0) = 1.0;
      q((shift + 1) % n, 1) = 1.0;
    }
  }
  throw ConvergenceError("dominant_eigenpair: no convergence within " +
                         std::to_string(max_iter) + " iterations");
}

EigenPair dominant_eigenpair(const ComplexTensor& m, double tol, i64 max_iter) {
  if (m.rank() != 2 || m.extent(0) != m.extent(1))
    throw DimensionError("dominant_eigenpair: matrix must be square");
  const i64 n = m.extent(0);
  const Mat em = to_eigen(m);
  LinearMap op = [&em, n](std::span<const cx> in, std::span<cx> out) {
    Eigen::Map<const Vec> vin(in.data(), n);
    Eigen::Map<Vec> vout(out.data(), n);
    vout = em * vin;
  };
  return dominant_eigenpair(op, n, tol, max_iter);
}

}  // namespace cspt
