#include "cspt/ed.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace cspt::ed {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr i64 kDenseCap = 6561;  // 3^8

Mat to_eigen(const ComplexTensor& t) {
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

cx min_real_eigenvalue(std::span<const cx> vals) {
  cx best = vals[0];
  for (const cx& v : vals) {
    if (v.real() < best.real() - 1e-10) {
      best = v;
    } else if (std::abs(v.real() - best.real()) <= 1e-10 &&
               std::abs(v.imag()) < std::abs(best.imag())) {
      best = v;
    }
  }
  return best;
}

}  // namespace

BiorthogonalSpectrum full_spectrum(const ComplexTensor& h) {
  if (h.rank() != 2 || h.extent(0) != h.extent(1))
    throw DimensionError("full_spectrum: matrix must be square");
  const i64 dim = h.extent(0);
  if (dim > kDenseCap)
    throw CapacityError("full_spectrum: dense bound is 3^8 = 6561");

  Eigen::ComplexEigenSolver<Mat> es(to_eigen(h), /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw NumericError("full_spectrum: eigendecomposition failed");

  std::vector<i64> order(static_cast<size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](i64 a, i64 b) {
    const cx va = es.eigenvalues()[a], vb = es.eigenvalues()[b];
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  });

  Mat v(dim, dim);
  BiorthogonalSpectrum out;
  out.eigenvalues.resize(static_cast<size_t>(dim));
  for (i64 i = 0; i < dim; ++i) {
    v.col(i) = es.eigenvectors().col(order[static_cast<size_t>(i)]);
    out.eigenvalues[static_cast<size_t>(i)] = es.eigenvalues()[order[static_cast<size_t>(i)]];
  }

  // Left vectors from the inverse-adjoint; exact biorthonormality up to the
  // conditioning of v, which is precisely the exceptional-point diagnostic.
  Mat l = v.inverse().adjoint();
  double residual = 0;
  for (i64 i = 0; i < dim; ++i) {
    const cx overlap = l.col(i).dot(v.col(i));
    residual = std::max(residual, std::abs(overlap - 1.0));
    l.col(i) /= std::conj(overlap);
  }
  out.right_vectors = from_eigen(v);
  out.left_vectors = from_eigen(l);
  out.pairing_residual = residual;
  out.exceptional_warning = residual > 1e-6;
  return out;
}

GroundPair ground_pair(const ComplexTensor& h) {
  const BiorthogonalSpectrum spec = full_spectrum(h);
  const i64 dim = static_cast<i64>(spec.eigenvalues.size());

  // Candidates sharing the minimal real part within 1e-10.
  double min_re = spec.eigenvalues[0].real();
  for (const cx& v : spec.eigenvalues) min_re = std::min(min_re, v.real());
  i64 pick = -1;
  for (i64 i = 0; i < dim; ++i) {
    const cx v = spec.eigenvalues[static_cast<size_t>(i)];
    if (v.real() > min_re + 1e-10) continue;
    if (pick < 0 ||
        std::abs(v.imag()) < std::abs(spec.eigenvalues[static_cast<size_t>(pick)].imag()))
      pick = i;
  }

  GroundPair gp;
  gp.e0 = spec.eigenvalues[static_cast<size_t>(pick)];
  gp.right.resize(static_cast<size_t>(dim));
  gp.left.resize(static_cast<size_t>(dim));
  for (i64 r = 0; r < dim; ++r) {
    gp.right[static_cast<size_t>(r)] = spec.right_vectors[r * dim + pick];
    gp.left[static_cast<size_t>(r)] = spec.left_vectors[r * dim + pick];
  }

  double next = std::numeric_limits<double>::infinity();
  for (const cx& v : spec.eigenvalues) {
    if (v.real() > gp.e0.real() + 1e-10) next = std::min(next, v.real());
    const bool same = std::abs(v.real() - gp.e0.real()) <= 1e-10 &&
                      std::abs(v.imag() - gp.e0.imag()) <= 1e-10;
    if (same) gp.manifold.push_back(v);
  }
  gp.degenerate = gp.manifold.size() > 1;
  gp.gap_real = std::isfinite(next) ? next - gp.e0.real() : 0.0;
  return gp;
}

CrossingScan level_crossing_scan(std::span<const double> lambda_grid,
                                 int n_sites, double u_strength) {
  CrossingScan scan;
  std::vector<double> grid(lambda_grid.begin(), lambda_grid.end());
  std::sort(grid.begin(), grid.end());
  if (grid.empty()) throw DimensionError("level_crossing_scan: empty grid");

  const auto ground_energy = [&](double lambda) -> cx {
    const parent::HamiltonianSpec spec = parent::hamiltonian_spec(lambda, u_strength);
    const ComplexTensor h = parent::assemble_dense(spec, n_sites, /*pbc=*/true);
    const std::vector<cx> vals = dense_eigenvalues(h);
    return min_real_eigenvalue(vals);
  };

  scan.samples.resize(grid.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < grid.size(); ++i)
    scan.samples[i] = {grid[i], ground_energy(grid[i])};

  const auto departed = [](const cx& e0) { return e0.real() < -1e-8; };
  size_t first = grid.size();
  for (size_t i = 0; i < grid.size(); ++i)
    if (departed(scan.samples[i].e0)) {
      first = i;
      break;
    }
  if (first == grid.size()) return scan;  // absent-crossing report

  scan.found = true;
  if (first == 0) {
    scan.lambda_star = grid[0];
    return scan;
  }
  double lo = grid[first - 1], hi = grid[first];
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (departed(ground_energy(mid)))
      hi = mid;
    else
      lo = mid;
  }
  scan.lambda_star = 0.5 * (lo + hi);
  return scan;
}

void export_spectrum_csv(const BiorthogonalSpectrum& spec, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  os << "re,im,index\n";
  os.precision(17);
  for (size_t i = 0; i < spec.eigenvalues.size(); ++i)
    os << spec.eigenvalues[i].real() << "," << spec.eigenvalues[i].imag() << ","
       << i << "\n";
  if (!os) throw Error("write failed: " + path);
}

}  // namespace cspt::ed
