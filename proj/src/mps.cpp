#include "cspt/mps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include <Eigen/Dense>

namespace cspt::mps {

namespace {

constexpr double kPurgeFloor = 1e-14;

void validate_cell(const UnitCellMPS& s) {
  if (s.k < 1 || static_cast<int>(s.gammas.size()) != s.k ||
      static_cast<int>(s.lambdas.size()) != s.k)
    throw DimensionError("unit cell must hold k site tensors and k bond vectors");
  for (int i = 0; i < s.k; ++i) {
    const auto& g = s.gammas[static_cast<size_t>(i)];
    if (g.rank() != 3 || g.extent(0) != s.d)
      throw DimensionError("site tensor must have shape (d, D_left, D_right)");
    const i64 dl = s.bond_dim(i - 1);
    const i64 dr = s.bond_dim(i);
    if (g.extent(1) != dl || g.extent(2) != dr)
      throw DimensionError("bond extents do not chain consistently around the cell");
  }
}

std::vector<double> normalized(std::vector<double> s) {
  double nrm = 0;
  for (double v : s) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm <= 0) throw StateCollapseError("all Schmidt weights vanished on a bond");
  for (double& v : s) v /= nrm;
  return s;
}

// One site of the mixed transfer, moving right-to-left:
// M'(al_r, al_l) = sum_i B_r^i M B_l^i(dagger).
ComplexTensor site_apply_rl(const ComplexTensor& br, const ComplexTensor& bl,
                            const ComplexTensor& m) {
  ComplexTensor tmp = contract(br, m, {{2, 0}});           // (d, Dl_r, Dr_l)
  return contract(tmp, bl.conjugated(), {{0, 0}, {2, 2}});  // (Dl_r, Dl_l)
}

// Adjoint direction, left-to-right: N'(be_r, be_l) = sum_i B_r^i+ N B_l^i.
ComplexTensor site_apply_lr(const ComplexTensor& br, const ComplexTensor& bl,
                            const ComplexTensor& n) {
  ComplexTensor tmp = contract(br.conjugated(), n, {{1, 0}});  // (d, Dr_r, Dl_l)
  return contract(tmp, bl, {{0, 0}, {2, 1}});                  // (Dr_r, Dr_l)
}

struct CellFixedPoint {
  ComplexTensor m;
  cx eigenvalue;
  GapReport gap;
};

// Dominant eigen-tensor of the cell transfer built from per-site tensors
// rhs (ket side) and lhs (conjugated side), at the cell boundary bond.
CellFixedPoint dominant_cell_fp(const std::vector<ComplexTensor>& rhs,
                                const std::vector<ComplexTensor>& lhs,
                                bool right_side, double tol = 1e-12,
                                i64 max_iter = 200000) {
  const int k = static_cast<int>(rhs.size());
  const i64 dr = right_side ? rhs.back().extent(2) : rhs.front().extent(1);
  const i64 dl = right_side ? lhs.back().extent(2) : lhs.front().extent(1);
  const i64 n = dr * dl;
  LinearMap op = [&, k](std::span<const cx> in, std::span<cx> out) {
    ComplexTensor m({dr, dl}, std::vector<cx>(in.begin(), in.end()));
    if (right_side) {
      for (int i = k - 1; i >= 0; --i)
        m = site_apply_rl(rhs[static_cast<size_t>(i)], lhs[static_cast<size_t>(i)], m);
    } else {
      for (int i = 0; i < k; ++i)
        m = site_apply_lr(rhs[static_cast<size_t>(i)], lhs[static_cast<size_t>(i)], m);
    }
    std::copy(m.data().begin(), m.data().end(), out.begin());
  };
  EigenPair p = dominant_eigenpair(op, n, tol, max_iter);
  CellFixedPoint fp;
  fp.m = ComplexTensor({dr, dl}, std::move(p.eigenvector));
  fp.eigenvalue = p.eigenvalue;
  fp.gap = p.gap;
  return fp;
}

struct PsdSplit {
  Eigen::MatrixXcd q;       // D x r
  Eigen::VectorXd sqrt_ev;  // r
};

// Hermitian PSD factorization of a transfer fixed point, dropping directions
// below the purge floor.
PsdSplit psd_split(const ComplexTensor& v) {
  const i64 n = v.extent(0);
  Eigen::MatrixXcd m(n, n);
  for (i64 i = 0; i < n; ++i)
    for (i64 j = 0; j < n; ++j) m(i, j) = v[i * n + j];
  const cx tr = m.trace();
  if (std::abs(tr) < 1e-300)
    throw NumericError("transfer fixed point has vanishing trace");
  m *= std::conj(tr) / std::abs(tr);
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const double top = es.eigenvalues().maxCoeff();
  if (top <= 0) throw NumericError("transfer fixed point is not positive");
  std::vector<i64> keep;
  for (i64 i = 0; i < n; ++i)
    if (es.eigenvalues()[i] > kPurgeFloor * top) keep.push_back(i);
  PsdSplit out;
  out.q.resize(n, static_cast<i64>(keep.size()));
  out.sqrt_ev.resize(static_cast<i64>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) {
    out.q.col(static_cast<i64>(c)) = es.eigenvectors().col(keep[c]);
    out.sqrt_ev[static_cast<i64>(c)] = std::sqrt(es.eigenvalues()[keep[c]]);
  }
  return out;
}

ComplexTensor from_eigen_mat(const Eigen::MatrixXcd& m) {
  ComplexTensor t({m.rows(), m.cols()});
  for (i64 i = 0; i < m.rows(); ++i)
    for (i64 j = 0; j < m.cols(); ++j) t[i * m.cols() + j] = m(i, j);
  return t;
}

// Contract the whole cell between two copies of the boundary bond weight:
// theta = diag(lam_b) G_0 L_0 G_1 ... G_{k-1} diag(lam_b), shape (r, d^k, r).
ComplexTensor cell_window(const UnitCellMPS& s, std::span<const double> lam_b) {
  ComplexTensor t = ComplexTensor::diagonal(lam_b);
  for (int i = 0; i < s.k; ++i) {
    t = contract(t, s.gammas[static_cast<size_t>(i)], {{t.rank() - 1, 1}});
    const auto& w = (i == s.k - 1) ? lam_b : std::span<const double>(s.lambdas[static_cast<size_t>(i)]);
    t = scale_axis(t, t.rank() - 1, w);
  }
  i64 phys = 1;
  for (int i = 0; i < s.k; ++i) phys *= s.d;
  return t.reshaped({t.extent(0), phys, t.extent(t.rank() - 1)});
}

}  // namespace

i64 UnitCellMPS::bond_dim(int bond) const {
  return static_cast<i64>(lambdas[static_cast<size_t>(bond_index(bond))].size());
}

int UnitCellMPS::bond_index(int bond) const {
  int b = bond % k;
  if (b < 0) b += k;
  return b;
}

ComplexTensor UnitCellMPS::b_tensor(int site) const {
  const int i = bond_index(site);
  return scale_axis(gammas[static_cast<size_t>(i)], 2, lambdas[static_cast<size_t>(i)]);
}

ComplexTensor UnitCellMPS::a_tensor(int site) const {
  const int i = bond_index(site);
  return scale_axis(gammas[static_cast<size_t>(i)], 1,
                    lambdas[static_cast<size_t>(bond_index(site - 1))]);
}

void UnitCellMPS::refresh_max_bond() {
  D = 0;
  for (const auto& l : lambdas) D = std::max<i64>(D, static_cast<i64>(l.size()));
}

ComplexTensor scale_axis(const ComplexTensor& t, int axis, std::span<const double> w) {
  if (t.extent(axis) != static_cast<i64>(w.size()))
    throw DimensionError("scale_axis: weight length mismatch");
  ComplexTensor out = t;
  i64 inner = 1;
  for (int ax = axis + 1; ax < t.rank(); ++ax) inner *= t.extent(ax);
  const i64 repeat = t.size() / (inner * t.extent(axis));
  i64 off = 0;
  for (i64 r = 0; r < repeat; ++r)
    for (i64 a = 0; a < t.extent(axis); ++a) {
      const double f = w[static_cast<size_t>(a)];
      for (i64 i = 0; i < inner; ++i, ++off) out[off] *= f;
    }
  return out;
}

ComplexTensor scale_axis_inverse(const ComplexTensor& t, int axis,
                                 std::span<const double> w) {
  std::vector<double> inv(w.size());
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0) throw StateCollapseError("cannot divide by vanished Schmidt weight");
    inv[i] = 1.0 / w[i];
  }
  return scale_axis(t, axis, inv);
}

double canonical_residual(const UnitCellMPS& s) {
  validate_cell(s);
  double worst = 0;
  for (int i = 0; i < s.k; ++i) {
    const ComplexTensor a = s.a_tensor(i);
    const ComplexTensor ga = contract(a.conjugated(), a, {{0, 0}, {1, 1}});
    const ComplexTensor b = s.b_tensor(i);
    const ComplexTensor gb = contract(b, b.conjugated(), {{0, 0}, {2, 2}});
    worst = std::max(worst, (ga - ComplexTensor::identity(ga.extent(0))).norm());
    worst = std::max(worst, (gb - ComplexTensor::identity(gb.extent(0))).norm());
  }
  return worst;
}

WindowSplit split_window(const ComplexTensor& theta,
                         std::span<const double> lambda_left,
                         std::span<const double> lambda_right, int m, i64 d,
                         i64 d_max, double weight_floor) {
  const i64 dl = theta.extent(0);
  const i64 dr = theta.extent(2);
  WindowSplit out;
  if (m == 1) {
    ComplexTensor g = scale_axis_inverse(theta, 0, lambda_left);
    g = scale_axis_inverse(g, 2, lambda_right);
    static constexpr int perm[3] = {1, 0, 2};
    out.gammas.push_back(g.permuted(perm));
    return out;
  }

  const double floor = std::max(weight_floor, kPurgeFloor);
  ComplexTensor w = theta;  // (bond, d^{remaining}, dr)
  std::vector<double> bond_left(lambda_left.begin(), lambda_left.end());
  i64 rows_bond = dl;
  i64 phys_left = theta.extent(1);

  for (int j = 0; j < m - 1; ++j) {
    phys_left /= d;
    const ComplexTensor mat =
        w.reshaped({rows_bond * d, phys_left * dr});
    SvdResult svd = svd_truncate(mat, d_max, floor);
    if (svd.s.empty() || svd.s[0] <= 0)
      throw StateCollapseError("all Schmidt weights fell below the floor");
    const std::vector<double> lam = normalized(svd.s);
    const i64 r = static_cast<i64>(lam.size());
    out.discarded_weight = std::max(out.discarded_weight, svd.discarded_weight);

    ComplexTensor g = svd.u.reshaped({rows_bond, d, r});
    g = scale_axis_inverse(g, 0, bond_left);
    static constexpr int perm[3] = {1, 0, 2};
    out.gammas.push_back(g.permuted(perm));
    out.lambdas.push_back(lam);

    if (j < m - 2) {
      w = scale_axis(svd.v, 0, lam).reshaped({r, phys_left, dr});
    } else {
      ComplexTensor g_last = svd.v.reshaped({r, d, dr});
      g_last = scale_axis_inverse(g_last, 2, lambda_right);
      out.gammas.push_back(g_last.permuted(perm));
    }
    rows_bond = r;
    bond_left = lam;
  }
  return out;
}

UnitCellMPS canonicalize(const UnitCellMPS& s_in) {
  validate_cell(s_in);
  UnitCellMPS s = s_in;
  const int k = s.k;

  std::vector<ComplexTensor> bs, as;
  for (int i = 0; i < k; ++i) {
    bs.push_back(s.b_tensor(i));
    as.push_back(s.a_tensor(i));
  }
  const CellFixedPoint right = dominant_cell_fp(bs, bs, /*right_side=*/true);
  const CellFixedPoint left = dominant_cell_fp(as, as, /*right_side=*/false);
  const double eta = right.eigenvalue.real();
  if (eta <= 0 || std::abs(right.eigenvalue.imag()) > 1e-6 * std::abs(eta))
    throw NumericError("cell transfer dominant eigenvalue is not positive");

  const PsdSplit xr = psd_split(right.m);
  const PsdSplit yl = psd_split(left.m);

  const int boundary = k - 1;
  const auto& lam_b_old = s.lambdas[static_cast<size_t>(boundary)];
  // W = Y diag(lambda_b) X with Y = sqrt(ev) Q_l^+, X = Q_r sqrt(ev).
  Eigen::MatrixXcd w = yl.sqrt_ev.asDiagonal() * yl.q.adjoint();
  {
    Eigen::VectorXd lb(static_cast<i64>(lam_b_old.size()));
    for (i64 i = 0; i < lb.size(); ++i) lb[i] = lam_b_old[static_cast<size_t>(i)];
    w = w * lb.asDiagonal();
  }
  w = w * (xr.q * xr.sqrt_ev.asDiagonal());

  SvdResult bsvd = svd_compact(from_eigen_mat(w));
  i64 keep = static_cast<i64>(bsvd.s.size());
  while (keep > 1 && bsvd.s[static_cast<size_t>(keep - 1)] < kPurgeFloor * bsvd.s[0]) --keep;
  std::vector<double> lam_b(bsvd.s.begin(), bsvd.s.begin() + keep);
  lam_b = normalized(std::move(lam_b));

  // Left transform (r_new x D) onto gamma_0's left leg, right transform
  // (D x r_new) onto gamma_{k-1}'s right leg.
  Eigen::MatrixXcd u_keep(w.rows(), keep), vd_keep(keep, w.cols());
  for (i64 i = 0; i < w.rows(); ++i)
    for (i64 j = 0; j < keep; ++j) u_keep(i, j) = bsvd.u[i * static_cast<i64>(bsvd.s.size()) + j];
  for (i64 i = 0; i < keep; ++i)
    for (i64 j = 0; j < w.cols(); ++j) vd_keep(i, j) = bsvd.v[i * w.cols() + j];

  Eigen::MatrixXcd xp = xr.sqrt_ev.cwiseInverse().asDiagonal() * xr.q.adjoint();
  Eigen::MatrixXcd yp = yl.q * yl.sqrt_ev.cwiseInverse().asDiagonal();
  const ComplexTensor left_mat = from_eigen_mat(vd_keep * xp);
  const ComplexTensor right_mat = from_eigen_mat(yp * u_keep);

  static constexpr int perm102[3] = {1, 0, 2};
  ComplexTensor g0 = contract(left_mat, s.gammas[0], {{1, 1}}).permuted(perm102);
  if (k == 1) {
    ComplexTensor g = contract(g0, right_mat, {{2, 0}});
    g *= std::pow(eta, -0.5);
    UnitCellMPS out;
    out.k = 1;
    out.d = s.d;
    out.gammas = {std::move(g)};
    out.lambdas = {lam_b};
    out.refresh_max_bond();
    return out;
  }

  s.gammas[0] = std::move(g0);
  s.gammas[static_cast<size_t>(k - 1)] =
      contract(s.gammas[static_cast<size_t>(k - 1)], right_mat, {{2, 0}});
  s.lambdas[static_cast<size_t>(boundary)] = lam_b;

  const ComplexTensor theta = cell_window(s, lam_b);
  WindowSplit split = split_window(theta, lam_b, lam_b, k, s.d,
                                   /*d_max=*/theta.extent(1) * theta.extent(0),
                                   /*weight_floor=*/0.0);
  UnitCellMPS out;
  out.k = k;
  out.d = s.d;
  out.gammas = std::move(split.gammas);
  out.lambdas = std::move(split.lambdas);
  out.lambdas.push_back(lam_b);
  out.refresh_max_bond();
  return out;
}

UnitCellMPS from_tensor(const ComplexTensor& a, int k) {
  if (a.rank() != 3 || a.extent(1) != a.extent(2))
    throw DimensionError("from_tensor: site tensor must be (d, D, D)");
  if (k < 1) throw DimensionError("from_tensor: k must be >= 1");
  // Injectivity gate on the single-site transfer matrix.
  const std::vector<ComplexTensor> one{a};
  const CellFixedPoint fp = dominant_cell_fp(one, one, true);
  if (fp.gap.degenerate_warning || fp.gap.dominance_ratio > 1.0 - 1e-6)
    throw NonInjectiveError(
        "single-site transfer matrix has a degenerate dominant eigenvalue "
        "(ratio " + std::to_string(fp.gap.dominance_ratio) + ")");

  const i64 bond = a.extent(1);
  UnitCellMPS raw;
  raw.k = k;
  raw.d = a.extent(0);
  std::vector<double> lam(static_cast<size_t>(bond),
                          1.0 / std::sqrt(static_cast<double>(bond)));
  for (int i = 0; i < k; ++i) {
    raw.gammas.push_back(a);
    raw.lambdas.push_back(lam);
  }
  raw.refresh_max_bond();
  return canonicalize(raw);
}

UnitCellMPS random_mps(i64 d, i64 bond, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  UnitCellMPS raw;
  raw.k = k;
  raw.d = d;
  std::vector<double> lam(static_cast<size_t>(bond),
                          1.0 / std::sqrt(static_cast<double>(bond)));
  for (int i = 0; i < k; ++i) {
    ComplexTensor g({d, bond, bond});
    for (i64 j = 0; j < g.size(); ++j) g[j] = cx{gauss(rng), gauss(rng)};
    raw.gammas.push_back(std::move(g));
    raw.lambdas.push_back(lam);
  }
  raw.refresh_max_bond();
  return canonicalize(raw);
}

std::vector<double> entanglement_spectrum(const UnitCellMPS& s, int bond) {
  const auto& lam = s.lambdas[static_cast<size_t>(s.bond_index(bond))];
  std::vector<double> es(lam.size());
  for (size_t i = 0; i < lam.size(); ++i) es[i] = lam[i] * lam[i];
  return es;
}

MixedFixedPoints mixed_transfer_fixed_points(const UnitCellMPS& left,
                                             const UnitCellMPS& right) {
  if (left.k != right.k || left.d != right.d)
    throw DimensionError("mixed transfer requires matching k and d");
  std::vector<ComplexTensor> br, bl;
  for (int i = 0; i < right.k; ++i) {
    br.push_back(right.b_tensor(i));
    bl.push_back(left.b_tensor(i));
  }
  const CellFixedPoint r = dominant_cell_fp(br, bl, /*right_side=*/true);
  const CellFixedPoint l = dominant_cell_fp(br, bl, /*right_side=*/false);
  MixedFixedPoints out;
  out.sigma_r = r.m;
  out.sigma_l = l.m;
  out.overlap_rate = r.eigenvalue;
  out.gap = r.gap;
  return out;
}

ComplexTensor cell_blob(const UnitCellMPS& s, int first, int count) {
  ComplexTensor t = s.b_tensor(first);
  i64 phys = s.d;
  for (int j = 1; j < count; ++j) {
    t = contract(t, s.b_tensor(first + j), {{2, 1}});  // (d^j, Dl, d, Dr)
    static constexpr int perm[4] = {0, 2, 1, 3};
    t = t.permuted(perm);
    phys *= s.d;
    t = t.reshaped({phys, t.extent(2), t.extent(3)});
  }
  return t;  // (d^count, Dl, Dr)
}

namespace {

cx frob_inner(const ComplexTensor& a, const ComplexTensor& b) {
  const ComplexTensor s = contract(a.conjugated(), b, {{0, 0}, {1, 1}});
  return s[0];
}

}  // namespace

cx measure_local(const UnitCellMPS& left, const UnitCellMPS& right,
                 const LocalTerm& op) {
  const int k = right.k;
  const int m = op.span;
  if (m < 1 || m > k)
    throw DimensionError("measure_local: operator span must be in [1, k]");
  i64 dm = 1;
  for (int i = 0; i < m; ++i) dm *= right.d;
  if (op.matrix.rank() != 2 || op.matrix.extent(0) != dm || op.matrix.extent(1) != dm)
    throw DimensionError("measure_local: operator matrix must be d^span square");

  const MixedFixedPoints fp = mixed_transfer_fixed_points(left, right);
  const cx denom0 = frob_inner(fp.sigma_l, fp.sigma_r);
  if (std::abs(denom0) < 1e-12)
    throw BiorthogonalityError("measure_local: <L|R> fixed-point contraction vanished");
  const cx eta2 = fp.overlap_rate * fp.overlap_rate;

  std::vector<ComplexTensor> br(static_cast<size_t>(k)), bl(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    br[static_cast<size_t>(i)] = right.b_tensor(i);
    bl[static_cast<size_t>(i)] = left.b_tensor(i);
  }

  cx acc = 0;
  for (int p = 0; p < k; ++p) {
    ComplexTensor mat = fp.sigma_r;
    for (int site = 2 * k - 1; site >= p + m; --site) {
      const int i = right.bond_index(site);
      mat = site_apply_rl(br[static_cast<size_t>(i)], bl[static_cast<size_t>(i)], mat);
    }
    const ComplexTensor blob_r = cell_blob(right, p, m);
    const ComplexTensor blob_l = cell_blob(left, p, m);
    const ComplexTensor ob = contract(op.matrix, blob_r, {{1, 0}});
    ComplexTensor tmp = contract(ob, mat, {{2, 0}});
    mat = contract(tmp, blob_l.conjugated(), {{0, 0}, {2, 2}});
    for (int site = p - 1; site >= 0; --site) {
      const int i = right.bond_index(site);
      mat = site_apply_rl(br[static_cast<size_t>(i)], bl[static_cast<size_t>(i)], mat);
    }
    acc += frob_inner(fp.sigma_l, mat) / (eta2 * denom0);
  }
  return acc / static_cast<double>(k);
}

namespace {

ComplexTensor chain_product(const UnitCellMPS& s, int lo, int hi) {
  if (hi - lo == 1) return s.b_tensor(lo);
  const int mid = lo + (hi - lo) / 2;
  const ComplexTensor a = chain_product(s, lo, mid);
  const ComplexTensor b = chain_product(s, mid, hi);
  ComplexTensor t = contract(a, b, {{2, 1}});  // (pa, Dl, pb, Dr)
  static constexpr int perm[4] = {0, 2, 1, 3};
  t = t.permuted(perm);
  return t.reshaped({t.extent(0) * t.extent(1), t.extent(2), t.extent(3)});
}

}  // namespace

FiniteMPSVector to_finite_vector(const UnitCellMPS& s, int n_cells) {
  const int n = n_cells * s.k;
  if (n_cells < 1 || n > 12)
    throw CapacityError("to_finite_vector: dense bound is 12 sites, requested " +
                        std::to_string(n));
  const ComplexTensor chain = chain_product(s, 0, n);
  const i64 dim = chain.extent(0);
  const i64 bond = chain.extent(1);
  FiniteMPSVector out;
  out.n = n;
  out.amplitudes.resize(static_cast<size_t>(dim));
  for (i64 i = 0; i < dim; ++i) {
    cx tr = 0;
    for (i64 a = 0; a < bond; ++a) tr += chain[(i * bond + a) * bond + a];
    out.amplitudes[static_cast<size_t>(i)] = tr;
  }
  double nrm = 0;
  for (const cx& v : out.amplitudes) nrm += std::norm(v);
  nrm = std::sqrt(nrm);
  if (nrm <= 0) throw NumericError("to_finite_vector: PBC trace vanished");
  for (cx& v : out.amplitudes) v /= nrm;
  return out;
}

namespace {

template <typename T>
void write_pod(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

constexpr char kMagic[8] = {'C', 'S', 'P', 'T', 'M', 'P', 'S', '\x01'};

}  // namespace

void save_mps(const UnitCellMPS& s, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path);
  os.write(kMagic, sizeof(kMagic));
  write_pod<std::int32_t>(os, s.k);
  write_pod<std::int64_t>(os, s.d);
  for (int i = 0; i < s.k; ++i) {
    const auto& g = s.gammas[static_cast<size_t>(i)];
    write_pod<std::int64_t>(os, g.extent(1));
    write_pod<std::int64_t>(os, g.extent(2));
    os.write(reinterpret_cast<const char*>(g.raw()),
             static_cast<std::streamsize>(sizeof(cx) * static_cast<size_t>(g.size())));
  }
  for (int i = 0; i < s.k; ++i) {
    const auto& lam = s.lambdas[static_cast<size_t>(i)];
    write_pod<std::int64_t>(os, static_cast<std::int64_t>(lam.size()));
    os.write(reinterpret_cast<const char*>(lam.data()),
             static_cast<std::streamsize>(sizeof(double) * lam.size()));
  }
  if (!os) throw Error("write failed: " + path);
}

UnitCellMPS load_mps(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open for reading: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error("not an MPS checkpoint (bad header): " + path);
  UnitCellMPS s;
  s.k = read_pod<std::int32_t>(is);
  s.d = read_pod<std::int64_t>(is);
  if (s.k < 1 || s.k > 1024 || s.d < 1 || s.d > 1024)
    throw Error("corrupt MPS header: " + path);
  for (int i = 0; i < s.k; ++i) {
    const i64 dl = read_pod<std::int64_t>(is);
    const i64 dr = read_pod<std::int64_t>(is);
    ComplexTensor g({s.d, dl, dr});
    is.read(reinterpret_cast<char*>(g.raw()),
            static_cast<std::streamsize>(sizeof(cx) * static_cast<size_t>(g.size())));
    s.gammas.push_back(std::move(g));
  }
  for (int i = 0; i < s.k; ++i) {
    const auto len = read_pod<std::int64_t>(is);
    std::vector<double> lam(static_cast<size_t>(len));
    is.read(reinterpret_cast<char*>(lam.data()),
            static_cast<std::streamsize>(sizeof(double) * lam.size()));
    s.lambdas.push_back(std::move(lam));
  }
  if (!is) throw Error("truncated MPS checkpoint: " + path);
  s.refresh_max_bond();
  validate_cell(s);
  return s;
}

}  // namespace cspt::mps
