#include "cspt/spt.hpp"

#include <cmath>
#include <sstream>

namespace cspt::spt {

namespace {

constexpr double kRoundTol = 1e-4;
constexpr double kScalarTol = 1e-6;

struct MixedEig {
  cx eigenvalue;
  ComplexTensor w;  // D x D, unit Frobenius norm
  double dominance;
};

// Dominant eigen-matrix of M -> sum_I atilde^I M a^I(dagger).
MixedEig mixed_dominant(const ComplexTensor& atilde, const ComplexTensor& a) {
  const i64 dim = a.extent(1);
  LinearMap op = [&](std::span<const cx> in, std::span<cx> out) {
    ComplexTensor m({dim, dim}, std::vector<cx>(in.begin(), in.end()));
    ComplexTensor tmp = contract(atilde, m, {{2, 0}});
    m = contract(tmp, a.conjugated(), {{0, 0}, {2, 2}});
    std::copy(m.data().begin(), m.data().end(), out.begin());
  };
  EigenPair p = dominant_eigenpair(op, dim * dim, 1e-13, 200000);
  MixedEig out;
  out.eigenvalue = p.eigenvalue;
  out.w = ComplexTensor({dim, dim}, std::move(p.eigenvector));
  out.dominance = p.gap.dominance_ratio;
  if (p.gap.degenerate_warning)
    throw DegenerateDominanceError(
        "symmetry-mixed transfer matrix has a degenerate dominant eigenvalue");
  return out;
}

// Rescale the unit-Frobenius eigen-matrix to a unitary and verify it.
ComplexTensor to_unitary(const ComplexTensor& w, const std::string& what) {
  const i64 dim = w.extent(0);
  ComplexTensor u = w * cx{std::sqrt(static_cast<double>(dim)), 0};
  const ComplexTensor gram = contract(u.conjugated(), u, {{0, 0}});
  const double dev = (gram - ComplexTensor::identity(dim)).norm();
  if (dev > 1e-6)
    throw NumericError(what + ": extracted bond matrix is not unitary (dev " +
                       std::to_string(dev) + ")");
  return u;
}

// Scalar c with expr ~ c I; returns false if expr is not a scalar multiple.
bool scalar_of(const ComplexTensor& expr, cx& c) {
  const i64 dim = expr.extent(0);
  c = expr.trace() / static_cast<double>(dim);
  ComplexTensor dev = expr;
  for (i64 i = 0; i < dim; ++i) dev[i * dim + i] -= c;
  return dev.norm() <= kScalarTol * std::sqrt(static_cast<double>(dim));
}

IndexValue round_z2(cx raw, bool scalar_ok) {
  IndexValue v;
  v.raw = raw;
  if (!scalar_ok) return v;
  const int sign = raw.real() >= 0 ? 1 : -1;
  v.distance = std::abs(raw - static_cast<double>(sign));
  if (v.distance <= kRoundTol) {
    v.rounded = sign;
    v.determinate = true;
  }
  return v;
}

}  // namespace

ComplexTensor block_to_ti(const mps::UnitCellMPS& s) {
  const double resid = mps::canonical_residual(s);
  if (resid > 1e-6)
    throw Error("block_to_ti: state is not in canonical form (residual " +
                std::to_string(resid) + ")");
  const ComplexTensor blob = mps::cell_blob(s, 0, s.k);
  // Injectivity gate on the blocked transfer matrix.
  const MixedEig fp = mixed_dominant(blob, blob);
  if (fp.dominance > 1.0 - 1e-6)
    throw NonInjectiveError("block_to_ti: blocked tensor is not injective");
  return blob;
}

UnitaryExtraction extract_unitary(const ComplexTensor& a,
                                  const sym::SymmetryAction& g) {
  if (g.antiunitary)
    throw Error("extract_unitary: use extract_antiunitary for antiunitary actions");
  if (g.u.extent(0) != a.extent(0))
    throw DimensionError("extract_unitary: action does not match physical leg");
  const ComplexTensor atilde = contract(g.u, a, {{1, 0}});
  const MixedEig eig = mixed_dominant(atilde, a);
  if (std::abs(eig.eigenvalue) < 1.0 - 1e-6)
    throw NotSymmetricError("state is not symmetric under " + g.label +
                            " (dominant modulus " +
                            std::to_string(std::abs(eig.eigenvalue)) + ")");
  // The eigen-matrix is R^{-1}; its adjoint is R for a unitary bond action.
  ComplexTensor r = to_unitary(eig.w, "extract_unitary[" + g.label + "]").adjoint();

  // Phase convention R(g)^2 = I via the principal square root of the scalar.
  cx c;
  if (!scalar_of(matmul(r, r), c) || std::abs(std::abs(c) - 1.0) > kScalarTol)
    throw NotSymmetricError("extract_unitary[" + g.label +
                            "]: R^2 is not proportional to the identity");
  r *= 1.0 / std::sqrt(c);
  return {eig.eigenvalue, std::move(r), eig.dominance};
}

AntiunitaryExtraction extract_antiunitary(const ComplexTensor& a,
                                          const sym::SymmetryAction& tr) {
  if (!tr.antiunitary)
    throw Error("extract_antiunitary: action must be antiunitary");
  if (tr.u.extent(0) != a.extent(0))
    throw DimensionError("extract_antiunitary: action does not match physical leg");
  const ComplexTensor atilde = contract(tr.u, a.conjugated(), {{1, 0}});
  const MixedEig eig = mixed_dominant(atilde, a);
  if (std::abs(eig.eigenvalue) < 1.0 - 1e-6)
    throw NotSymmetricError("state is not time-reversal symmetric (dominant modulus " +
                            std::to_string(std::abs(eig.eigenvalue)) + ")");
  ComplexTensor m = to_unitary(eig.w, "extract_antiunitary").adjoint();

  cx c;
  if (!scalar_of(matmul(m, m.conjugated()), c))
    throw NotSymmetricError(
        "extract_antiunitary: M conj(M) is not proportional to the identity");
  if (std::abs(c) < kScalarTol || std::abs(c.imag()) > kScalarTol * std::abs(c))
    throw NotSymmetricError("extract_antiunitary: M conj(M) phase is not +-1");
  m *= 1.0 / std::sqrt(std::abs(c));
  return {eig.eigenvalue, std::move(m), c / std::abs(c), eig.dominance};
}

IndexValue omega_index(const ComplexTensor& rx, const ComplexTensor& rz) {
  const ComplexTensor expr =
      matmul(matmul(rx.adjoint(), rz.adjoint()), matmul(rx, rz));
  cx c;
  const bool ok = scalar_of(expr, c);
  return round_z2(c, ok);
}

IndexValue beta_index(const ComplexTensor& m) {
  cx c;
  const bool ok = scalar_of(matmul(m, m.conjugated()), c);
  return round_z2(c, ok);
}

IndexValue gamma_index(const ComplexTensor& r, const ComplexTensor& m) {
  // With R phase-fixed to R^2 = I, conj(R)^{-1} = conj(R); M is unitary.
  const ComplexTensor expr =
      matmul(matmul(r.conjugated(), m.adjoint()), matmul(r, m));
  cx c;
  const bool ok = scalar_of(expr, c);
  return round_z2(c, ok);
}

IndexReport extract_indices(const mps::UnitCellMPS& s) {
  IndexReport rep;
  const ComplexTensor a = block_to_ti(s);
  const auto gx = sym::blocked_action(sym::group_action("gx"), s.k);
  const auto gz = sym::blocked_action(sym::group_action("gz"), s.k);
  const auto tr = sym::blocked_action(sym::group_action("T"), s.k);

  const UnitaryExtraction ex = extract_unitary(a, gx);
  const UnitaryExtraction ez = extract_unitary(a, gz);
  const AntiunitaryExtraction et = extract_antiunitary(a, tr);

  rep.alpha_gx = ex.alpha;
  rep.alpha_gz = ez.alpha;
  rep.alpha_t = et.alpha;
  rep.dominance_gx = ex.dominance;
  rep.dominance_gz = ez.dominance;
  rep.dominance_t = et.dominance;
  rep.omega = omega_index(ex.r, ez.r);
  rep.beta = beta_index(et.m);
  rep.gamma_gx = gamma_index(ex.r, et.m);
  rep.gamma_gz = gamma_index(ez.r, et.m);
  return rep;
}

namespace {

// Labels stay comma-free so they embed directly into the sweep CSV.
std::string triple(const IndexReport& r) {
  const auto sgn = [](const IndexValue& v) { return v.rounded > 0 ? "+1" : (v.rounded < 0 ? "-1" : "?"); };
  std::ostringstream os;
  os << "(" << sgn(r.omega) << ";" << sgn(r.gamma_gz) << ";" << sgn(r.gamma_gx) << ")";
  return os.str();
}

bool is(const IndexReport& r, int omega, int gz, int gx) {
  return r.omega.rounded == omega && r.gamma_gz.rounded == gz &&
         r.gamma_gx.rounded == gx;
}

}  // namespace

std::string classify_pair(const IndexReport& left, const IndexReport& right) {
  if (!left.determinate() || !right.determinate()) {
    std::string why;
    if (!left.failure.empty()) why += " L:" + left.failure;
    if (!right.failure.empty()) why += " R:" + right.failure;
    return "unclassified(L=" + triple(left) + ",R=" + triple(right) + why + ")";
  }
  if (is(left, 1, 1, 1) && is(right, 1, 1, 1)) return "Trivial";
  if (is(left, -1, -1, -1) && is(right, -1, -1, -1)) return "Haldane";
  if (is(left, -1, 1, -1) && is(right, -1, -1, -1)) return "CSPT";
  return "other-composite(L=" + triple(left) + ",R=" + triple(right) + ")";
}

double leading_doublet_split(const mps::UnitCellMPS& s, int bond) {
  const std::vector<double> es =
      mps::entanglement_spectrum(s, bond < 0 ? s.k - 1 : bond);
  if (es.size() < 2) return 1.0;
  return (es[0] - es[1]) / es[0];
}

}  // namespace cspt::spt
