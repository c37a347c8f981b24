#include "cspt/parent.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include "cspt/symmetry.hpp"

namespace cspt::parent {

ComplexTensor block_transfer(const ComplexTensor& a, int k) {
  if (a.rank() != 3) throw DimensionError("block_transfer: site tensor must be rank 3");
  if (k < 2) throw DimensionError("block_transfer: k must be >= 2");
  const i64 d = a.extent(0);
  ComplexTensor t = a;  // (d^j, D, D)
  i64 phys = d;
  for (int j = 1; j < k; ++j) {
    t = contract(t, a, {{2, 1}});  // (d^j, Dl, d, Dr)
    static constexpr int perm[4] = {0, 2, 1, 3};
    t = t.permuted(perm);
    phys *= d;
    t = t.reshaped({phys, t.extent(2), t.extent(3)});
  }
  return t.reshaped({phys, t.extent(1) * t.extent(2)});
}

ComplexTensor metric(const ComplexTensor& t_l, const ComplexTensor& t_r) {
  if (t_l.rank() != 2 || t_r.rank() != 2 || t_l.extent(0) != t_r.extent(0))
    throw DimensionError("metric: physical dimensions do not match");
  return contract(t_l.conjugated(), t_r, {{0, 0}});  // (DL^2, DR^2)
}

ProjectorResult local_projector(const ComplexTensor& t_l,
                                const ComplexTensor& t_r, double rel_cutoff) {
  const ComplexTensor g = metric(t_l, t_r);
  PseudoInverseResult inv = pseudo_inverse(g, rel_cutoff);
  const i64 full = std::min(g.extent(0), g.extent(1));
  if (inv.report.numerical_rank < full)
    throw SingularMetricError(
        "local_projector: metric is rank-deficient (" +
            std::to_string(inv.report.numerical_rank) + " of " +
            std::to_string(full) + ")",
        inv.report);
  ComplexTensor p = matmul(matmul(t_r, inv.pinv), t_l.adjoint());
  return {std::move(p), inv.report};
}

ComplexTensor HamiltonianSpec::local_term() const {
  ComplexTensor h = term_00.matrix * cx{1.0 - lambda, 0.0};
  h += term_x0.matrix * cx{lambda, 0.0};
  return h;
}

HamiltonianSpec hamiltonian_spec(double lambda, double u_strength, int k) {
  HamiltonianSpec spec;
  spec.lambda = lambda;
  spec.u_strength = u_strength;
  spec.k = k;
  spec.range_warning = lambda < 0.0 || lambda > 1.0 || u_strength < 0.0;

  const sym::CatalogState psi0 = sym::catalog_state("psi0");
  const sym::CatalogState psix = sym::catalog_state("psix");
  const ComplexTensor t0 = block_transfer(psi0.tensor_sz, k);
  const ComplexTensor tx = block_transfer(psix.tensor_sz, k);
  const i64 dk = t0.extent(0);

  ProjectorResult p00 = local_projector(t0, t0);
  ProjectorResult px0 = local_projector(tx, t0);  // left psix, right psi0
  spec.metric_00 = p00.report;
  spec.metric_x0 = px0.report;

  spec.term_00 = {k, ComplexTensor::identity(dk) - p00.p, "Pi from (psi0, psi0)"};
  spec.term_x0 = {k, ComplexTensor::identity(dk) - px0.p, "Pi from (psix, psi0)"};
  spec.onsite = {1, sym::spin1_matrices().sz2 * cx{u_strength, 0.0}, "U*(Sz)^2"};
  return spec;
}

namespace {

// Add op (d^m square) acting on sites p..p+m-1 (mod n if pbc) into h.
void embed_term(ComplexTensor& h, const ComplexTensor& op, int m, int p, int n,
                i64 d) {
  std::vector<i64> stride(static_cast<size_t>(n));
  i64 s = 1;
  for (int site = n - 1; site >= 0; --site) {
    stride[static_cast<size_t>(site)] = s;
    s *= d;
  }
  const i64 dim = s;

  std::vector<int> window(static_cast<size_t>(m));
  std::vector<char> in_window(static_cast<size_t>(n), 0);
  for (int j = 0; j < m; ++j) {
    window[static_cast<size_t>(j)] = (p + j) % n;
    in_window[static_cast<size_t>((p + j) % n)] = 1;
  }
  std::vector<int> env_sites;
  for (int site = 0; site < n; ++site)
    if (!in_window[static_cast<size_t>(site)]) env_sites.push_back(site);

  i64 dm = 1;
  for (int j = 0; j < m; ++j) dm *= d;
  // Offset of each window configuration within the full index.
  std::vector<i64> woff(static_cast<size_t>(dm), 0);
  for (i64 a = 0; a < dm; ++a) {
    i64 rest = a;
    for (int j = m - 1; j >= 0; --j) {
      woff[static_cast<size_t>(a)] += (rest % d) * stride[static_cast<size_t>(window[static_cast<size_t>(j)])];
      rest /= d;
    }
  }

  i64 env_count = 1;
  for (size_t i = 0; i < env_sites.size(); ++i) env_count *= d;
  for (i64 e = 0; e < env_count; ++e) {
    i64 base = 0;
    i64 rest = e;
    for (int j = static_cast<int>(env_sites.size()) - 1; j >= 0; --j) {
      base += (rest % d) * stride[static_cast<size_t>(env_sites[static_cast<size_t>(j)])];
      rest /= d;
    }
    for (i64 a = 0; a < dm; ++a) {
      const i64 row = base + woff[static_cast<size_t>(a)];
      for (i64 b = 0; b < dm; ++b) {
        const cx v = op[a * dm + b];
        if (v == cx{}) continue;
        h[row * dim + base + woff[static_cast<size_t>(b)]] += v;
      }
    }
  }
}

}  // namespace

ComplexTensor assemble_dense(const HamiltonianSpec& spec, int n_sites, bool pbc) {
  const i64 d = 3;
  if (n_sites < spec.k)
    throw DimensionError("assemble_dense: need at least k sites");
  if (n_sites > 8)
    throw CapacityError("assemble_dense: dense mode is bounded at 8 sites");
  i64 dim = 1;
  for (int i = 0; i < n_sites; ++i) dim *= d;

  ComplexTensor h({dim, dim});
  const ComplexTensor term = spec.local_term();
  const int placements = pbc ? n_sites : n_sites - spec.k + 1;
  for (int p = 0; p < placements; ++p)
    embed_term(h, term, spec.k, p, n_sites, d);
  if (spec.u_strength != 0.0)
    for (int p = 0; p < n_sites; ++p)
      embed_term(h, spec.onsite.matrix, 1, p, n_sites, d);
  return h;
}

void dump_terms(const HamiltonianSpec& spec, std::ostream& os) {
  os.precision(17);
  const auto dump = [&os](const LocalTerm& t) {
    const i64 dim = t.matrix.extent(0);
    os << "term " << t.tag << " span " << t.span << " dim " << dim << "\n";
    for (i64 i = 0; i < dim; ++i) {
      for (i64 j = 0; j < dim; ++j) {
        const cx v = t.matrix[i * dim + j];
        os << v.real() << " " << v.imag() << (j + 1 < dim ? "  " : "");
      }
      os << "\n";
    }
  };
  os << "lambda " << spec.lambda << " u " << spec.u_strength << " k " << spec.k
     << "\n";
  dump(spec.term_00);
  dump(spec.term_x0);
  dump(spec.onsite);
}

}  // namespace cspt::parent
