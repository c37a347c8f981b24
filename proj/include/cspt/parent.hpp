#pragma once

#include <iosfwd>

#include "cspt/linalg.hpp"
#include "cspt/local_term.hpp"
#include "cspt/tensor.hpp"

namespace cspt::parent {

/// k-site block map from boundary-bond space to the k-site physical space:
/// T[(i1..ik), (alpha,beta)] = (A^{i1} ... A^{ik})_{alpha beta}.
ComplexTensor block_transfer(const ComplexTensor& a, int k);

/// Metric operator G = T_L^dagger T_R.
ComplexTensor metric(const ComplexTensor& t_l, const ComplexTensor& t_r);

struct ProjectorResult {
  ComplexTensor p;  // oblique projector T_R G^{-1} T_L^dagger
  ConditionReport report;
};

/// Local support projector; hard-fails with SingularMetricError when the
/// metric is rank-deficient at rel_cutoff (no silent regularization).
ProjectorResult local_projector(const ComplexTensor& t_l,
                                const ComplexTensor& t_r,
                                double rel_cutoff = 1e-10);

/// H(lambda, U) data: 4-site interpolated term plus the on-site potential.
struct HamiltonianSpec {
  double lambda = 0;
  double u_strength = 0;
  LocalTerm term_00;  // I - P from the (psi0, psi0) pair
  LocalTerm term_x0;  // I - P from the (psix left, psi0 right) pair
  LocalTerm onsite;   // U * (Sz)^2, span 1
  int k = 4;
  bool range_warning = false;  // lambda outside [0,1] or U < 0
  ConditionReport metric_00, metric_x0;

  /// Per-placement local term (1-lambda) Pi_00 + lambda Pi_x0.
  ComplexTensor local_term() const;
};

HamiltonianSpec hamiltonian_spec(double lambda, double u_strength, int k = 4);

/// Dense sum of the k-site term at every placement (wrapping iff pbc) plus
/// the on-site term at every site. Bounded at 3^8.
ComplexTensor assemble_dense(const HamiltonianSpec& spec, int n_sites, bool pbc);

/// Structured-text dump of the local terms (dimensions + complex entries).
void dump_terms(const HamiltonianSpec& spec, std::ostream& os);

}  // namespace cspt::parent
