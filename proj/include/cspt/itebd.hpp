#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cspt/mps.hpp"
#include "cspt/parent.hpp"

namespace cspt::itebd {

struct EvolutionConfig {
  i64 D = 32;
  double dtau = 1e-2;
  double epsilon = 1e-12;
  i64 max_steps = 50000;
  int trotter_order = 1;  // 1 or 2
  std::uint64_t seed = 0;
  std::string init = "random";  // "random", a catalog name, or "checkpoint:<dir>"
  double weight_floor = 1e-12;  // truncation floor relative to s_max
  i64 checkpoint_every = 0;     // 0 = off
  std::string checkpoint_dir = ".";
};

struct GateSet {
  int k = 4;
  int trotter_order = 1;
  bool adjoint = false;
  double dtau = 0;
  ComplexTensor gate_block;   // exp(-step * h) on d^k, step = dtau (order 1) or dtau/2
  ComplexTensor gate_onsite;  // exp(-step * U Sz^2)
};

/// Trotter gates for one time step; the 4-site block term is placement
/// independent, so one matrix serves every alignment. The adjoint set is the
/// conjugate transpose of the forward set.
GateSet build_gates(const parent::HamiltonianSpec& spec, double dtau,
                    bool adjoint, int trotter_order = 1);

/// One full sweep: the on-site gate at every site, then the k-site gate at
/// each alignment a = 0..k-1 (reversed pass appended for second order).
/// Returns the evolved state and the Schmidt-weight change
/// e = sum_ij [s_ij(after) - s_ij(before)]^2 over all bonds.
std::pair<mps::UnitCellMPS, double> sweep_once(const mps::UnitCellMPS& state,
                                               const GateSet& gates, i64 d_max,
                                               double weight_floor);

struct EvolutionResult {
  mps::UnitCellMPS left, right;
  cx energy_per_site{0, 0};
  std::vector<double> residual_left, residual_right;
  i64 steps_used = 0;
  bool converged = false;
  bool measured = false;  // energy measurement succeeded
};

/// Independent imaginary-time flows for |R> (forward gates) and |L>
/// (adjoint gates) from the same initial state. Non-convergence is data,
/// returned with the full residual history.
EvolutionResult find_ground_states(const parent::HamiltonianSpec& spec,
                                   const EvolutionConfig& config);

enum class Verdict { Converged, Plateau, Oscillating, Descending };

struct ResidualVerdict {
  Verdict verdict;
  double final_e = 0;
};

ResidualVerdict residual(std::span<const double> history, double epsilon);
std::string verdict_name(Verdict v);

/// CSV export of the residual histories (step, e_left, e_right).
void write_residual_csv(const EvolutionResult& result, const std::string& path);

}  // namespace cspt::itebd
