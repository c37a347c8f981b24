#include "cspt/itebd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "cspt/symmetry.hpp"

namespace cspt::itebd {

namespace {

// Schmidt-weight distance sum_ij [s_ij(new) - s_ij(old)]^2, zero-padded.
double schmidt_change(const std::vector<std::vector<double>>& before,
                      const std::vector<std::vector<double>>& after) {
  double e = 0;
  for (size_t b = 0; b < before.size(); ++b) {
    const size_t n = std::max(before[b].size(), after[b].size());
    for (size_t j = 0; j < n; ++j) {
      const double so = j < before[b].size() ? before[b][j] : 0.0;
      const double sn = j < after[b].size() ? after[b][j] : 0.0;
      e += (sn - so) * (sn - so);
    }
  }
  return e;
}

void apply_onsite(mps::UnitCellMPS& s, const ComplexTensor& gate) {
  for (int i = 0; i < s.k; ++i)
    s.gammas[static_cast<size_t>(i)] =
        contract(gate, s.gammas[static_cast<size_t>(i)], {{1, 0}});
}

// Apply the k-site gate across sites a..a+k-1 (periodic) and re-factorize.
void apply_block(mps::UnitCellMPS& s, int a, const ComplexTensor& gate,
                 i64 d_max, double weight_floor) {
  const int k = s.k;
  const auto& lam_left = s.lambdas[static_cast<size_t>(s.bond_index(a - 1))];
  const auto& lam_right = s.lambdas[static_cast<size_t>(s.bond_index(a + k - 1))];

  ComplexTensor theta = ComplexTensor::diagonal(lam_left);
  for (int j = 0; j < k; ++j) {
    const int i = s.bond_index(a + j);
    theta = contract(theta, s.gammas[static_cast<size_t>(i)], {{theta.rank() - 1, 1}});
    theta = mps::scale_axis(theta, theta.rank() - 1, s.lambdas[static_cast<size_t>(i)]);
  }
  i64 phys = 1;
  for (int j = 0; j < k; ++j) phys *= s.d;
  theta = theta.reshaped({theta.extent(0), phys, theta.extent(theta.rank() - 1)});

  static constexpr int perm[3] = {1, 0, 2};
  theta = contract(gate, theta, {{1, 1}}).permuted(perm);

  mps::WindowSplit split =
      mps::split_window(theta, lam_left, lam_right, k, s.d, d_max, weight_floor);
  for (int j = 0; j < k; ++j)
    s.gammas[static_cast<size_t>(s.bond_index(a + j))] = std::move(split.gammas[static_cast<size_t>(j)]);
  for (int j = 0; j < k - 1; ++j)
    s.lambdas[static_cast<size_t>(s.bond_index(a + j))] = std::move(split.lambdas[static_cast<size_t>(j)]);
  s.refresh_max_bond();
}

}  // namespace

GateSet build_gates(const parent::HamiltonianSpec& spec, double dtau,
                    bool adjoint, int trotter_order) {
  if (trotter_order != 1 && trotter_order != 2)
    throw Error("build_gates: trotter_order must be 1 or 2");
  const double step = trotter_order == 2 ? 0.5 * dtau : dtau;
  ComplexTensor h = spec.local_term();
  ComplexTensor onsite = spec.onsite.matrix;
  if (adjoint) {
    h = h.adjoint();
    onsite = onsite.adjoint();
  }
  GateSet g;
  g.k = spec.k;
  g.trotter_order = trotter_order;
  g.adjoint = adjoint;
  g.dtau = dtau;
  g.gate_block = matrix_exponential(h, cx{-step, 0});
  g.gate_onsite = matrix_exponential(onsite, cx{-step, 0});
  return g;
}

std::pair<mps::UnitCellMPS, double> sweep_once(const mps::UnitCellMPS& state,
                                               const GateSet& gates, i64 d_max,
                                               double weight_floor) {
  mps::UnitCellMPS s = state;
  const auto before = s.lambdas;
  apply_onsite(s, gates.gate_onsite);
  for (int a = 0; a < s.k; ++a)
    apply_block(s, a, gates.gate_block, d_max, weight_floor);
  if (gates.trotter_order == 2) {
    for (int a = s.k - 1; a >= 0; --a)
      apply_block(s, a, gates.gate_block, d_max, weight_floor);
    apply_onsite(s, gates.gate_onsite);
  }
  return {std::move(s), schmidt_change(before, s.lambdas)};
}

namespace {

mps::UnitCellMPS initial_state(const parent::HamiltonianSpec& spec,
                               const EvolutionConfig& config, bool left_side) {
  if (config.init.rfind("checkpoint:", 0) == 0) {
    const std::string dir = config.init.substr(11);
    return mps::load_mps(dir + (left_side ? "/left.mps" : "/right.mps"));
  }
  if (config.init == "random")
    return mps::random_mps(3, std::min<i64>(config.D, 8), spec.k, config.seed);
  return mps::from_tensor(sym::catalog_state(config.init).tensor_sz, spec.k);
}

cx measure_energy(const mps::UnitCellMPS& left, const mps::UnitCellMPS& right,
                  const parent::HamiltonianSpec& spec) {
  const LocalTerm block{spec.k, spec.local_term(), "h(lambda)"};
  cx e = mps::measure_local(left, right, block);
  if (spec.u_strength != 0.0) e += mps::measure_local(left, right, spec.onsite);
  return e;
}

}  // namespace

EvolutionResult find_ground_states(const parent::HamiltonianSpec& spec,
                                   const EvolutionConfig& config) {
  if (config.D < 2 || config.dtau <= 0 || config.epsilon <= 0)
    throw Error("find_ground_states: invalid evolution config");
  const GateSet fwd = build_gates(spec, config.dtau, false, config.trotter_order);
  const GateSet adj = build_gates(spec, config.dtau, true, config.trotter_order);

  EvolutionResult res;
  res.right = initial_state(spec, config, false);
  res.left = initial_state(spec, config, true);

  bool collapsed = false;
  std::string collapse_what;
  for (i64 step = 1; step <= config.max_steps; ++step) {
    double e_r = 0, e_l = 0;
#pragma omp parallel sections
    {
#pragma omp section
      {
        try {
          auto [sr, er] = sweep_once(res.right, fwd, config.D, config.weight_floor);
          res.right = std::move(sr);
          e_r = er;
        } catch (const Error& err) {
#pragma omp critical
          {
            collapsed = true;
            collapse_what = err.what();
          }
        }
      }
#pragma omp section
      {
        try {
          auto [sl, el] = sweep_once(res.left, adj, config.D, config.weight_floor);
          res.left = std::move(sl);
          e_l = el;
        } catch (const Error& err) {
#pragma omp critical
          {
            collapsed = true;
            collapse_what = err.what();
          }
        }
      }
    }
    if (collapsed) throw StateCollapseError("evolution aborted: " + collapse_what);
    res.residual_left.push_back(e_l);
    res.residual_right.push_back(e_r);
    res.steps_used = step;

    if (config.checkpoint_every > 0 && step % config.checkpoint_every == 0) {
      mps::save_mps(res.left, config.checkpoint_dir + "/left.mps");
      mps::save_mps(res.right, config.checkpoint_dir + "/right.mps");
    }
    if (e_l <= config.epsilon && e_r <= config.epsilon) {
      res.converged = true;
      break;
    }
  }

  // Measurement happens on fully re-canonicalized states; biorthogonality
  // breakdown there is an error for converged runs and a data point for
  // unconverged ones.
  try {
    res.left = mps::canonicalize(res.left);
    res.right = mps::canonicalize(res.right);
    res.energy_per_site = measure_energy(res.left, res.right, spec);
    res.measured = true;
  } catch (const Error&) {
    if (res.converged) throw;
    res.energy_per_site = cx{std::nan(""), std::nan("")};
  }
  return res;
}

ResidualVerdict residual(std::span<const double> history, double epsilon) {
  if (history.empty()) throw Error("residual: empty history");
  ResidualVerdict v;
  v.final_e = history.back();
  if (v.final_e <= epsilon) {
    v.verdict = Verdict::Converged;
    return v;
  }
  const size_t tail = std::max<size_t>(4, std::min<size_t>(500, history.size() / 4));
  const size_t begin = history.size() - std::min(tail, history.size());
  double lo = history[begin], hi = history[begin];
  size_t flips = 0;
  for (size_t i = begin; i < history.size(); ++i) {
    lo = std::min(lo, history[i]);
    hi = std::max(hi, history[i]);
    if (i >= begin + 2) {
      const double d1 = history[i - 1] - history[i - 2];
      const double d2 = history[i] - history[i - 1];
      if (d1 * d2 < 0) ++flips;
    }
  }
  const size_t span = history.size() - begin;
  if (span >= 3 && flips > span / 2 && hi > 4.0 * lo) {
    v.verdict = Verdict::Oscillating;
  } else if (hi <= 1.26 * std::max(lo, 1e-300)) {
    // Less than 0.1 decade of total movement over the tail.
    v.verdict = Verdict::Plateau;
  } else if (history.back() < history[begin]) {
    v.verdict = Verdict::Descending;
  } else {
    v.verdict = Verdict::Plateau;
  }
  return v;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Plateau: return "plateau";
    case Verdict::Oscillating: return "oscillating";
    case Verdict::Descending: return "descending";
  }
  return "unknown";
}

void write_residual_csv(const EvolutionResult& result, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open for writing: " + path);
  os << "step,e_left,e_right\n";
  os.precision(17);
  for (size_t i = 0; i < result.residual_left.size(); ++i)
    os << (i + 1) << "," << result.residual_left[i] << ","
       << result.residual_right[i] << "\n";
  if (!os) throw Error("write failed: " + path);
}

}  // namespace cspt::itebd
