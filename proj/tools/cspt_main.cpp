// Command-line front end: index extraction, parent-Hamiltonian inspection,
// dense ED, iTEBD evolution, (lambda, U) sweeps, and SVG plotting.

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cspt/ed.hpp"
#include "cspt/itebd.hpp"
#include "cspt/mps.hpp"
#include "cspt/parent.hpp"
#include "cspt/scan.hpp"
#include "cspt/spt.hpp"
#include "cspt/symmetry.hpp"

namespace {

using namespace cspt;

int sign_str(const spt::IndexValue& v, std::ostream& os) {
  if (v.rounded > 0)
    os << "+1";
  else if (v.rounded < 0)
    os << "-1";
  else
    os << " ?";
  return 0;
}

void print_report(const std::string& name, const spt::IndexReport& rep) {
  std::cout << name << ": (omega, beta, gamma_gx, gamma_gz) = (";
  sign_str(rep.omega, std::cout);
  std::cout << ", ";
  sign_str(rep.beta, std::cout);
  std::cout << ", ";
  sign_str(rep.gamma_gx, std::cout);
  std::cout << ", ";
  sign_str(rep.gamma_gz, std::cout);
  std::cout << ")\n";
  std::cout << "  rounding distances: " << rep.omega.distance << " "
            << rep.beta.distance << " " << rep.gamma_gx.distance << " "
            << rep.gamma_gz.distance << "\n";
  std::cout << "  transfer dominance |l2/l1|: gx " << rep.dominance_gx << ", gz "
            << rep.dominance_gz << ", T " << rep.dominance_t << "\n";
}

int cmd_indices(const std::string& state, const std::string& json_out, int k) {
  mps::UnitCellMPS s;
  const bool is_file = std::filesystem::exists(state) ||
                       state.find(".mps") != std::string::npos;
  if (is_file) {
    s = mps::canonicalize(mps::load_mps(state));
  } else {
    s = mps::from_tensor(sym::catalog_state(state).tensor_sz, k);
  }
  const spt::IndexReport rep = spt::extract_indices(s);
  print_report(state, rep);
  if (!json_out.empty()) {
    std::ofstream os(json_out);
    os << scan::index_report_json(rep) << "\n";
    if (!os) throw Error("cannot write " + json_out);
  }
  return 0;
}

int cmd_parent(double lambda, double u, const std::string& dump_path) {
  const parent::HamiltonianSpec spec = parent::hamiltonian_spec(lambda, u);
  if (spec.range_warning)
    std::cerr << "warning: (lambda, U) outside the [0,1] x [0,inf) box\n";
  const ComplexTensor h = spec.local_term();
  const ComplexTensor herm_dev = h - h.adjoint();
  std::cout << "H(lambda=" << lambda << ", U=" << u << "), k=" << spec.k << "\n";
  std::cout << "  term dim " << h.extent(0) << ", ||h - h^dag|| = "
            << herm_dev.norm() << "\n";
  std::cout << "  metric(psi0,psi0): rank " << spec.metric_00.numerical_rank
            << ", sigma_max " << spec.metric_00.sigma_max << ", sigma_min "
            << spec.metric_00.sigma_min
            << (spec.metric_00.conditioning_warning ? " [conditioning warning]" : "")
            << "\n";
  std::cout << "  metric(psix,psi0): rank " << spec.metric_x0.numerical_rank
            << ", sigma_max " << spec.metric_x0.sigma_max << ", sigma_min "
            << spec.metric_x0.sigma_min
            << (spec.metric_x0.conditioning_warning ? " [conditioning warning]" : "")
            << "\n";
  if (!dump_path.empty()) {
    std::ofstream os(dump_path);
    parent::dump_terms(spec, os);
    if (!os) throw Error("cannot write " + dump_path);
    std::cout << "  terms dumped to " << dump_path << "\n";
  }
  return 0;
}

int cmd_ed(int n, double lambda, double u, bool pbc, const std::string& csv) {
  const parent::HamiltonianSpec spec = parent::hamiltonian_spec(lambda, u);
  const ComplexTensor h = parent::assemble_dense(spec, n, pbc);
  const ed::BiorthogonalSpectrum full = ed::full_spectrum(h);
  const ed::GroundPair gp = ed::ground_pair(h);
  std::cout << "N=" << n << (pbc ? " PBC" : " OBC") << ", dim " << h.extent(0)
            << "\n";
  std::cout << "E0 = " << gp.e0.real() << (gp.e0.imag() < 0 ? " - " : " + ")
            << std::abs(gp.e0.imag()) << "i\n";
  std::cout << "gap(Re) = " << gp.gap_real << "\n";
  std::cout << "pairing residual = " << full.pairing_residual
            << (full.exceptional_warning ? " [exceptional-point warning]" : "")
            << "\n";
  if (gp.degenerate)
    std::cout << "ground manifold degenerate: " << gp.manifold.size()
              << " states\n";
  if (!csv.empty()) {
    ed::export_spectrum_csv(full, csv);
    std::cout << "spectrum written to " << csv << "\n";
  }
  return 0;
}

int cmd_evolve(double lambda, double u, const itebd::EvolutionConfig& cfg,
               const std::string& residual_csv, const std::string& save_left,
               const std::string& save_right, bool with_indices) {
  const parent::HamiltonianSpec spec = parent::hamiltonian_spec(lambda, u);
  if (spec.range_warning)
    std::cerr << "warning: (lambda, U) outside the [0,1] x [0,inf) box\n";
  const itebd::EvolutionResult res = itebd::find_ground_states(spec, cfg);
  std::cout << "converged = " << (res.converged ? "yes" : "no") << " after "
            << res.steps_used << " steps\n";
  std::cout << "final residuals: e_L = "
            << (res.residual_left.empty() ? 0.0 : res.residual_left.back())
            << ", e_R = "
            << (res.residual_right.empty() ? 0.0 : res.residual_right.back())
            << "\n";
  std::cout << "energy per site = " << res.energy_per_site.real()
            << (res.energy_per_site.imag() < 0 ? " - " : " + ")
            << std::abs(res.energy_per_site.imag()) << "i\n";
  if (with_indices && res.measured) {
    const spt::IndexReport l = spt::extract_indices(res.left);
    const spt::IndexReport r = spt::extract_indices(res.right);
    print_report("left", l);
    print_report("right", r);
    std::cout << "phase label: " << spt::classify_pair(l, r) << "\n";
  }
  if (!residual_csv.empty()) itebd::write_residual_csv(res, residual_csv);
  if (!save_left.empty()) mps::save_mps(res.left, save_left);
  if (!save_right.empty()) mps::save_mps(res.right, save_right);
  return 0;
}

int cmd_sweep(const std::string& config_path) {
  const scan::SweepConfig cfg = scan::load_config(config_path);
  const std::vector<scan::PhasePoint> points = scan::run_sweep(cfg);
  size_t converged = 0;
  for (const auto& p : points) converged += p.converged ? 1 : 0;
  std::cout << points.size() << " points, " << converged << " converged\n";
  std::string out_dir = cfg.output_dir;
  if (const char* env = std::getenv("CSPT_OUTPUT_DIR"); env && *env) out_dir = env;
  std::cout << "artifacts in " << out_dir << "\n";
  return 0;
}

int cmd_plot(const std::string& input, const std::string& out_dir) {
  const std::vector<scan::PhasePoint> points = scan::read_csv(input);
  std::filesystem::create_directories(out_dir);
  std::ofstream p(out_dir + "/phase_map.svg");
  p << scan::svg_phase_map(points);
  std::ofstream r(out_dir + "/residual_map.svg");
  r << scan::svg_residual_map(points);
  if (!p || !r) throw Error("cannot write SVG files to " + out_dir);
  std::cout << "wrote " << out_dir << "/phase_map.svg and residual_map.svg\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian parent-Hamiltonian ground states and SPT phase maps"};
  app.require_subcommand(1);

  // indices
  std::string state, json_out;
  int block_k = 1;
  auto* indices = app.add_subcommand("indices", "SPT indices of a catalog state or MPS file");
  indices->add_option("state", state, "catalog name (psi0|psix|psiy|psiz|aklt|trivial) or .mps path")->required();
  indices->add_option("--json", json_out, "write the full report as JSON");
  indices->add_option("--k", block_k, "unit-cell length for catalog states")->default_val(1);

  // parent
  double lambda = 0, u = 0;
  std::string dump_path;
  auto* parent_cmd = app.add_subcommand("parent", "Inspect the parent Hamiltonian construction");
  parent_cmd->add_option("--lambda", lambda, "interpolation parameter")->required();
  parent_cmd->add_option("--u", u, "on-site (Sz)^2 strength")->required();
  parent_cmd->add_option("--dump", dump_path, "dump local terms as structured text");

  // ed
  int n_sites = 6;
  bool pbc = true;
  std::string spectrum_csv;
  auto* ed_cmd = app.add_subcommand("ed", "Dense biorthogonal exact diagonalization");
  ed_cmd->add_option("--n", n_sites, "chain length (<= 8)")->required();
  ed_cmd->add_option("--lambda", lambda, "interpolation parameter")->required();
  ed_cmd->add_option("--u", u, "on-site strength")->required();
  ed_cmd->add_flag("--pbc,!--no-pbc", pbc, "periodic boundary (default on)");
  ed_cmd->add_option("--csv", spectrum_csv, "export spectrum CSV (re, im, index)");

  // evolve
  itebd::EvolutionConfig evo;
  std::string residual_csv, save_left, save_right;
  bool with_indices = true;
  auto* evolve = app.add_subcommand("evolve", "Biorthogonal iTEBD ground-state search");
  evolve->add_option("--lambda", lambda, "interpolation parameter")->required();
  evolve->add_option("--u", u, "on-site strength")->required();
  evolve->add_option("--bond-dim,-D", evo.D, "max bond dimension")->default_val(32);
  evolve->add_option("--dtau", evo.dtau, "imaginary time step")->default_val(1e-2);
  evolve->add_option("--epsilon", evo.epsilon, "Schmidt-residual convergence threshold")->default_val(1e-12);
  evolve->add_option("--max-steps", evo.max_steps, "step budget")->default_val(50000);
  evolve->add_option("--trotter-order", evo.trotter_order, "1 or 2")->default_val(1);
  evolve->add_option("--seed", evo.seed, "RNG seed for the initial state")->default_val(0);
  evolve->add_option("--init", evo.init, "random | catalog name | checkpoint:<dir>")->default_val("random");
  evolve->add_option("--weight-floor", evo.weight_floor, "relative truncation floor")->default_val(1e-12);
  evolve->add_option("--checkpoint-every", evo.checkpoint_every, "dump both MPS every n steps (0 = off)")->default_val(0);
  evolve->add_option("--checkpoint-dir", evo.checkpoint_dir, "checkpoint directory")->default_val(".");
  evolve->add_option("--residual-csv", residual_csv, "write residual history CSV");
  evolve->add_option("--save-left", save_left, "write the converged left MPS");
  evolve->add_option("--save-right", save_right, "write the converged right MPS");
  evolve->add_flag("--indices,!--no-indices", with_indices, "extract SPT indices (default on)");

  // sweep
  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "(lambda, U) grid sweep from a config file");
  sweep->add_option("--config", config_path, "sweep configuration file")->required();

  // plot
  std::string plot_input, plot_dir = ".";
  auto* plot = app.add_subcommand("plot", "Re-emit SVG maps from a results CSV");
  plot->add_option("--input", plot_input, "results.csv from a sweep")->required();
  plot->add_option("--output-dir", plot_dir, "where to write the SVG files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion")
      return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(indices)) return cmd_indices(state, json_out, block_k);
    if (app.got_subcommand(parent_cmd)) return cmd_parent(lambda, u, dump_path);
    if (app.got_subcommand(ed_cmd)) return cmd_ed(n_sites, lambda, u, pbc, spectrum_csv);
    if (app.got_subcommand(evolve))
      return cmd_evolve(lambda, u, evo, residual_csv, save_left, save_right, with_indices);
    if (app.got_subcommand(sweep)) return cmd_sweep(config_path);
    if (app.got_subcommand(plot)) return cmd_plot(plot_input, plot_dir);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
