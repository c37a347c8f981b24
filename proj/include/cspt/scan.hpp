#pragma once

#include <array>
#include <string>
#include <vector>

#include "cspt/itebd.hpp"
#include "cspt/spt.hpp"

namespace cspt::scan {

struct PhasePoint {
  double lambda = 0, u = 0;
  spt::IndexReport indices_left, indices_right;
  std::string phase_label = "unconverged";
  cx energy_per_site{0, 0};
  double final_residual_left = 0, final_residual_right = 0;
  i64 steps_used = 0;
  bool converged = false;
  double es_doublet_split_left = 1, es_doublet_split_right = 1;
};

struct SweepConfig {
  std::vector<double> lambda_grid, u_grid;
  itebd::EvolutionConfig evolution;
  std::string output_dir = ".";
  bool emit_svg = true;
  int parallelism = 0;  // 0 = OpenMP default
};

/// One grid point end to end: Hamiltonian, both flows, index extraction,
/// classification. Failures are captured in the record, never thrown.
PhasePoint run_point(double lambda, double u, const SweepConfig& cfg);

/// All grid points (parallel over points) plus CSV/JSON/SVG artifacts on
/// disk. Honors the CSPT_OUTPUT_DIR environment override.
std::vector<PhasePoint> run_sweep(const SweepConfig& cfg);

void write_csv(const std::vector<PhasePoint>& points, const std::string& path);
std::vector<PhasePoint> read_csv(const std::string& path);
void write_json(const std::vector<PhasePoint>& points, const std::string& path);

/// Equality on the fields the CSV schema carries.
bool csv_equal(const PhasePoint& a, const PhasePoint& b);

/// 8-bit RGB from raw index values via channel = value / 5 + 0.6.
std::array<int, 3> rgb_channels(double gamma_gz_left, double gamma_gz_right,
                                double omega);

std::string svg_phase_map(const std::vector<PhasePoint>& points);
std::string svg_residual_map(const std::vector<PhasePoint>& points);

/// Flat key = value configuration with [grid], [evolution], [output], [run]
/// sections. Unknown keys are rejected.
SweepConfig load_config(const std::string& path);

std::string index_report_json(const spt::IndexReport& report);

}  // namespace cspt::scan
