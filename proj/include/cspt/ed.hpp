#pragma once

#include <span>
#include <string>
#include <vector>

#include "cspt/parent.hpp"
#include "cspt/tensor.hpp"

namespace cspt::ed {

/// Full dense biorthogonal spectrum. Eigenvalues sorted by ascending real
/// part (then imaginary part); left vectors are the inverse-adjoint columns
/// of the right eigenvector matrix, rescued to <L_i|R_j> = delta_ij.
struct BiorthogonalSpectrum {
  std::vector<cx> eigenvalues;
  ComplexTensor right_vectors;  // dim x dim, i-th column pairs eigenvalues[i]
  ComplexTensor left_vectors;
  double pairing_residual = 0;     // max |<L_i|R_i> - 1| before rescue
  bool exceptional_warning = false;  // pairing_residual > 1e-6
};

BiorthogonalSpectrum full_spectrum(const ComplexTensor& h);

struct GroundPair {
  cx e0;
  std::vector<cx> right, left;
  double gap_real = 0;  // next distinct real part minus Re e0
  bool degenerate = false;
  std::vector<cx> manifold;  // ground manifold eigenvalues when degenerate
};

/// Eigenvalue with minimal real part; ties within 1e-10 resolved by minimal
/// |imag|, then by sort order.
GroundPair ground_pair(const ComplexTensor& h);

struct CrossingSample {
  double lambda;
  cx e0;
};

struct CrossingScan {
  bool found = false;
  double lambda_star = 0;  // resolved to 1e-3 by bisection
  std::vector<CrossingSample> samples;
};

/// Locate where Re E0 of H0(lambda) at n_sites (PBC) departs from zero
/// beyond 1e-8. An absent crossing is a report, not an error.
CrossingScan level_crossing_scan(std::span<const double> lambda_grid,
                                 int n_sites, double u_strength = 0.0);

/// CSV export (columns: re, im, index).
void export_spectrum_csv(const BiorthogonalSpectrum& spec, const std::string& path);

}  // namespace cspt::ed
