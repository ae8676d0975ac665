#pragma once

#include <vector>

#include "wigsim/moyal.hpp"

namespace wigsim {

struct DiagnosticsReport {
  double time = 0.0;
  double normalization = 0.0;
  double purity = 0.0;            // 2 pi hbar * integral of W^2
  double negativity_volume = 0.0; // integral of max(-W, 0)
  double energy = 0.0;            // integral of (p^2/2m + U(q)) W
  std::vector<double> position_marginal;
  std::vector<double> momentum_marginal;
  double boundary_mass = 0.0;     // |W| mass within 4 filter widths of the seam
};

// All integrals use the one-point quadrature of the coefficient grid.
// `filter_taps` sets the seam band for boundary_mass (4 * (taps-1) cells).
DiagnosticsReport report(const CoefficientField& field, const Potential& potential,
                         int filter_taps = 12);

// Coherent-state evolution under U = m w^2 q^2 / 2: the Gaussian rotates
// rigidly with stationary widths. Exact solution used as the oracle.
CoefficientField oracle_harmonic(double q_center, double p_center, double omega,
                                 double t, const PhaseSpaceGrid& grid);

// Even two-component superposition located at q = +/- separation/2 with the
// interference fringe; width parameter follows the local frequency omega.
// Normalized on the grid.
CoefficientField oracle_cat(double separation, double omega, const PhaseSpaceGrid& grid);

// Classical Gibbs-like state exp(-H/theta)/Z for H = p^2/2m + U(q).
CoefficientField gibbs_state(const Potential& potential, double theta,
                             const PhaseSpaceGrid& grid);

// Relative L2 distance |a-b| / max(|a|, |b|); 0 when both vanish.
double compare(const CoefficientField& a, const CoefficientField& b);

// phase-space radius around the centroid containing `fraction` of |W| mass
double mass_radius(const CoefficientField& field, double fraction);

}  // namespace wigsim
