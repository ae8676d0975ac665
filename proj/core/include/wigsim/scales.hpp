#pragma once

#include <vector>

#include "wigsim/moyal.hpp"
#include "wigsim/transform.hpp"

namespace wigsim {

// 2-D multiresolution analysis of a phase-space field.
Decomposition2d decompose(const CoefficientField& field, const WaveletFamily& family,
                          int coarse_level);

struct ScaleEnergyRow {
  int level;       // -1 denotes the coarse block
  double energy;
  double fraction;
};

std::vector<ScaleEnergyRow> energy_table(const Decomposition2d& decomp);

// Slow/fast splitting: the slow part keeps the coarse block and all detail
// levels below n_slow; each remaining level becomes one fast component with
// nominal frequency label 2^level.
struct FastComponent {
  int level = 0;
  double nominal_frequency = 0.0;
  CoefficientField component;
  double energy = 0.0;
};

struct ScaleDecomposition {
  CoefficientField slow_part;
  std::vector<FastComponent> fast_parts;
  double reconstruction_error = 0.0;
};

ScaleDecomposition slow_fast_split(const CoefficientField& field,
                                   const WaveletFamily& family, int n_slow,
                                   int coarse_level = 0);

// Truncated state list with the direct-sum norm
//   |W| = sqrt(w0^2 + sum_i |W_i|^2_mu),
// where each component norm is the weighted quadrature L2 norm.
struct FockComponent {
  std::vector<double> data;
  std::vector<int> dims;
  std::vector<double> axis_weights;  // one Lebesgue cell weight per axis

  double cell_weight() const;
  bool same_geometry(const FockComponent& other) const;
};

struct FockStateList {
  double vacuum = 0.0;  // W_0
  std::vector<FockComponent> components;
};

FockComponent fock_component(const CoefficientField& field);
double fock_norm(const FockStateList& list);

// Fock-norm distance between two single-particle fields on identical grids.
double fock_distance(const CoefficientField& a, const CoefficientField& b);

// Restriction to the next-coarser dyadic grid by decimation (grids at N and
// 2N share every second node exactly).
CoefficientField restrict_halve(const CoefficientField& field);

}  // namespace wigsim
