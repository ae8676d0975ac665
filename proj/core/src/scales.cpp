#include "wigsim/scales.hpp"

#include <cmath>

#include "wigsim/errors.hpp"

namespace wigsim {

Decomposition2d decompose(const CoefficientField& field, const WaveletFamily& family,
                          int coarse_level) {
  return fwt_2d(field.data, family, coarse_level);
}

std::vector<ScaleEnergyRow> energy_table(const Decomposition2d& decomp) {
  std::vector<ScaleEnergyRow> rows;
  const double total = decomp.total_energy();
  const double denom = total > 0.0 ? total : 1.0;
  rows.push_back({-1, decomp.coarse_energy(), decomp.coarse_energy() / denom});
  for (int j = decomp.coarse_level; j < decomp.finest_level; ++j) {
    const double e = decomp.detail_energy(j);
    rows.push_back({j, e, e / denom});
  }
  return rows;
}

ScaleDecomposition slow_fast_split(const CoefficientField& field,
                                   const WaveletFamily& family, int n_slow,
                                   int coarse_level) {
  Decomposition2d decomp = fwt_2d(field.data, family, coarse_level);
  if (n_slow < coarse_level || n_slow >= decomp.finest_level)
    throw config_error("slow_fast_split: split level " + std::to_string(n_slow) +
                       " must satisfy c <= N_slow < " +
                       std::to_string(decomp.finest_level));

  const int rows = static_cast<int>(decomp.coeffs.rows());
  const int cols = static_cast<int>(decomp.coeffs.cols());
  // The scale-(2^j) annulus of the standard form: indices with
  // max-scale == j, i.e. row or column in [2^j, 2^{j+1}).
  auto annulus_mask = [&](int j, Eigen::MatrixXd& mask) {
    mask.setZero(rows, cols);
    const int r0 = std::min(1 << j, rows), r1 = std::min(2 << j, rows);
    const int c0 = std::min(1 << j, cols), c1 = std::min(2 << j, cols);
    if (r1 > r0) mask.block(r0, 0, r1 - r0, std::min(c1, cols)).setOnes();
    if (c1 > c0) mask.block(0, c0, std::min(r1, rows), c1 - c0).setOnes();
  };

  ScaleDecomposition out;
  {
    Decomposition2d slow = decomp;
    const int keep_r = std::min(1 << n_slow, rows);
    const int keep_c = std::min(1 << n_slow, cols);
    Eigen::MatrixXd kept = slow.coeffs.block(0, 0, keep_r, keep_c);
    slow.coeffs.setZero();
    slow.coeffs.block(0, 0, keep_r, keep_c) = kept;
    out.slow_part = field;
    out.slow_part.data = fwt_2d_inverse(slow, family);
  }
  Eigen::MatrixXd mask;
  for (int j = n_slow; j < decomp.finest_level; ++j) {
    annulus_mask(j, mask);
    Decomposition2d single = decomp;
    single.coeffs = decomp.coeffs.cwiseProduct(mask);
    FastComponent part;
    part.level = j;
    part.nominal_frequency = std::ldexp(1.0, j);
    part.component = field;
    part.component.data = fwt_2d_inverse(single, family);
    part.energy = decomp.detail_energy(j);
    out.fast_parts.push_back(std::move(part));
  }

  Eigen::MatrixXd sum = out.slow_part.data;
  for (const auto& part : out.fast_parts) sum += part.component.data;
  const double denom = field.data.norm();
  out.reconstruction_error =
      denom > 0.0 ? (sum - field.data).norm() / denom : (sum - field.data).norm();
  return out;
}

double FockComponent::cell_weight() const {
  double w = 1.0;
  for (double a : axis_weights) w *= a;
  return w;
}

bool FockComponent::same_geometry(const FockComponent& other) const {
  return dims == other.dims && axis_weights == other.axis_weights;
}

FockComponent fock_component(const CoefficientField& field) {
  FockComponent c;
  c.dims = {field.grid.nq(), field.grid.np()};
  c.axis_weights = {field.grid.dq(), field.grid.dp()};
  c.data.reserve(static_cast<std::size_t>(field.grid.nq()) * field.grid.np());
  for (int i = 0; i < field.grid.nq(); ++i)
    for (int j = 0; j < field.grid.np(); ++j) c.data.push_back(field.data(i, j));
  return c;
}

double fock_norm(const FockStateList& list) {
  double acc = list.vacuum * list.vacuum;
  for (const auto& c : list.components) {
    std::size_t expected = 1;
    for (int d : c.dims) expected *= static_cast<std::size_t>(d);
    if (expected != c.data.size() || c.dims.size() != c.axis_weights.size())
      throw config_error("fock_norm: component geometry is inconsistent");
    double e = 0.0;
    for (double v : c.data) e += v * v;
    acc += c.cell_weight() * e;
  }
  return std::sqrt(acc);
}

double fock_distance(const CoefficientField& a, const CoefficientField& b) {
  FockComponent ca = fock_component(a);
  FockComponent cb = fock_component(b);
  if (!ca.same_geometry(cb))
    throw config_error("fock_distance: fields live on different grids");
  for (std::size_t i = 0; i < ca.data.size(); ++i) ca.data[i] -= cb.data[i];
  FockStateList diff;
  diff.components.push_back(std::move(ca));
  return fock_norm(diff);
}

CoefficientField restrict_halve(const CoefficientField& field) {
  const auto& g = field.grid;
  if (g.jq < 2 || g.jp < 2 || g.nq() / 2 < 32 || g.np() / 2 < 32)
    throw config_error("restrict_halve: grid too coarse to halve");
  PhaseSpaceGrid half =
      PhaseSpaceGrid::create(g.q0, g.lq, g.p0, g.lp, g.jq - 1, g.jp - 1, g.hbar, g.mass);
  CoefficientField out = zero_field(half);
  out.time = field.time;
  for (int i = 0; i < half.nq(); ++i)
    for (int j = 0; j < half.np(); ++j) out.data(i, j) = field.data(2 * i, 2 * j);
  return out;
}

}  // namespace wigsim
