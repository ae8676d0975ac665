#include "wigsim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wigsim/errors.hpp"

namespace wigsim {

DiagnosticsReport report(const CoefficientField& field, const Potential& potential,
                         int filter_taps) {
  const auto& g = field.grid;
  const auto& w = field.data;
  DiagnosticsReport r;
  r.time = field.time;
  r.normalization = g.cell() * w.sum();
  r.purity = 2.0 * std::numbers::pi * g.hbar * g.cell() * w.squaredNorm();
  r.negativity_volume = g.cell() * (-w.array()).max(0.0).sum();

  double energy = 0.0;
  for (int i = 0; i < g.nq(); ++i) {
    const double uq = potential.value(g.q(i));
    for (int j = 0; j < g.np(); ++j) {
      const double p = g.p(j);
      energy += (p * p / (2.0 * g.mass) + uq) * w(i, j);
    }
  }
  r.energy = energy * g.cell();

  r.position_marginal.resize(g.nq());
  for (int i = 0; i < g.nq(); ++i) r.position_marginal[i] = g.dp() * w.row(i).sum();
  r.momentum_marginal.resize(g.np());
  for (int j = 0; j < g.np(); ++j) r.momentum_marginal[j] = g.dq() * w.col(j).sum();

  const int band = 4 * (filter_taps - 1);
  double seam = 0.0;
  for (int i = 0; i < g.nq(); ++i) {
    const bool q_edge = i < band || i >= g.nq() - band;
    for (int j = 0; j < g.np(); ++j) {
      if (q_edge || j < band || j >= g.np() - band) seam += std::abs(w(i, j));
    }
  }
  r.boundary_mass = seam * g.cell();
  return r;
}

CoefficientField oracle_harmonic(double q_center, double p_center, double omega,
                                 double t, const PhaseSpaceGrid& grid) {
  if (omega <= 0.0) throw config_error("harmonic oracle: omega must be positive");
  const double m = grid.mass;
  const double hbar = grid.hbar;
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  const double qc = q_center * c + (p_center / (m * omega)) * s;
  const double pc = p_center * c - m * omega * q_center * s;
  CoefficientField f = zero_field(grid);
  f.time = t;
  const double aq = m * omega / hbar;
  const double ap = 1.0 / (m * omega * hbar);
  const double norm = 1.0 / (std::numbers::pi * hbar);
  for (int i = 0; i < grid.nq(); ++i) {
    const double dq = grid.q(i) - qc;
    for (int j = 0; j < grid.np(); ++j) {
      const double dp = grid.p(j) - pc;
      f.data(i, j) = norm * std::exp(-aq * dq * dq - ap * dp * dp);
    }
  }
  return f;
}

CoefficientField oracle_cat(double separation, double omega, const PhaseSpaceGrid& grid) {
  const double m = grid.mass;
  const double hbar = grid.hbar;
  const double a = separation / 2.0;
  const double aq = m * omega / hbar;
  const double ap = 1.0 / (m * omega * hbar);
  CoefficientField f = zero_field(grid);
  auto lobe = [&](double q, double p, double qc) {
    return std::exp(-aq * (q - qc) * (q - qc) - ap * p * p);
  };
  for (int i = 0; i < grid.nq(); ++i) {
    const double q = grid.q(i);
    for (int j = 0; j < grid.np(); ++j) {
      const double p = grid.p(j);
      const double fringe =
          2.0 * std::exp(-aq * q * q - ap * p * p) * std::cos(2.0 * a * p / hbar);
      f.data(i, j) = lobe(q, p, a) + lobe(q, p, -a) + fringe;
    }
  }
  const double mass = f.normalization();
  if (std::abs(mass) < 1e-300) throw numerical_error("cat oracle: vanishing norm");
  f.data /= mass;
  return f;
}

CoefficientField gibbs_state(const Potential& potential, double theta,
                             const PhaseSpaceGrid& grid) {
  if (theta <= 0.0) throw config_error("gibbs state: temperature must be positive");
  CoefficientField f = zero_field(grid);
  for (int i = 0; i < grid.nq(); ++i) {
    const double uq = potential.value(grid.q(i));
    for (int j = 0; j < grid.np(); ++j) {
      const double p = grid.p(j);
      f.data(i, j) = std::exp(-(p * p / (2.0 * grid.mass) + uq) / theta);
    }
  }
  const double mass = f.normalization();
  if (!std::isfinite(mass) || mass <= 0.0)
    throw numerical_error("gibbs state: normalization failed (state does not fit the box?)");
  f.data /= mass;
  return f;
}

double compare(const CoefficientField& a, const CoefficientField& b) {
  if (!a.grid.same_shape(b.grid))
    throw config_error("compare: fields live on different grids");
  const double na = a.data.norm();
  const double nb = b.data.norm();
  const double scale = std::max(na, nb);
  if (scale == 0.0) return 0.0;
  return (a.data - b.data).norm() / scale;
}

double mass_radius(const CoefficientField& field, double fraction) {
  if (fraction <= 0.0 || fraction > 1.0)
    throw config_error("mass_radius: fraction must lie in (0, 1]");
  const auto& g = field.grid;
  const auto& w = field.data;
  double total = 0.0, cq = 0.0, cp = 0.0;
  for (int i = 0; i < g.nq(); ++i)
    for (int j = 0; j < g.np(); ++j) {
      const double m = std::abs(w(i, j));
      total += m;
      cq += m * g.q(i);
      cp += m * g.p(j);
    }
  if (total == 0.0) return 0.0;
  cq /= total;
  cp /= total;
  std::vector<std::pair<double, double>> cells;  // (radius, mass)
  cells.reserve(static_cast<std::size_t>(g.nq()) * g.np());
  for (int i = 0; i < g.nq(); ++i)
    for (int j = 0; j < g.np(); ++j) {
      const double dq = g.q(i) - cq, dp = g.p(j) - cp;
      cells.emplace_back(std::sqrt(dq * dq + dp * dp), std::abs(w(i, j)));
    }
  std::sort(cells.begin(), cells.end());
  double acc = 0.0;
  for (const auto& [radius, m] : cells) {
    acc += m;
    if (acc >= fraction * total) return radius;
  }
  return cells.back().first;
}

}  // namespace wigsim
