#include "wigsim/moyal.hpp"

#include <cmath>

#include "wigsim/errors.hpp"

namespace wigsim {

bool PhaseSpaceGrid::same_shape(const PhaseSpaceGrid& o) const {
  return q0 == o.q0 && lq == o.lq && p0 == o.p0 && lp == o.lp && jq == o.jq &&
         jp == o.jp && hbar == o.hbar && mass == o.mass;
}

PhaseSpaceGrid PhaseSpaceGrid::create(double q0, double lq, double p0, double lp,
                                      int jq, int jp, double hbar, double mass) {
  PhaseSpaceGrid g{q0, lq, p0, lp, jq, jp, hbar, mass};
  if (lq <= 0.0 || lp <= 0.0) throw config_error("grid: periods must be positive");
  if (hbar <= 0.0) throw config_error("grid: hbar must be positive");
  if (mass <= 0.0) throw config_error("grid: mass must be positive");
  if (jq < 1 || jp < 1 || jq > 24 || jp > 24)
    throw config_error("grid: dyadic levels out of range");
  if (g.nq() < 32 || g.np() < 32)
    throw config_error("grid: Nq and Np must be at least 32");
  return g;
}

int Potential::degree() const {
  for (int r = static_cast<int>(coeffs.size()) - 1; r >= 0; --r)
    if (coeffs[r] != 0.0) return r;
  return 0;
}

double Potential::value(double q) const {
  double acc = 0.0;
  for (int r = static_cast<int>(coeffs.size()) - 1; r >= 0; --r)
    acc = acc * q + coeffs[r];
  return acc;
}

Potential Potential::derivative(int order) const {
  if (order < 0) throw config_error("potential: derivative order must be nonnegative");
  Potential cur = *this;
  for (int s = 0; s < order; ++s) {
    std::vector<double> next;
    for (std::size_t r = 1; r < cur.coeffs.size(); ++r)
      next.push_back(static_cast<double>(r) * cur.coeffs[r]);
    if (next.empty()) next.push_back(0.0);
    cur.coeffs = std::move(next);
  }
  return cur;
}

bool Potential::identically_zero() const {
  for (double c : coeffs)
    if (c != 0.0) return false;
  return true;
}

Potential poly_potential(const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw config_error("potential: coefficient list must be nonempty");
  return Potential{coeffs};
}

double CoefficientField::normalization() const {
  return grid.cell() * data.sum();
}

double CoefficientField::l2_norm() const { return data.norm(); }

bool CoefficientField::all_finite() const { return data.allFinite(); }

CoefficientField zero_field(const PhaseSpaceGrid& grid) {
  return CoefficientField{grid, Eigen::MatrixXd::Zero(grid.nq(), grid.np()), 0.0};
}

AxisAction AxisAction::make_identity() { return AxisAction{}; }

AxisAction AxisAction::make_band(DerivativeMatrix m) {
  AxisAction a;
  a.kind = Kind::band;
  a.band = std::move(m);
  return a;
}

AxisAction AxisAction::make_diagonal(Eigen::VectorXd values) {
  AxisAction a;
  a.kind = Kind::diagonal;
  a.diag = std::move(values);
  return a;
}

bool AxisAction::same_action(const AxisAction& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::identity:
      return true;
    case Kind::band:
      return band.order == other.band.order && band.size == other.band.size &&
             band.stencil == other.band.stencil;
    case Kind::diagonal:
      return diag.size() == other.diag.size() && diag == other.diag;
  }
  return false;
}

namespace {

// out = action applied along the q axis (row index).
void apply_q(const AxisAction& a, const Eigen::MatrixXd& in, Eigen::MatrixXd& out,
             bool transpose) {
  switch (a.kind) {
    case AxisAction::Kind::identity:
      out = in;
      return;
    case AxisAction::Kind::diagonal:
      out = a.diag.asDiagonal() * in;
      return;
    case AxisAction::Kind::band:
      if (!transpose || a.band.order % 2 == 0) {
        a.band.apply_columns(in, out);
      } else {
        a.band.apply_columns(in, out);
        out = -out;
      }
      return;
  }
}

void apply_p(const AxisAction& a, const Eigen::MatrixXd& in, Eigen::MatrixXd& out,
             bool transpose) {
  switch (a.kind) {
    case AxisAction::Kind::identity:
      out = in;
      return;
    case AxisAction::Kind::diagonal:
      out = in * a.diag.asDiagonal();
      return;
    case AxisAction::Kind::band:
      if (!transpose || a.band.order % 2 == 0) {
        a.band.apply_rows(in, out);
      } else {
        a.band.apply_rows(in, out);
        out = -out;
      }
      return;
  }
}

}  // namespace

void MoyalOperator::apply_into(const Eigen::MatrixXd& in, Eigen::MatrixXd& out,
                               Eigen::MatrixXd& scratch) const {
  out.setZero(in.rows(), in.cols());
  Eigen::MatrixXd stage;
  for (const auto& term : terms) {
    apply_q(term.q_action, in, scratch, false);
    apply_p(term.p_action, scratch, stage, false);
    out.noalias() += term.scalar * stage;
  }
  if (decoherence_d > 0.0 && momentum_diffusion) {
    momentum_diffusion->apply_rows(in, stage);
    out.noalias() += decoherence_d * stage;
  }
}

void MoyalOperator::apply_transpose_into(const Eigen::MatrixXd& in, Eigen::MatrixXd& out,
                                         Eigen::MatrixXd& scratch) const {
  out.setZero(in.rows(), in.cols());
  Eigen::MatrixXd stage;
  for (const auto& term : terms) {
    apply_q(term.q_action, in, scratch, true);
    apply_p(term.p_action, scratch, stage, true);
    out.noalias() += term.scalar * stage;
  }
  if (decoherence_d > 0.0 && momentum_diffusion) {
    momentum_diffusion->apply_rows(in, stage);  // even order: symmetric
    out.noalias() += decoherence_d * stage;
  }
}

CoefficientField MoyalOperator::apply(const CoefficientField& field) const {
  if (!field.grid.same_shape(grid))
    throw config_error("moyal: field grid does not match the operator grid");
  CoefficientField out = field;
  Eigen::MatrixXd scratch;
  apply_into(field.data, out.data, scratch);
  return out;
}

MoyalOperator MoyalOperator::negated() const {
  MoyalOperator op = *this;
  for (auto& t : op.terms) t.scalar = -t.scalar;
  if (op.decoherence_d != 0.0)
    throw config_error("moyal: cannot negate an operator with decoherence");
  return op;
}

bool MoyalOperator::same_terms(const MoyalOperator& other) const {
  if (terms.size() != other.terms.size()) return false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].scalar != other.terms[i].scalar) return false;
    if (!terms[i].q_action.same_action(other.terms[i].q_action)) return false;
    if (!terms[i].p_action.same_action(other.terms[i].p_action)) return false;
  }
  return true;
}

MoyalOperator assemble_moyal(const Potential& potential, const PhaseSpaceGrid& grid,
                             int truncation, const WaveletFamily& family_q,
                             const WaveletFamily& family_p) {
  if (truncation < 0) throw config_error("moyal: truncation must be nonnegative");
  MoyalOperator op;
  op.grid = grid;
  op.truncation = truncation;

  // Advection: -(p/m) dW/dq.
  {
    MoyalTerm term;
    term.scalar = -1.0 / grid.mass;
    term.q_action = AxisAction::make_band(derivative_matrix(family_q, 1, grid.jq, grid.lq));
    Eigen::VectorXd pvals(grid.np());
    for (int j = 0; j < grid.np(); ++j) pvals(j) = grid.p(j);
    term.p_action = AxisAction::make_diagonal(std::move(pvals));
    op.terms.push_back(std::move(term));
  }

  // Potential ladder: terms vanish identically once 2l+1 exceeds the degree.
  for (int l = 0; l <= truncation; ++l) {
    const int s = 2 * l + 1;
    Potential du = potential.derivative(s);
    if (du.identically_zero()) continue;
    MoyalTerm term;
    double factorial = 1.0;
    for (int i = 2; i <= s; ++i) factorial *= i;
    term.scalar = ((l % 2 == 0) ? 1.0 : -1.0) *
                  std::pow(grid.hbar / 2.0, 2 * l) / factorial;
    Eigen::VectorXd uvals(grid.nq());
    for (int i = 0; i < grid.nq(); ++i) uvals(i) = du.value(grid.q(i));
    term.q_action = AxisAction::make_diagonal(std::move(uvals));
    term.p_action = AxisAction::make_band(derivative_matrix(family_p, s, grid.jp, grid.lp));
    op.terms.push_back(std::move(term));
  }
  return op;
}

MoyalOperator add_decoherence(const MoyalOperator& op, double diffusion,
                              const WaveletFamily& family_p) {
  if (diffusion < 0.0) throw config_error("moyal: decoherence strength must be nonnegative");
  MoyalOperator out = op;
  out.decoherence_d = diffusion;
  if (diffusion > 0.0)
    out.momentum_diffusion =
        derivative_matrix(family_p, 2, op.grid.jp, op.grid.lp);
  return out;
}

}  // namespace wigsim
