#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "wigsim/connection.hpp"
#include "wigsim/wavelets.hpp"

namespace wigsim {

// Periodic phase-space box [q0, q0+Lq) x [p0, p0+Lp) sampled at the finest
// dyadic level per axis (Nq = 2^Jq, Np = 2^Jp).
struct PhaseSpaceGrid {
  double q0 = 0.0, lq = 0.0;
  double p0 = 0.0, lp = 0.0;
  int jq = 0, jp = 0;
  double hbar = 1.0;
  double mass = 1.0;

  int nq() const { return 1 << jq; }
  int np() const { return 1 << jp; }
  double dq() const { return lq / nq(); }
  double dp() const { return lp / np(); }
  double q(int i) const { return q0 + i * dq(); }
  double p(int j) const { return p0 + j * dp(); }
  double cell() const { return dq() * dp(); }
  bool same_shape(const PhaseSpaceGrid& o) const;

  static PhaseSpaceGrid create(double q0, double lq, double p0, double lp, int jq,
                               int jp, double hbar, double mass);
};

// Polynomial potential U(q) = sum_r coeffs[r] q^r with exact derivatives.
struct Potential {
  std::vector<double> coeffs;

  int degree() const;
  double value(double q) const;
  Potential derivative(int order = 1) const;
  bool identically_zero() const;
};

Potential poly_potential(const std::vector<double>& coeffs);

// Finest-level scaling coefficients of W(q,p) on the grid; data(i, j) sits at
// (q_i, p_j).
struct CoefficientField {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd data;
  double time = 0.0;

  double normalization() const;  // one-point quadrature of the grid integral
  double l2_norm() const;        // coefficient 2-norm (no cell weight)
  bool all_finite() const;
};

CoefficientField zero_field(const PhaseSpaceGrid& grid);

// One separable term of the evolution operator: scalar * (q_action x p_action),
// where each axis action is a banded Galerkin derivative, a diagonal
// multiplication by sampled values, or the identity.
struct AxisAction {
  enum class Kind { identity, band, diagonal };
  Kind kind = Kind::identity;
  DerivativeMatrix band;
  Eigen::VectorXd diag;

  static AxisAction make_identity();
  static AxisAction make_band(DerivativeMatrix m);
  static AxisAction make_diagonal(Eigen::VectorXd values);
  bool same_action(const AxisAction& other) const;
};

struct MoyalTerm {
  double scalar = 0.0;
  AxisAction q_action;
  AxisAction p_action;
};

// Right-hand side of the truncated evolution equation
//   dW/dt = -(p/m) dW/dq
//           + sum_{l=0}^{L} (-1)^l (hbar/2)^{2l} / (2l+1)! U^{(2l+1)}(q) d^{2l+1}W/dp^{2l+1}
//           + D d^2 W/dp^2                    (optional momentum diffusion)
struct MoyalOperator {
  std::vector<MoyalTerm> terms;
  PhaseSpaceGrid grid;
  int truncation = 0;          // Moyal series cut L
  double decoherence_d = 0.0;  // 0 = closed system
  std::optional<DerivativeMatrix> momentum_diffusion;

  CoefficientField apply(const CoefficientField& field) const;
  void apply_into(const Eigen::MatrixXd& in, Eigen::MatrixXd& out,
                  Eigen::MatrixXd& scratch) const;
  // Adjoint action (transpose of the discrete operator).
  void apply_transpose_into(const Eigen::MatrixXd& in, Eigen::MatrixXd& out,
                            Eigen::MatrixXd& scratch) const;
  MoyalOperator negated() const;
  bool same_terms(const MoyalOperator& other) const;
};

MoyalOperator assemble_moyal(const Potential& potential, const PhaseSpaceGrid& grid,
                             int truncation, const WaveletFamily& family_q,
                             const WaveletFamily& family_p);

MoyalOperator add_decoherence(const MoyalOperator& op, double diffusion,
                              const WaveletFamily& family_p);

}  // namespace wigsim
