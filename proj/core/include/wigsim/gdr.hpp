#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wigsim/moyal.hpp"

namespace wigsim {

struct Trajectory {
  PhaseSpaceGrid grid;
  std::vector<double> times;
  std::vector<CoefficientField> fields;
  std::string integrator_name;
  double dt = 0.0;

  const CoefficientField& final_field() const { return fields.back(); }
};

// Advective stability bound C * min(dq / (|p|max/m), dp / max|U'|), taken from
// the assembled operator's diagonal factors.
double stability_bound(const MoyalOperator& op, double safety_factor);

// Classical explicit RK4 with fixed step. Snapshots are stored every
// `snapshot_stride` steps (plus the initial and final fields; stride <= 0
// keeps endpoints only).
Trajectory evolve(const MoyalOperator& op, const CoefficientField& initial,
                  double t_end, double dt, const std::string& method,
                  int snapshot_stride = 0, double safety_factor = 0.5,
                  bool progress = false);

// Space-time variational reduction on the window [t0, t1]: the residual of
// (d/dt - M) applied to the tensor expansion is tested against every basis
// function, and the t0 trace enters as weighted least-squares constraint rows.
// The time basis is the periodized scaling family at level log2(n_t).
class DispersionSystem {
 public:
  DispersionSystem(MoyalOperator op, double t0, double t1, int n_t,
                   const WaveletFamily& family_t, CoefficientField initial,
                   double ic_weight);

  long long unknown_count() const;
  long long equation_count() const;  // Galerkin rows + constraint rows
  int time_slots() const { return n_t_; }
  double window_start() const { return t0_; }
  double window_end() const { return t1_; }

  // Structured matvec with the (rectangular) system matrix and its transpose.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;
  Eigen::VectorXd rhs() const;

  bool solved() const { return solved_; }
  double residual_norm() const { return residual_norm_; }
  int iterations() const { return iterations_; }
  const Eigen::VectorXd& solution() const;
  CoefficientField field_at_slot(int k) const;
  // Field traced at the window seam (t0 and t1 coincide on the periodized basis).
  CoefficientField end_field() const;

  friend DispersionSystem solve_system(DispersionSystem sys, double tol, int max_iter,
                                       bool progress);

 private:
  MoyalOperator op_;
  double t0_, t1_;
  int n_t_;
  int n_q_, n_p_;
  DerivativeMatrix time_derivative_;
  Eigen::VectorXd trace_;  // periodized basis values at the window seam
  double ic_weight_;
  CoefficientField initial_;
  Eigen::VectorXd solution_;
  double residual_norm_ = 0.0;
  int iterations_ = 0;
  bool solved_ = false;
};

DispersionSystem assemble_dispersion_system(const MoyalOperator& op, double t0,
                                            double t1, int n_t,
                                            const WaveletFamily& family_t,
                                            const CoefficientField& initial,
                                            double ic_weight = 1e3);

// Iterative residual-minimizing least-squares solve (LSQR). Throws on
// non-convergence, carrying the best residual reached.
DispersionSystem solve_system(DispersionSystem sys, double tol, int max_iter,
                              bool progress = false);

// Generic LSQR on a matrix-free operator; exposed for reuse and testing.
struct LsqrResult {
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

LsqrResult lsqr(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_t,
                const Eigen::VectorXd& b, long long cols, double tol, int max_iter,
                bool progress = false);

struct CutoffResult {
  int level = 0;       // per-axis basis count N at convergence (or N_max)
  bool converged = false;
  std::vector<int> ladder;
  std::vector<double> differences;  // Fock-norm difference per consecutive pair
};

// Smallest per-axis count N in the dyadic ladder with |W^{2N} - W^N| <= eps
// in the Fock-like norm (fields compared on the coarser grid by decimation).
CutoffResult cutoff_level(const std::function<CoefficientField(int)>& solve_at,
                          double eps, const std::vector<int>& ladder);

}  // namespace wigsim
