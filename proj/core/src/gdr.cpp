#include "wigsim/gdr.hpp"

#include <cmath>
#include <iostream>

#include "wigsim/errors.hpp"
#include "wigsim/scales.hpp"

namespace wigsim {

namespace {

bool is_pow2(long long n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(long long n) {
  int j = 0;
  while ((1LL << j) < n) ++j;
  return j;
}

}  // namespace

double stability_bound(const MoyalOperator& op, double safety_factor) {
  const auto& g = op.grid;
  double bound = std::numeric_limits<double>::infinity();
  for (const auto& term : op.terms) {
    if (term.q_action.kind == AxisAction::Kind::band && term.q_action.band.order == 1 &&
        term.p_action.kind == AxisAction::Kind::diagonal) {
      const double speed =
          std::abs(term.scalar) * term.p_action.diag.cwiseAbs().maxCoeff();
      if (speed > 0.0) bound = std::min(bound, g.dq() / speed);
    }
    if (term.p_action.kind == AxisAction::Kind::band && term.p_action.band.order == 1 &&
        term.q_action.kind == AxisAction::Kind::diagonal) {
      const double speed =
          std::abs(term.scalar) * term.q_action.diag.cwiseAbs().maxCoeff();
      if (speed > 0.0) bound = std::min(bound, g.dp() / speed);
    }
  }
  return safety_factor * bound;
}

Trajectory evolve(const MoyalOperator& op, const CoefficientField& initial,
                  double t_end, double dt, const std::string& method,
                  int snapshot_stride, double safety_factor, bool progress) {
  if (method != "rk4")
    throw config_error("evolve: unknown integrator '" + method + "' (supported: rk4)");
  if (dt <= 0.0) throw config_error("evolve: dt must be positive");
  if (t_end <= 0.0) throw config_error("evolve: t_end must be positive");
  if (!initial.grid.same_shape(op.grid))
    throw config_error("evolve: initial field grid does not match the operator");
  const double bound = stability_bound(op, safety_factor);
  if (dt > bound)
    throw config_error("evolve: dt=" + std::to_string(dt) +
                       " violates the advective stability bound; use dt <= " +
                       std::to_string(bound));

  const long long steps = std::llround(std::ceil(t_end / dt - 1e-12));
  Trajectory traj;
  traj.grid = initial.grid;
  traj.integrator_name = method;
  traj.dt = dt;
  traj.times.push_back(initial.time);
  traj.fields.push_back(initial);

  Eigen::MatrixXd w = initial.data;
  Eigen::MatrixXd k1, k2, k3, k4, stage, scratch;
  const long long report_every = std::max<long long>(1, steps / 10);
  for (long long s = 0; s < steps; ++s) {
    op.apply_into(w, k1, scratch);
    stage = w + (0.5 * dt) * k1;
    op.apply_into(stage, k2, scratch);
    stage = w + (0.5 * dt) * k2;
    op.apply_into(stage, k3, scratch);
    stage = w + dt * k3;
    op.apply_into(stage, k4, scratch);
    w += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!w.allFinite())
      throw numerical_error("evolve: non-finite field detected at step " +
                            std::to_string(s + 1));
    const double t = initial.time + (s + 1) * dt;
    const bool record = (snapshot_stride > 0 && (s + 1) % snapshot_stride == 0) ||
                        s + 1 == steps;
    if (record) {
      CoefficientField snap{initial.grid, w, t};
      traj.times.push_back(t);
      traj.fields.push_back(std::move(snap));
    }
    if (progress && ((s + 1) % report_every == 0 || s + 1 == steps))
      std::cerr << "evolve: step " << (s + 1) << "/" << steps << " t=" << t << "\n";
  }
  return traj;
}

DispersionSystem::DispersionSystem(MoyalOperator op, double t0, double t1, int n_t,
                                   const WaveletFamily& family_t,
                                   CoefficientField initial, double ic_weight)
    : op_(std::move(op)), t0_(t0), t1_(t1), n_t_(n_t), ic_weight_(ic_weight),
      initial_(std::move(initial)) {
  if (!(t1_ > t0_)) throw config_error("dispersion system: degenerate window (t1 <= t0)");
  if (n_t_ < 4 || !is_pow2(n_t_))
    throw config_error("dispersion system: N_t must be a power of two >= 4");
  const int min_n = 2 * (2 * family_t.vanishing_moments - 1);
  if (n_t_ < min_n)
    throw config_error("dispersion system: N_t=" + std::to_string(n_t_) +
                       " too small for the filter band of " + family_t.name +
                       " (need N_t >= " + std::to_string(min_n) + ")");
  if (!initial_.grid.same_shape(op_.grid))
    throw config_error("dispersion system: initial field grid does not match the operator");
  if (ic_weight_ <= 0.0)
    throw config_error("dispersion system: constraint weight must be positive");
  n_q_ = op_.grid.nq();
  n_p_ = op_.grid.np();

  const double window = t1_ - t0_;
  time_derivative_ = derivative_matrix(family_t, 1, log2_exact(n_t_), window);

  // Values of the periodized time basis at the window seam.
  auto table = cascade_table(family_t, 1);
  const int support = family_t.support_length();
  auto phi_int = [&](int n) -> double {
    if (n < 0 || n > support) return 0.0;
    return table.phi_values[2 * n];
  };
  trace_ = Eigen::VectorXd::Zero(n_t_);
  const double scale = std::sqrt(static_cast<double>(n_t_) / window);
  for (int k = 0; k < n_t_; ++k)
    trace_(k) = scale * (phi_int(-k) + phi_int(n_t_ - k));
}

long long DispersionSystem::unknown_count() const {
  return static_cast<long long>(n_t_) * n_q_ * n_p_;
}

long long DispersionSystem::equation_count() const {
  return unknown_count() + static_cast<long long>(n_q_) * n_p_;
}

Eigen::VectorXd DispersionSystem::apply(const Eigen::VectorXd& x) const {
  const long long m = static_cast<long long>(n_q_) * n_p_;
  if (x.size() != unknown_count())
    throw config_error("dispersion system: solution vector has wrong size");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(equation_count());
  Eigen::MatrixXd out, scratch;
  // Galerkin block: time-derivative coupling minus the operator action.
  for (int slot = 0; slot < n_t_; ++slot) {
    Eigen::Map<const Eigen::MatrixXd> f(x.data() + slot * m, n_q_, n_p_);
    op_.apply_into(f, out, scratch);
    Eigen::Map<Eigen::MatrixXd>(y.data() + slot * m, n_q_, n_p_) = -out;
  }
  const auto& st = time_derivative_.stencil;
  const int hw = time_derivative_.halfwidth;
  for (int slot = 0; slot < n_t_; ++slot) {
    auto yslot = Eigen::Map<Eigen::MatrixXd>(y.data() + slot * m, n_q_, n_p_);
    for (int o = -hw; o <= hw; ++o) {
      const int src = ((slot - o) % n_t_ + n_t_) % n_t_;
      yslot += st[o + hw] * Eigen::Map<const Eigen::MatrixXd>(x.data() + src * m, n_q_, n_p_);
    }
  }
  // Constraint block: weighted trace at the window start.
  auto c = Eigen::Map<Eigen::MatrixXd>(y.data() + static_cast<long long>(n_t_) * m, n_q_, n_p_);
  for (int slot = 0; slot < n_t_; ++slot) {
    if (trace_(slot) == 0.0) continue;
    c += (ic_weight_ * trace_(slot)) *
         Eigen::Map<const Eigen::MatrixXd>(x.data() + slot * m, n_q_, n_p_);
  }
  return y;
}

Eigen::VectorXd DispersionSystem::apply_transpose(const Eigen::VectorXd& y) const {
  const long long m = static_cast<long long>(n_q_) * n_p_;
  if (y.size() != equation_count())
    throw config_error("dispersion system: residual vector has wrong size");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(unknown_count());
  Eigen::MatrixXd out, scratch;
  for (int slot = 0; slot < n_t_; ++slot) {
    Eigen::Map<const Eigen::MatrixXd> g(y.data() + slot * m, n_q_, n_p_);
    op_.apply_transpose_into(g, out, scratch);
    Eigen::Map<Eigen::MatrixXd>(x.data() + slot * m, n_q_, n_p_) = -out;
  }
  const auto& st = time_derivative_.stencil;
  const int hw = time_derivative_.halfwidth;
  for (int slot = 0; slot < n_t_; ++slot) {
    auto xslot = Eigen::Map<Eigen::MatrixXd>(x.data() + slot * m, n_q_, n_p_);
    for (int o = -hw; o <= hw; ++o) {
      const int src = ((slot + o) % n_t_ + n_t_) % n_t_;
      xslot += st[o + hw] * Eigen::Map<const Eigen::MatrixXd>(y.data() + src * m, n_q_, n_p_);
    }
  }
  Eigen::Map<const Eigen::MatrixXd> c(y.data() + static_cast<long long>(n_t_) * m, n_q_, n_p_);
  for (int slot = 0; slot < n_t_; ++slot) {
    if (trace_(slot) == 0.0) continue;
    Eigen::Map<Eigen::MatrixXd>(x.data() + slot * m, n_q_, n_p_) +=
        (ic_weight_ * trace_(slot)) * c;
  }
  return x;
}

Eigen::VectorXd DispersionSystem::rhs() const {
  const long long m = static_cast<long long>(n_q_) * n_p_;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(equation_count());
  Eigen::Map<Eigen::MatrixXd>(b.data() + static_cast<long long>(n_t_) * m, n_q_, n_p_) =
      ic_weight_ * initial_.data;
  return b;
}

const Eigen::VectorXd& DispersionSystem::solution() const {
  if (!solved_) throw numerical_error("dispersion system: not solved yet");
  return solution_;
}

CoefficientField DispersionSystem::field_at_slot(int k) const {
  if (k < 0 || k >= n_t_) throw config_error("dispersion system: slot out of range");
  const long long m = static_cast<long long>(n_q_) * n_p_;
  CoefficientField f = zero_field(op_.grid);
  f.data = Eigen::Map<const Eigen::MatrixXd>(solution().data() + k * m, n_q_, n_p_);
  return f;
}

CoefficientField DispersionSystem::end_field() const {
  const long long m = static_cast<long long>(n_q_) * n_p_;
  CoefficientField f = zero_field(op_.grid);
  f.time = t1_;
  for (int slot = 0; slot < n_t_; ++slot) {
    if (trace_(slot) == 0.0) continue;
    f.data += trace_(slot) *
              Eigen::Map<const Eigen::MatrixXd>(solution().data() + slot * m, n_q_, n_p_);
  }
  return f;
}

DispersionSystem assemble_dispersion_system(const MoyalOperator& op, double t0, double t1,
                                            int n_t, const WaveletFamily& family_t,
                                            const CoefficientField& initial,
                                            double ic_weight) {
  return DispersionSystem(op, t0, t1, n_t, family_t, initial, ic_weight);
}

LsqrResult lsqr(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_t,
                const Eigen::VectorXd& b, long long cols, double tol, int max_iter,
                bool progress) {
  LsqrResult result;
  result.x = Eigen::VectorXd::Zero(cols);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }
  double beta = bnorm;
  Eigen::VectorXd u = b / beta;
  Eigen::VectorXd v = apply_t(u);
  double alpha = v.norm();
  if (alpha == 0.0) {
    result.relative_residual = 1.0;
    result.converged = false;
    return result;
  }
  v /= alpha;
  Eigen::VectorXd w = v;
  double phibar = beta;
  double rhobar = alpha;
  result.relative_residual = 1.0;

  for (int it = 1; it <= max_iter; ++it) {
    u = apply(v) - alpha * u;
    beta = u.norm();
    if (beta > 0.0) u /= beta;
    v = apply_t(u) - beta * v;
    alpha = v.norm();
    if (alpha > 0.0) v /= alpha;

    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    result.x += (phi / rho) * w;
    w = v - (theta / rho) * w;

    result.iterations = it;
    result.relative_residual = phibar / bnorm;
    if (progress && it % 50 == 0)
      std::cerr << "lsqr: iteration " << it << " relative residual "
                << result.relative_residual << "\n";
    if (result.relative_residual <= tol) {
      result.converged = true;
      break;
    }
    if (beta == 0.0 || alpha == 0.0) break;  // exact subspace solution reached
  }
  return result;
}

DispersionSystem solve_system(DispersionSystem sys, double tol, int max_iter,
                              bool progress) {
  if (tol <= 0.0) throw config_error("solve_system: tolerance must be positive");
  if (max_iter < 1) throw config_error("solve_system: max_iter must be positive");
  const Eigen::VectorXd b = sys.rhs();
  if (b.norm() == 0.0) {
    sys.solution_ = Eigen::VectorXd::Zero(sys.unknown_count());
    sys.residual_norm_ = 0.0;
    sys.iterations_ = 0;
    sys.solved_ = true;
    return sys;
  }
  auto apply = [&sys](const Eigen::VectorXd& x) { return sys.apply(x); };
  auto apply_t = [&sys](const Eigen::VectorXd& y) { return sys.apply_transpose(y); };
  LsqrResult r = lsqr(apply, apply_t, b, sys.unknown_count(), tol, max_iter, progress);
  // Report the true residual of the returned iterate, not the recurrence value.
  const double true_resid = (sys.apply(r.x) - b).norm() / b.norm();
  if (true_resid > tol)
    throw numerical_error("solve_system: no convergence after " +
                          std::to_string(r.iterations) + " iterations; best residual " +
                          std::to_string(true_resid));
  sys.solution_ = std::move(r.x);
  sys.residual_norm_ = true_resid;
  sys.iterations_ = r.iterations;
  sys.solved_ = true;
  return sys;
}

CutoffResult cutoff_level(const std::function<CoefficientField(int)>& solve_at,
                          double eps, const std::vector<int>& ladder) {
  if (ladder.size() < 2)
    throw config_error("cutoff_level: ladder must contain at least two entries");
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i)
    if (ladder[i + 1] != 2 * ladder[i])
      throw config_error("cutoff_level: ladder must be dyadic (each entry twice the previous)");

  CutoffResult result;
  result.ladder = ladder;
  CoefficientField coarser = solve_at(ladder[0]);
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) {
    CoefficientField finer = solve_at(ladder[i + 1]);
    const double diff = fock_distance(restrict_halve(finer), coarser);
    result.differences.push_back(diff);
    if (diff <= eps) {
      result.level = ladder[i];
      result.converged = true;
      return result;
    }
    coarser = std::move(finer);
  }
  result.level = ladder.back();
  result.converged = false;
  return result;
}

}  // namespace wigsim
