#include "wigsim/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>

#include "wigsim/diagnostics.hpp"
#include "wigsim/errors.hpp"
#include "wigsim/gdr.hpp"
#include "wigsim/io.hpp"
#include "wigsim/scales.hpp"

namespace wigsim {

namespace {

namespace fs = std::filesystem;

struct Setup {
  WaveletFamily family_q, family_p, family_t;
  PhaseSpaceGrid grid;
  Potential potential;
  MoyalOperator op;
  CoefficientField initial;
};

Setup build_setup(const RunConfig& cfg) {
  Setup s{make_family(cfg.family_q), make_family(cfg.family_p), make_family(cfg.family_t),
          make_grid(cfg),            poly_potential(cfg.potential),
          {},                        {}};
  s.op = assemble_moyal(s.potential, s.grid, cfg.moyal_cut, s.family_q, s.family_p);
  if (cfg.decoherence > 0.0) s.op = add_decoherence(s.op, cfg.decoherence, s.family_p);
  s.initial = build_initial_state(cfg, s.grid);
  return s;
}

double effective_dt(const RunConfig& cfg, const MoyalOperator& op, double horizon) {
  const double bound = stability_bound(op, cfg.stability_factor);
  if (cfg.dt > 0.0) {
    if (cfg.dt > bound)
      throw config_error("config key 'dt': " + format_double(cfg.dt) +
                         " violates the advective stability bound; use dt <= " +
                         format_double(bound));
    return cfg.dt;
  }
  const double steps = std::ceil(horizon / bound - 1e-12);
  return horizon / std::max(1.0, steps);
}

void set_common_params(RunManifest& m, const RunConfig& cfg) {
  m.set_param("subcommand", cfg.subcommand);
  m.set_param("nq", static_cast<long long>(cfg.nq));
  m.set_param("np", static_cast<long long>(cfg.np));
  m.set_param("q0", cfg.q0);
  m.set_param("lq", cfg.lq);
  m.set_param("p0", cfg.p0);
  m.set_param("lp", cfg.lp);
  m.set_param("hbar", cfg.hbar);
  m.set_param("mass", cfg.mass);
  std::string pot;
  for (std::size_t i = 0; i < cfg.potential.size(); ++i)
    pot += (i ? "," : "") + format_double(cfg.potential[i]);
  m.set_param("potential", pot);
  m.set_param("family_q", cfg.family_q);
  m.set_param("family_p", cfg.family_p);
  m.set_param("family_t", cfg.family_t);
  m.set_param("moyal_cut", static_cast<long long>(cfg.moyal_cut));
  m.set_param("decoherence", cfg.decoherence);
  m.set_param("state", cfg.state);
  m.set_param("state_q0", cfg.state_q0);
  m.set_param("state_p0", cfg.state_p0);
  m.set_param("state_omega", cfg.state_omega);
  m.set_param("cat_separation", cfg.cat_separation);
  m.set_param("gibbs_theta", cfg.gibbs_theta);
  m.set_param("method", cfg.method);
  m.set_param("stability_factor", cfg.stability_factor);
  m.set_param("t_end", cfg.t_end);
  m.set_param("snapshot_stride", static_cast<long long>(cfg.snapshot_stride));
  m.set_param("seed", static_cast<long long>(cfg.seed));
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%04zu.csv", index);
  return buf;
}

int run_evolve(const RunConfig& cfg) {
  Setup s = build_setup(cfg);
  const DiagnosticsReport initial_report = report(s.initial, s.potential, s.family_p.taps());
  if (initial_report.boundary_mass > 1e-8)
    std::cerr << "warning: initial state carries " << initial_report.boundary_mass
              << " |W| mass within 4 filter widths of the periodic seam\n";

  const double dt = effective_dt(cfg, s.op, cfg.t_end);
  Trajectory traj = evolve(s.op, s.initial, cfg.t_end, dt, cfg.method,
                           cfg.snapshot_stride, cfg.stability_factor, true);

  fs::create_directories(cfg.out_dir);
  RunManifest manifest;
  set_common_params(manifest, cfg);
  manifest.set_param("dt_effective", dt);
  manifest.set_param("steps", static_cast<long long>(std::llround(cfg.t_end / dt)));
  manifest.set_param("out", cfg.out_dir);

  std::vector<DiagnosticsReport> reports;
  for (std::size_t i = 0; i < traj.fields.size(); ++i) {
    const fs::path csv = fs::path(cfg.out_dir) / snapshot_name(i);
    write_field_csv(traj.fields[i], csv);
    manifest.add_file(csv);
    if (cfg.emit_pgm) {
      fs::path pgm = csv;
      pgm.replace_extension(".pgm");
      write_pgm(traj.fields[i], pgm, cfg.pgm_clip);
      manifest.add_file(pgm);
    }
    reports.push_back(report(traj.fields[i], s.potential, s.family_p.taps()));
  }
  const fs::path diag = fs::path(cfg.out_dir) / "diagnostics.csv";
  write_diagnostics_csv(reports, diag);
  manifest.add_file(diag);

  const int finest = std::min(s.grid.jq, s.grid.jp);
  const int coarse = std::max(0, std::min(3, finest - 1));
  Decomposition2d decomp = decompose(traj.final_field(), s.family_q, coarse);
  const fs::path scales = fs::path(cfg.out_dir) / "scales.csv";
  write_scales_csv(energy_table(decomp), scales);
  manifest.add_file(scales);
  if (cfg.emit_coeffs) {
    const fs::path coeffs = fs::path(cfg.out_dir) / "coefficients.csv";
    write_decomposition_csv(decomp, coeffs);
    manifest.add_file(coeffs);
  }
  manifest.write(fs::path(cfg.out_dir) / "manifest.json");
  std::cout << "evolve: wrote " << traj.fields.size() << " snapshots to " << cfg.out_dir
            << " (dt=" << format_double(dt) << ")\n";
  return 0;
}

int run_gdr(const RunConfig& cfg) {
  Setup s = build_setup(cfg);
  const double window = cfg.window > 0.0 ? cfg.window : cfg.t_end;
  DispersionSystem sys = assemble_dispersion_system(
      s.op, 0.0, window, cfg.nt, s.family_t, s.initial, cfg.ic_weight);
  std::cerr << "gdr: system with " << sys.unknown_count() << " unknowns and "
            << sys.equation_count() << " equations\n";
  sys = solve_system(std::move(sys), cfg.tol, cfg.max_iter, true);

  const double dt = effective_dt(cfg, s.op, window);
  Trajectory traj = evolve(s.op, s.initial, window, dt, cfg.method, 0,
                           cfg.stability_factor, true);
  const CoefficientField gdr_end = sys.end_field();
  const double discrepancy = compare(gdr_end, traj.final_field());

  fs::create_directories(cfg.out_dir);
  RunManifest manifest;
  set_common_params(manifest, cfg);
  manifest.set_param("window", window);
  manifest.set_param("nt", static_cast<long long>(cfg.nt));
  manifest.set_param("ic_weight", cfg.ic_weight);
  manifest.set_param("tol", cfg.tol);
  manifest.set_param("max_iter", static_cast<long long>(cfg.max_iter));
  manifest.set_param("dt_effective", dt);
  manifest.set_param("unknowns", sys.unknown_count());
  manifest.set_param("residual", sys.residual_norm());
  manifest.set_param("iterations", static_cast<long long>(sys.iterations()));
  manifest.set_param("discrepancy", discrepancy);

  const fs::path end_csv = fs::path(cfg.out_dir) / "gdr_end.csv";
  write_field_csv(gdr_end, end_csv);
  manifest.add_file(end_csv);
  if (cfg.emit_pgm) {
    const fs::path pgm = fs::path(cfg.out_dir) / "gdr_end.pgm";
    write_pgm(gdr_end, pgm, cfg.pgm_clip);
    manifest.add_file(pgm);
  }
  std::vector<DiagnosticsReport> reports{
      report(s.initial, s.potential, s.family_p.taps()),
      report(gdr_end, s.potential, s.family_p.taps())};
  const fs::path diag = fs::path(cfg.out_dir) / "diagnostics.csv";
  write_diagnostics_csv(reports, diag);
  manifest.add_file(diag);
  manifest.write(fs::path(cfg.out_dir) / "manifest.json");

  std::cout << "gdr: residual=" << format_double(sys.residual_norm())
            << " iterations=" << sys.iterations()
            << " mol_discrepancy=" << format_double(discrepancy) << "\n";
  return 0;
}

int run_analyze(const RunConfig& cfg) {
  if (cfg.input_csv.empty())
    throw config_error("analyze: no input snapshot given (positional argument or input_csv)");
  Setup s{make_family(cfg.family_q), make_family(cfg.family_p), make_family(cfg.family_t),
          make_grid(cfg),            poly_potential(cfg.potential),
          {},                        {}};
  CoefficientField field = read_field_csv(cfg.input_csv, cfg.hbar, cfg.mass);

  fs::create_directories(cfg.out_dir);
  RunManifest manifest;
  set_common_params(manifest, cfg);
  manifest.set_param("input_csv", cfg.input_csv);

  DiagnosticsReport r = report(field, s.potential, s.family_p.taps());
  const fs::path diag = fs::path(cfg.out_dir) / "diagnostics.csv";
  write_diagnostics_csv({r}, diag);
  manifest.add_file(diag);

  const int finest = std::min(field.grid.jq, field.grid.jp);
  const int coarse = std::max(0, std::min(3, finest - 1));
  Decomposition2d decomp = decompose(field, s.family_q, coarse);
  const fs::path scales = fs::path(cfg.out_dir) / "scales.csv";
  write_scales_csv(energy_table(decomp), scales);
  manifest.add_file(scales);
  if (cfg.emit_coeffs) {
    const fs::path coeffs = fs::path(cfg.out_dir) / "coefficients.csv";
    write_decomposition_csv(decomp, coeffs);
    manifest.add_file(coeffs);
  }
  if (cfg.emit_pgm) {
    const fs::path pgm = fs::path(cfg.out_dir) / "field.pgm";
    write_pgm(field, pgm, cfg.pgm_clip);
    manifest.add_file(pgm);
  }
  manifest.write(fs::path(cfg.out_dir) / "manifest.json");

  std::cout << "analyze: normalization=" << format_double(r.normalization)
            << " purity=" << format_double(r.purity)
            << " negativity=" << format_double(r.negativity_volume)
            << " energy=" << format_double(r.energy)
            << " mass_radius95=" << format_double(mass_radius(field, 0.95)) << "\n";
  return 0;
}

int run_selftest(const RunConfig& cfg) {
  int failures = 0;
  auto check = [&failures](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  // Filter invariants for every supported family.
  {
    bool ok = true;
    std::vector<std::string> names{"haar"};
    for (int k = 2; k <= 10; ++k) names.push_back("daubechies-" + std::to_string(k));
    for (const auto& name : names) {
      const auto fam = make_family(name);
      double sum = 0.0;
      for (double h : fam.lowpass) sum += h;
      ok = ok && std::abs(sum - std::numbers::sqrt2) < 1e-12;
      for (int m = 0; m < fam.vanishing_moments; ++m) {
        double acc = 0.0;
        for (int i = 0; i + 2 * m < fam.taps(); ++i)
          acc += fam.lowpass[i] * fam.lowpass[i + 2 * m];
        ok = ok && std::abs(acc - (m == 0 ? 1.0 : 0.0)) < 1e-12;
      }
    }
    check("wavelet filter invariants", ok);
  }
  // Perfect reconstruction and Parseval.
  {
    const auto fam = make_family("daubechies-4");
    std::vector<double> x(256);
    for (auto& v : x) v = unit(rng);
    auto d = fwt_forward_1d(x, fam, 2);
    auto back = fwt_inverse_1d(d, fam);
    double err = 0.0, nrm = 0.0, energy_in = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      err += (back[i] - x[i]) * (back[i] - x[i]);
      nrm += x[i] * x[i];
      energy_in += x[i] * x[i];
    }
    const bool ok = std::sqrt(err / nrm) < 1e-10 &&
                    std::abs(d.total_energy() - energy_in) < 1e-10 * energy_in;
    check("fwt round trip and energy conservation", ok);
  }
  // Connection-table moment rules d = 1..3 (daubechies-6).
  {
    const auto fam = make_family("daubechies-6");
    bool ok = true;
    for (int d = 1; d <= 3; ++d) {
      auto gamma = derivative_stencil(fam, d);
      const int w = (static_cast<int>(gamma.size()) - 1) / 2;
      double m0 = 0.0, md = 0.0;
      for (int k = -w; k <= w; ++k) {
        double kd = 1.0;
        for (int i = 0; i < d; ++i) kd *= k;
        m0 += gamma[k + w];
        md += kd * gamma[k + w];
      }
      double target = (d % 2 == 0 ? 1.0 : -1.0);
      for (int i = 2; i <= d; ++i) target *= i;
      ok = ok && std::abs(m0) < 1e-8 && std::abs(md - target) < 1e-8;
    }
    check("connection moment rules", ok);
  }
  // Derivative of a sine mode.
  {
    const auto fam = make_family("daubechies-6");
    const double length = 16.0;
    auto dm = derivative_matrix(fam, 1, 8, length);
    Eigen::VectorXd x(256), exact(256);
    for (int i = 0; i < 256; ++i) {
      const double q = length * i / 256.0;
      x(i) = std::sin(2.0 * std::numbers::pi * q / length);
      exact(i) = 2.0 * std::numbers::pi / length *
                 std::cos(2.0 * std::numbers::pi * q / length);
    }
    const Eigen::VectorXd got = dm.apply(x);
    check("derivative matrix on a sine mode", (got - exact).norm() / exact.norm() < 1e-4);
  }
  // Operator linearity on a small grid.
  {
    const auto fam = make_family("daubechies-6");
    auto grid = PhaseSpaceGrid::create(-8, 16, -8, 16, 6, 6, 1.0, 1.0);
    auto op = assemble_moyal(poly_potential({0, 0, 0.5}), grid, 1, fam, fam);
    CoefficientField a = zero_field(grid), b = zero_field(grid);
    for (int i = 0; i < grid.nq(); ++i)
      for (int j = 0; j < grid.np(); ++j) {
        a.data(i, j) = unit(rng);
        b.data(i, j) = unit(rng);
      }
    CoefficientField combo = zero_field(grid);
    combo.data = 0.25 * a.data - 1.5 * b.data;
    const auto lhs = op.apply(combo);
    Eigen::MatrixXd rhs = 0.25 * op.apply(a).data - 1.5 * op.apply(b).data;
    check("evolution operator linearity",
          (lhs.data - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
  }
  // Fock-norm additivity.
  {
    auto grid = PhaseSpaceGrid::create(-8, 16, -8, 16, 5, 5, 1.0, 1.0);
    CoefficientField a = zero_field(grid), b = zero_field(grid);
    for (int i = 0; i < grid.nq(); ++i)
      for (int j = 0; j < grid.np(); ++j) {
        a.data(i, j) = unit(rng);
        b.data(i, j) = unit(rng);
      }
    FockStateList la{0.0, {fock_component(a)}};
    FockStateList lb{0.0, {fock_component(b)}};
    FockStateList both{0.0, {fock_component(a), fock_component(b)}};
    const double n2 = fock_norm(both) * fock_norm(both);
    const double want = fock_norm(la) * fock_norm(la) + fock_norm(lb) * fock_norm(lb);
    check("fock-norm orthogonal additivity", std::abs(n2 - want) < 1e-12 * want);
  }
  // Best basis never worse than the root or the standard basis.
  {
    const auto fam = make_family("daubechies-2");
    std::vector<double> x(64);
    for (auto& v : x) v = unit(rng);
    auto basis = best_basis(x, fam, 3);
    double total = 0.0;
    for (double v : x) total += v * v;
    const double root = shannon_entropy(x, total);
    auto std_basis = flatten(fwt_forward_1d(x, fam, 3));
    const double standard = shannon_entropy(std_basis, total);
    check("best-basis entropy minimality",
          basis.entropy <= root + 1e-12 && basis.entropy <= standard + 1e-12);
  }
  // Compression keeps the identity diagonal.
  {
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(32, 32);
    auto comp = compress_operator(eye, 0.5);
    check("operator compression identity",
          comp.retained.size() == 32 && std::abs(comp.sparsity - 1.0 / 32.0) < 1e-15);
  }
  std::cout << (failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: " + std::to_string(failures) + " failures\n");
  return failures == 0 ? 0 : 3;
}

}  // namespace

CoefficientField build_initial_state(const RunConfig& cfg, const PhaseSpaceGrid& grid) {
  if (cfg.state == "coherent")
    return oracle_harmonic(cfg.state_q0, cfg.state_p0, cfg.state_omega, 0.0, grid);
  if (cfg.state == "cat") return oracle_cat(cfg.cat_separation, cfg.state_omega, grid);
  if (cfg.state == "gibbs")
    return gibbs_state(poly_potential(cfg.potential), cfg.gibbs_theta, grid);
  throw config_error("config key 'state': unknown state '" + cfg.state + "'");
}

int run(const RunConfig& cfg) {
  try {
    validate(cfg);
    if (cfg.subcommand == "evolve") return run_evolve(cfg);
    if (cfg.subcommand == "gdr") return run_gdr(cfg);
    if (cfg.subcommand == "analyze") return run_analyze(cfg);
    if (cfg.subcommand == "selftest") return run_selftest(cfg);
    throw config_error("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const error& e) {
    const char* kind = e.category() == error_category::config      ? "config"
                       : e.category() == error_category::numerical ? "numerical"
                                                                   : "io";
    std::cerr << "error (" << kind << "): " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace wigsim
