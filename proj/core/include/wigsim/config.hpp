#pragma once

#include <string>
#include <vector>

#include "wigsim/moyal.hpp"

namespace wigsim {

// Run configuration: line-oriented key=value documents, '#' comments, later
// keys override earlier ones. Defaults reproduce the harmonic benchmark
// (256x256, daubechies-6, L=1, D=0).
struct RunConfig {
  std::string subcommand = "evolve";  // evolve | gdr | analyze | selftest

  int nq = 256, np = 256;
  double q0 = -8.0, lq = 16.0;
  double p0 = -8.0, lp = 16.0;
  double hbar = 1.0, mass = 1.0;

  std::vector<double> potential = {0.0, 0.0, 0.5};
  std::string family_q = "daubechies-6";
  std::string family_p = "daubechies-6";
  std::string family_t = "daubechies-6";
  int moyal_cut = 1;
  double decoherence = 0.0;

  std::string state = "coherent";  // coherent | cat | gibbs
  double state_q0 = 1.0, state_p0 = 0.0;
  double state_omega = 1.0;
  double cat_separation = 4.0;
  double gibbs_theta = 1.0;

  std::string method = "rk4";
  double dt = 0.0;  // 0 = from the stability bound
  double stability_factor = 0.5;
  double t_end = 6.283185307179586;
  int snapshot_stride = 256;

  int nt = 64;
  double window = 0.0;  // 0 = t_end
  double ic_weight = 1000.0;
  double tol = 1e-8;
  int max_iter = 5000;

  double cutoff_epsilon = 1e-4;
  int cutoff_nmin = 32;
  int cutoff_nmax = 512;

  std::string out_dir = "out";
  std::string input_csv;  // analyze subcommand input
  double pgm_clip = 0.0;  // 0 = max |W|
  bool emit_pgm = true;
  bool emit_coeffs = false;
  unsigned long seed = 12345;
};

// Known keys, for documentation and suggestion messages.
std::vector<std::string> config_keys();

RunConfig parse_config(const std::string& text);
RunConfig parse_config(const std::string& text, const RunConfig& base);

// Apply a single "key=value" override (the --set flag).
void apply_override(RunConfig& cfg, const std::string& assignment);

// Fail-fast validation of every numeric parameter against the module
// preconditions; throws config_error naming the offending key.
void validate(const RunConfig& cfg);

PhaseSpaceGrid make_grid(const RunConfig& cfg);

}  // namespace wigsim
