#pragma once

#include "wigsim/config.hpp"

namespace wigsim {

// Initial state selected by the config (coherent | cat | gibbs).
CoefficientField build_initial_state(const RunConfig& cfg, const PhaseSpaceGrid& grid);

// Executes the configured subcommand; returns the process exit code
// (0 success, 2 config error, 3 numerical failure, 4 I/O failure).
int run(const RunConfig& cfg);

}  // namespace wigsim
