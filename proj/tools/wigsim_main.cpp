#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wigsim/config.hpp"
#include "wigsim/errors.hpp"
#include "wigsim/run.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::string snapshot;  // analyze positional
};

int dispatch(const std::string& subcommand, const CliOptions& opts) {
  wigsim::RunConfig cfg;
  try {
    if (!opts.config_path.empty()) {
      std::ifstream in(opts.config_path);
      if (!in) {
        std::cerr << "error (io): cannot open config file '" << opts.config_path << "'\n";
        return 4;
      }
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = wigsim::parse_config(ss.str());
    }
    for (const auto& assignment : opts.overrides)
      wigsim::apply_override(cfg, assignment);
  } catch (const wigsim::error& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return wigsim::exit_code(e.category());
  }
  cfg.subcommand = subcommand;
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (!opts.snapshot.empty()) cfg.input_csv = opts.snapshot;
  return wigsim::run(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wigsim: wavelet-Galerkin phase-space evolution"};
  app.require_subcommand(1);

  CliOptions opts;
  auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "key=value configuration file");
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--set", opts.overrides, "override a config key (repeatable)")
        ->take_all();
  };

  CLI::App* evolve = app.add_subcommand("evolve", "integrate the evolution equation");
  add_common(evolve);
  CLI::App* gdr = app.add_subcommand(
      "gdr", "solve the variational space-time system on one window");
  add_common(gdr);
  CLI::App* analyze = app.add_subcommand("analyze", "diagnostics for a snapshot CSV");
  add_common(analyze);
  analyze->add_option("snapshot", opts.snapshot, "snapshot CSV to analyze");
  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suite");
  add_common(selftest);

  CLI11_PARSE(app, argc, argv);

  if (evolve->parsed()) return dispatch("evolve", opts);
  if (gdr->parsed()) return dispatch("gdr", opts);
  if (analyze->parsed()) return dispatch("analyze", opts);
  if (selftest->parsed()) return dispatch("selftest", opts);
  return 1;
}
