#include "wigsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "wigsim/errors.hpp"
#include "wigsim/wavelets.hpp"

namespace wigsim {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  double x = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return x;
}

int parse_int(const std::string& v) {
  std::size_t pos = 0;
  int x = std::stoi(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return x;
}

unsigned long parse_ulong(const std::string& v) {
  std::size_t pos = 0;
  unsigned long x = std::stoul(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument(v);
}

std::vector<double> parse_double_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item)));
  if (out.empty()) throw std::invalid_argument(v);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"nq", [](RunConfig& c, const std::string& v) { c.nq = parse_int(v); }},
      {"np", [](RunConfig& c, const std::string& v) { c.np = parse_int(v); }},
      {"q0", [](RunConfig& c, const std::string& v) { c.q0 = parse_double(v); }},
      {"lq", [](RunConfig& c, const std::string& v) { c.lq = parse_double(v); }},
      {"p0", [](RunConfig& c, const std::string& v) { c.p0 = parse_double(v); }},
      {"lp", [](RunConfig& c, const std::string& v) { c.lp = parse_double(v); }},
      {"hbar", [](RunConfig& c, const std::string& v) { c.hbar = parse_double(v); }},
      {"mass", [](RunConfig& c, const std::string& v) { c.mass = parse_double(v); }},
      {"potential",
       [](RunConfig& c, const std::string& v) { c.potential = parse_double_list(v); }},
      {"family_q", [](RunConfig& c, const std::string& v) { c.family_q = v; }},
      {"family_p", [](RunConfig& c, const std::string& v) { c.family_p = v; }},
      {"family_t", [](RunConfig& c, const std::string& v) { c.family_t = v; }},
      {"moyal_cut", [](RunConfig& c, const std::string& v) { c.moyal_cut = parse_int(v); }},
      {"decoherence",
       [](RunConfig& c, const std::string& v) { c.decoherence = parse_double(v); }},
      {"state", [](RunConfig& c, const std::string& v) { c.state = v; }},
      {"state_q0", [](RunConfig& c, const std::string& v) { c.state_q0 = parse_double(v); }},
      {"state_p0", [](RunConfig& c, const std::string& v) { c.state_p0 = parse_double(v); }},
      {"state_omega",
       [](RunConfig& c, const std::string& v) { c.state_omega = parse_double(v); }},
      {"cat_separation",
       [](RunConfig& c, const std::string& v) { c.cat_separation = parse_double(v); }},
      {"gibbs_theta",
       [](RunConfig& c, const std::string& v) { c.gibbs_theta = parse_double(v); }},
      {"method", [](RunConfig& c, const std::string& v) { c.method = v; }},
      {"dt", [](RunConfig& c, const std::string& v) { c.dt = parse_double(v); }},
      {"stability_factor",
       [](RunConfig& c, const std::string& v) { c.stability_factor = parse_double(v); }},
      {"t_end", [](RunConfig& c, const std::string& v) { c.t_end = parse_double(v); }},
      {"snapshot_stride",
       [](RunConfig& c, const std::string& v) { c.snapshot_stride = parse_int(v); }},
      {"nt", [](RunConfig& c, const std::string& v) { c.nt = parse_int(v); }},
      {"window", [](RunConfig& c, const std::string& v) { c.window = parse_double(v); }},
      {"ic_weight", [](RunConfig& c, const std::string& v) { c.ic_weight = parse_double(v); }},
      {"tol", [](RunConfig& c, const std::string& v) { c.tol = parse_double(v); }},
      {"max_iter", [](RunConfig& c, const std::string& v) { c.max_iter = parse_int(v); }},
      {"cutoff_epsilon",
       [](RunConfig& c, const std::string& v) { c.cutoff_epsilon = parse_double(v); }},
      {"cutoff_nmin",
       [](RunConfig& c, const std::string& v) { c.cutoff_nmin = parse_int(v); }},
      {"cutoff_nmax",
       [](RunConfig& c, const std::string& v) { c.cutoff_nmax = parse_int(v); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
      {"input_csv", [](RunConfig& c, const std::string& v) { c.input_csv = v; }},
      {"pgm_clip", [](RunConfig& c, const std::string& v) { c.pgm_clip = parse_double(v); }},
      {"emit_pgm", [](RunConfig& c, const std::string& v) { c.emit_pgm = parse_bool(v); }},
      {"emit_coeffs",
       [](RunConfig& c, const std::string& v) { c.emit_coeffs = parse_bool(v); }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = parse_ulong(v); }},
  };
  return table;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value,
             const std::string& where) {
  auto it = setters().find(key);
  if (it == setters().end()) {
    std::string best;
    int best_d = 1 << 30;
    for (const auto& [name, fn] : setters()) {
      (void)fn;
      const int d = levenshtein(key, name);
      if (d < best_d) {
        best_d = d;
        best = name;
      }
    }
    throw config_error(where + ": unknown config key '" + key + "' (did you mean '" +
                       best + "'?)");
  }
  try {
    it->second(cfg, value);
  } catch (const std::exception&) {
    throw config_error(where + ": malformed value for key '" + key + "': '" + value + "'");
  }
}

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [name, fn] : setters()) {
    (void)fn;
    keys.push_back(name);
  }
  return keys;
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig cfg = base;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) +
                         ": expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    set_key(cfg, key, value, "config line " + std::to_string(lineno));
  }
  return cfg;
}

RunConfig parse_config(const std::string& text) { return parse_config(text, RunConfig{}); }

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw config_error("--set: expected key=value, got '" + assignment + "'");
  set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set");
}

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& key, const std::string& why) {
    throw config_error("config key '" + key + "': " + why);
  };
  if (cfg.subcommand != "evolve" && cfg.subcommand != "gdr" &&
      cfg.subcommand != "analyze" && cfg.subcommand != "selftest")
    fail("subcommand", "must be one of evolve, gdr, analyze, selftest");
  if (!power_of_two(cfg.nq) || cfg.nq < 32) fail("nq", "must be a power of two >= 32");
  if (!power_of_two(cfg.np) || cfg.np < 32) fail("np", "must be a power of two >= 32");
  if (cfg.lq <= 0.0) fail("lq", "must be positive");
  if (cfg.lp <= 0.0) fail("lp", "must be positive");
  if (cfg.hbar <= 0.0) fail("hbar", "must be positive");
  if (cfg.mass <= 0.0) fail("mass", "must be positive");
  if (cfg.potential.empty()) fail("potential", "must list at least one coefficient");
  for (const auto* key : {"family_q", "family_p", "family_t"}) {
    const std::string& name = std::string(key) == "family_q" ? cfg.family_q
                              : std::string(key) == "family_p" ? cfg.family_p
                                                               : cfg.family_t;
    try {
      make_family(name);
    } catch (const config_error& e) {
      fail(key, e.what());
    }
  }
  if (cfg.moyal_cut < 0) fail("moyal_cut", "must be nonnegative");
  if (cfg.decoherence < 0.0) fail("decoherence", "must be nonnegative");
  if (cfg.state != "coherent" && cfg.state != "cat" && cfg.state != "gibbs")
    fail("state", "must be one of coherent, cat, gibbs");
  if (cfg.state_omega <= 0.0) fail("state_omega", "must be positive");
  if (cfg.gibbs_theta <= 0.0) fail("gibbs_theta", "must be positive");
  if (cfg.method != "rk4") fail("method", "must be rk4");
  if (cfg.dt < 0.0) fail("dt", "must be nonnegative (0 selects the stability bound)");
  if (cfg.stability_factor <= 0.0 || cfg.stability_factor > 1.0)
    fail("stability_factor", "must lie in (0, 1]");
  if (cfg.t_end <= 0.0) fail("t_end", "must be positive");
  if (cfg.snapshot_stride < 0) fail("snapshot_stride", "must be nonnegative");
  if (!power_of_two(cfg.nt) || cfg.nt < 4) fail("nt", "must be a power of two >= 4");
  if (cfg.window < 0.0) fail("window", "must be nonnegative (0 selects t_end)");
  if (cfg.ic_weight <= 0.0) fail("ic_weight", "must be positive");
  if (cfg.tol <= 0.0) fail("tol", "must be positive");
  if (cfg.max_iter < 1) fail("max_iter", "must be positive");
  if (cfg.cutoff_epsilon < 0.0) fail("cutoff_epsilon", "must be nonnegative");
  if (!power_of_two(cfg.cutoff_nmin) || cfg.cutoff_nmin < 32)
    fail("cutoff_nmin", "must be a power of two >= 32");
  if (!power_of_two(cfg.cutoff_nmax) || cfg.cutoff_nmax <= cfg.cutoff_nmin)
    fail("cutoff_nmax", "must be a power of two > cutoff_nmin");
  if (cfg.pgm_clip < 0.0) fail("pgm_clip", "must be nonnegative");
}

PhaseSpaceGrid make_grid(const RunConfig& cfg) {
  int jq = 0, jp = 0;
  while ((1 << jq) < cfg.nq) ++jq;
  while ((1 << jp) < cfg.np) ++jp;
  return PhaseSpaceGrid::create(cfg.q0, cfg.lq, cfg.p0, cfg.lp, jq, jp, cfg.hbar,
                                cfg.mass);
}

}  // namespace wigsim
