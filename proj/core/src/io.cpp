#include "wigsim/io.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "wigsim/errors.hpp"

namespace wigsim {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

void write_field_csv(const CoefficientField& field, const std::filesystem::path& path) {
  if (!field.all_finite())
    throw numerical_error("write_field_csv: field contains non-finite values");
  auto out = open_out(path);
  out << "q,p,w\n";
  const auto& g = field.grid;
  for (int i = 0; i < g.nq(); ++i) {
    const std::string qs = format_double(g.q(i));
    for (int j = 0; j < g.np(); ++j) {
      out << qs << ',' << format_double(g.p(j)) << ','
          << format_double(field.data(i, j)) << '\n';
    }
  }
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

CoefficientField read_field_csv(const std::filesystem::path& path, double hbar,
                                double mass) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "q,p,w")
    throw io_error("'" + path.string() + "': expected header 'q,p,w'");
  std::vector<double> qs, ps, ws;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw io_error("'" + path.string() + "': malformed row '" + line + "'");
    qs.push_back(std::stod(a));
    ps.push_back(std::stod(b));
    ws.push_back(std::stod(c));
  }
  if (ws.empty()) throw io_error("'" + path.string() + "': no data rows");

  std::vector<double> uq, up;
  for (double q : qs)
    if (uq.empty() || q != uq.back()) {
      if (std::find(uq.begin(), uq.end(), q) == uq.end()) uq.push_back(q);
    }
  // p values repeat with period np: collect until the first repeat
  for (double p : ps) {
    if (!up.empty() && p == up[0]) break;
    up.push_back(p);
  }
  const int nq = static_cast<int>(uq.size());
  const int np = static_cast<int>(up.size());
  if (static_cast<std::size_t>(nq) * np != ws.size())
    throw io_error("'" + path.string() + "': grid is not a full q-outer raster");
  const double dq = nq > 1 ? uq[1] - uq[0] : 1.0;
  const double dp = np > 1 ? up[1] - up[0] : 1.0;
  int jq = 0, jp = 0;
  while ((1 << jq) < nq) ++jq;
  while ((1 << jp) < np) ++jp;
  if ((1 << jq) != nq || (1 << jp) != np)
    throw io_error("'" + path.string() + "': grid dimensions must be powers of two");
  PhaseSpaceGrid grid =
      PhaseSpaceGrid::create(uq[0], nq * dq, up[0], np * dp, jq, jp, hbar, mass);
  CoefficientField f = zero_field(grid);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < np; ++j) f.data(i, j) = ws[static_cast<std::size_t>(i) * np + j];
  return f;
}

void write_pgm(const CoefficientField& field, const std::filesystem::path& path,
               double clip) {
  if (!field.all_finite())
    throw numerical_error("write_pgm: field contains non-finite values");
  double c = clip;
  if (c <= 0.0) c = field.data.cwiseAbs().maxCoeff();
  if (c == 0.0) c = 1.0;
  auto out = open_out(path);
  out << "P2\n" << field.grid.np() << ' ' << field.grid.nq() << "\n255\n";
  for (int i = 0; i < field.grid.nq(); ++i) {
    for (int j = 0; j < field.grid.np(); ++j) {
      double v = field.data(i, j) / c;
      v = std::clamp(v, -1.0, 1.0);
      long g = std::llround(127.5 + 127.5 * v);  // half away from zero: 0 -> 128
      g = std::clamp(g, 0L, 255L);
      out << g << (j + 1 == field.grid.np() ? '\n' : ' ');
    }
  }
  if (!out) throw io_error("write failed for '" + path.string() + "'");
}

void write_connection_csv(const ConnectionTable& table, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "shift,value\n";
  const int w = table.max_shift();
  for (int k = -w; k <= w; ++k)
    out << k << ',' << format_double(table.at(k)) << '\n';
}

void write_scales_csv(const std::vector<ScaleEnergyRow>& rows,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "level,energy,fraction\n";
  for (const auto& r : rows)
    out << r.level << ',' << format_double(r.energy) << ',' << format_double(r.fraction)
        << '\n';
}

void write_decomposition_csv(const Decomposition2d& decomp,
                             const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "block,level,row,col,value\n";
  auto dump = [&out](const char* block, int level, const Eigen::MatrixXd& m) {
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        out << block << ',' << level << ',' << r << ',' << c << ','
            << format_double(m(r, c)) << '\n';
  };
  dump("coarse", decomp.coarse_level, decomp.coarse());
  for (int j = decomp.coarse_level; j < decomp.finest_level; ++j) {
    dump("horizontal", j, decomp.horizontal(j));
    dump("vertical", j, decomp.vertical(j));
    dump("diagonal", j, decomp.diagonal(j));
  }
}

void write_diagnostics_csv(const std::vector<DiagnosticsReport>& rows,
                           const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "time,normalization,purity,negativity_volume,energy,boundary_mass\n";
  for (const auto& r : rows)
    out << format_double(r.time) << ',' << format_double(r.normalization) << ','
        << format_double(r.purity) << ',' << format_double(r.negativity_volume) << ','
        << format_double(r.energy) << ',' << format_double(r.boundary_mass) << '\n';
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path.string() + "' for checksumming");
  std::uint64_t h = 1469598103934665603ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  return h;
}

void RunManifest::set_param(const std::string& key, const std::string& value) {
  params_[key] = value;
}
void RunManifest::set_param(const std::string& key, double value) {
  params_[key] = format_double(value);
}
void RunManifest::set_param(const std::string& key, long long value) {
  params_[key] = std::to_string(value);
}

void RunManifest::add_file(const std::filesystem::path& path) {
  files_.emplace_back(path.filename().string(), fnv1a64_file(path));
}

void RunManifest::write(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["parameters"] = params_;
  j["versions"] = {
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
      {"compiler", __VERSION__},
  };
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, sum] : files_) {
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(sum));
    files.push_back({{"name", name}, {"fnv1a64", hex}});
  }
  j["files"] = files;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace wigsim
