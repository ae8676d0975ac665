#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "wigsim/connection.hpp"
#include "wigsim/diagnostics.hpp"
#include "wigsim/moyal.hpp"
#include "wigsim/scales.hpp"
#include "wigsim/transform.hpp"

namespace wigsim {

// 17 significant digits: exact binary64 round trip.
std::string format_double(double v);

// Field CSV: header "q,p,w", row-major with q as the outer loop.
void write_field_csv(const CoefficientField& field, const std::filesystem::path& path);
CoefficientField read_field_csv(const std::filesystem::path& path, double hbar,
                                double mass);

// Plain-text P2 PGM, 255 gray levels; [-clip, +clip] maps linearly onto
// [0, 255] with saturation. clip <= 0 selects max|W|. Zero maps to 128
// (round half away from zero). Rows are q, columns p.
void write_pgm(const CoefficientField& field, const std::filesystem::path& path,
               double clip = 0.0);

void write_connection_csv(const ConnectionTable& table, const std::filesystem::path& path);

// Scale-energy table: columns (level, energy, fraction); level -1 is the
// coarse block.
void write_scales_csv(const std::vector<ScaleEnergyRow>& rows,
                      const std::filesystem::path& path);

// Coefficient audit format: block in {coarse,horizontal,vertical,diagonal},
// then level,row,col,value.
void write_decomposition_csv(const Decomposition2d& decomp,
                             const std::filesystem::path& path);

// Diagnostics CSV column order (documented):
// time,normalization,purity,negativity_volume,energy,boundary_mass
void write_diagnostics_csv(const std::vector<DiagnosticsReport>& rows,
                           const std::filesystem::path& path);

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

// Every effective parameter, library versions, and a checksum per emitted file.
class RunManifest {
 public:
  void set_param(const std::string& key, const std::string& value);
  void set_param(const std::string& key, double value);
  void set_param(const std::string& key, long long value);
  void add_file(const std::filesystem::path& path);
  void write(const std::filesystem::path& path) const;

 private:
  std::map<std::string, std::string> params_;
  std::vector<std::pair<std::string, std::uint64_t>> files_;
};

}  // namespace wigsim
