#pragma once

#include <Eigen/Dense>
#include <vector>

#include "wigsim/wavelets.hpp"

namespace wigsim {

// Multilevel decomposition of a length-2^J signal down to level c. Blocks are
// critically sampled: |coarse| = 2^c, |details[i]| = 2^{c+i}.
struct Decomposition1d {
  int coarse_level = 0;
  int finest_level = 0;
  std::vector<double> coarse;
  std::vector<std::vector<double>> details;  // details[i] is level c+i

  int levels() const { return finest_level - coarse_level; }
  std::size_t total_size() const;
  double coarse_energy() const;
  double detail_energy(int level) const;  // level in [c, J)
  double total_energy() const;
};

// 2-D standard (tensor) form: the full multilevel transform applied to every
// row, then every column, so the coefficients of a rank-one field are the
// outer product of the 1-D coefficients. Along each axis the flat layout is
// [coarse | d_c | d_{c+1} | ...], so detail level j occupies index range
// [2^j, 2^{j+1}). Level j of the 2-D decomposition is the index annulus
// between scales 2^j and 2^{j+1}, split into the fixed orientation order
// (horizontal, vertical, diagonal) = (detail-q x smoother-p,
// smoother-q x detail-p, detail-q x detail-p). Rows index q, columns p.
struct Decomposition2d {
  int coarse_level = 0;
  int finest_level = 0;  // max of the per-axis dyadic levels
  int levels_q = 0, levels_p = 0;
  Eigen::MatrixXd coeffs;

  int levels() const { return finest_level - coarse_level; }
  std::size_t total_size() const { return static_cast<std::size_t>(coeffs.size()); }
  double coarse_energy() const;
  double detail_energy(int level) const;  // level in [c, finest)
  double total_energy() const { return coeffs.squaredNorm(); }

  Eigen::MatrixXd coarse() const;
  Eigen::MatrixXd horizontal(int level) const;
  Eigen::MatrixXd vertical(int level) const;
  Eigen::MatrixXd diagonal(int level) const;
};

Decomposition1d fwt_forward_1d(const std::vector<double>& samples,
                               const WaveletFamily& family, int coarse_level);
std::vector<double> fwt_inverse_1d(const Decomposition1d& decomp,
                                   const WaveletFamily& family);

Decomposition2d fwt_2d(const Eigen::MatrixXd& field, const WaveletFamily& family,
                       int coarse_level);
Eigen::MatrixXd fwt_2d_inverse(const Decomposition2d& decomp,
                               const WaveletFamily& family);

// Flat coefficient layout [coarse | d_c | d_{c+1} | ... | d_{J-1}]; this is the
// ordering used for operator matrices in the wavelet representation.
std::vector<double> flatten(const Decomposition1d& decomp);
Decomposition1d unflatten(const std::vector<double>& coeffs, int coarse_level);

// W A W^T for the orthonormal multilevel analysis operator W.
Eigen::MatrixXd wavelet_representation(const Eigen::MatrixXd& dense,
                                       const WaveletFamily& family, int coarse_level);

struct PacketNode {
  int level = 0;
  int band = 0;  // natural (Paley) order: children of (l, b) are (l+1, 2b|2b+1)
  auto operator<=>(const PacketNode&) const = default;
};

struct PacketBasis {
  int tree_depth = 0;
  std::vector<PacketNode> selected_nodes;  // disjoint cover of the tree
  double entropy = 0.0;
};

// Full packet tree: tree[l][b] holds the band coefficients at level l.
std::vector<std::vector<std::vector<double>>> packet_analyze(
    const std::vector<double>& samples, const WaveletFamily& family, int max_depth);

// Signal whose packet coefficients equal `coeffs` on one node and vanish on
// the rest of the tiling.
std::vector<double> packet_node_reconstruct(const PacketNode& node,
                                            const std::vector<double>& coeffs,
                                            const WaveletFamily& family,
                                            int signal_length);

PacketBasis best_basis(const std::vector<double>& samples,
                       const WaveletFamily& family, int max_depth);

// Shannon entropy -sum p_i ln p_i with p_i = c_i^2 / total_energy; zero
// coefficients contribute zero.
double shannon_entropy(const std::vector<double>& coeffs, double total_energy);

struct CompressedOperator {
  struct Entry {
    int row;
    int col;
    double value;
  };
  double threshold = 0.0;
  std::vector<Entry> retained;  // row-major order
  int original_dim = 0;
  double sparsity = 0.0;  // retained fraction of dim^2

  Eigen::VectorXd matvec(const Eigen::VectorXd& x) const;
};

// Drops entries with |value| <= tau. The dropped mass obeys the elementwise
// bound, so |(dense - compressed) x|_inf <= tau * dim * |x|_inf.
CompressedOperator compress_operator(const Eigen::MatrixXd& dense, double tau);

}  // namespace wigsim
