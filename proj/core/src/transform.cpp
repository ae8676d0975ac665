#include "wigsim/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "wigsim/errors.hpp"

namespace wigsim {

namespace {

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
  int j = 0;
  while ((std::size_t(1) << j) < n) ++j;
  return j;
}

// One periodic analysis step: smooth/detail at half length.
void analysis_step(const std::vector<double>& a, const WaveletFamily& fam,
                   std::vector<double>& smooth, std::vector<double>& detail) {
  const int n = static_cast<int>(a.size());
  const int half = n / 2;
  smooth.assign(half, 0.0);
  detail.assign(half, 0.0);
  for (int k = 0; k < half; ++k) {
    double s = 0.0, d = 0.0;
    for (int t = 0; t < fam.taps(); ++t) {
      const double v = a[(2 * k + t) % n];
      s += fam.lowpass[t] * v;
      d += fam.highpass[t] * v;
    }
    smooth[k] = s;
    detail[k] = d;
  }
}

// Adjoint of analysis_step (orthogonal transform, so also its inverse).
std::vector<double> synthesis_step(const std::vector<double>& smooth,
                                   const std::vector<double>& detail,
                                   const WaveletFamily& fam) {
  const int half = static_cast<int>(smooth.size());
  const int n = 2 * half;
  std::vector<double> a(n, 0.0);
  for (int k = 0; k < half; ++k) {
    for (int t = 0; t < fam.taps(); ++t) {
      const int idx = (2 * k + t) % n;
      a[idx] += fam.lowpass[t] * smooth[k] + fam.highpass[t] * detail[k];
    }
  }
  return a;
}

double energy(const std::vector<double>& v) {
  double e = 0.0;
  for (double x : v) e += x * x;
  return e;
}

}  // namespace

std::size_t Decomposition1d::total_size() const {
  std::size_t n = coarse.size();
  for (const auto& d : details) n += d.size();
  return n;
}

double Decomposition1d::coarse_energy() const { return energy(coarse); }

double Decomposition1d::detail_energy(int level) const {
  const int i = level - coarse_level;
  if (i < 0 || i >= static_cast<int>(details.size()))
    throw config_error("detail level out of range: " + std::to_string(level));
  return energy(details[i]);
}

double Decomposition1d::total_energy() const {
  double e = coarse_energy();
  for (const auto& d : details) e += energy(d);
  return e;
}

Decomposition1d fwt_forward_1d(const std::vector<double>& samples,
                               const WaveletFamily& family, int coarse_level) {
  if (!is_pow2(samples.size()))
    throw config_error("fwt: sample count must be a power of two, got " +
                       std::to_string(samples.size()));
  const int finest = log2_exact(samples.size());
  if (coarse_level < 0 || coarse_level >= finest)
    throw config_error("fwt: coarse level " + std::to_string(coarse_level) +
                       " must satisfy 0 <= c < " + std::to_string(finest));

  Decomposition1d out;
  out.coarse_level = coarse_level;
  out.finest_level = finest;
  out.details.resize(finest - coarse_level);
  std::vector<double> current = samples;
  for (int j = finest; j > coarse_level; --j) {
    std::vector<double> smooth, detail;
    analysis_step(current, family, smooth, detail);
    out.details[j - 1 - coarse_level] = std::move(detail);
    current = std::move(smooth);
  }
  out.coarse = std::move(current);
  return out;
}

std::vector<double> fwt_inverse_1d(const Decomposition1d& decomp,
                                   const WaveletFamily& family) {
  if (decomp.coarse.size() != (std::size_t(1) << decomp.coarse_level))
    throw config_error("fwt: decomposition coarse block has wrong size");
  std::vector<double> current = decomp.coarse;
  for (int i = 0; i < static_cast<int>(decomp.details.size()); ++i) {
    const auto& detail = decomp.details[i];
    if (detail.size() != current.size())
      throw config_error("fwt: detail block at level " +
                         std::to_string(decomp.coarse_level + i) +
                         " does not match the pyramid");
    current = synthesis_step(current, detail, family);
  }
  return current;
}

namespace {

// [start, end) index range of level `j` in the flat 1-D layout: the coarse
// block occupies [0, 2^c) and detail level j occupies [2^j, 2^{j+1}).
std::pair<int, int> level_range(int j, int axis_levels) {
  if (j >= axis_levels) return {0, 0};
  return {1 << j, 2 << j};
}

}  // namespace

double Decomposition2d::coarse_energy() const {
  const int n = 1 << coarse_level;
  return coeffs.block(0, 0, n, n).squaredNorm();
}

Eigen::MatrixXd Decomposition2d::coarse() const {
  const int n = 1 << coarse_level;
  return coeffs.block(0, 0, n, n);
}

Eigen::MatrixXd Decomposition2d::horizontal(int level) const {
  auto [r0, r1] = level_range(level, levels_q);
  const int cols = std::min(1 << level, static_cast<int>(coeffs.cols()));
  if (r1 == r0) return Eigen::MatrixXd(0, 0);
  return coeffs.block(r0, 0, r1 - r0, cols);
}

Eigen::MatrixXd Decomposition2d::vertical(int level) const {
  auto [c0, c1] = level_range(level, levels_p);
  const int rows = std::min(1 << level, static_cast<int>(coeffs.rows()));
  if (c1 == c0) return Eigen::MatrixXd(0, 0);
  return coeffs.block(0, c0, rows, c1 - c0);
}

Eigen::MatrixXd Decomposition2d::diagonal(int level) const {
  auto [r0, r1] = level_range(level, levels_q);
  auto [c0, c1] = level_range(level, levels_p);
  if (r1 == r0 || c1 == c0) return Eigen::MatrixXd(0, 0);
  return coeffs.block(r0, c0, r1 - r0, c1 - c0);
}

double Decomposition2d::detail_energy(int level) const {
  if (level < coarse_level || level >= finest_level)
    throw config_error("detail level out of range: " + std::to_string(level));
  return horizontal(level).squaredNorm() + vertical(level).squaredNorm() +
         diagonal(level).squaredNorm();
}

Decomposition2d fwt_2d(const Eigen::MatrixXd& field, const WaveletFamily& family,
                       int coarse_level) {
  if (!is_pow2(field.rows()) || !is_pow2(field.cols()))
    throw config_error("fwt_2d: field dimensions must be powers of two");
  const int jq = log2_exact(field.rows());
  const int jp = log2_exact(field.cols());
  if (coarse_level < 0 || coarse_level >= std::min(jq, jp))
    throw config_error("fwt_2d: coarse level " + std::to_string(coarse_level) +
                       " must satisfy 0 <= c < " + std::to_string(std::min(jq, jp)));

  Decomposition2d out;
  out.coarse_level = coarse_level;
  out.finest_level = std::max(jq, jp);
  out.levels_q = jq;
  out.levels_p = jp;
  out.coeffs.resize(field.rows(), field.cols());

  std::vector<double> buf;
  for (int r = 0; r < field.rows(); ++r) {
    buf.assign(field.row(r).begin(), field.row(r).end());
    auto w = flatten(fwt_forward_1d(buf, family, coarse_level));
    for (int c = 0; c < field.cols(); ++c) out.coeffs(r, c) = w[c];
  }
  for (int c = 0; c < field.cols(); ++c) {
    buf.assign(out.coeffs.col(c).begin(), out.coeffs.col(c).end());
    auto w = flatten(fwt_forward_1d(buf, family, coarse_level));
    for (int r = 0; r < field.rows(); ++r) out.coeffs(r, c) = w[r];
  }
  return out;
}

Eigen::MatrixXd fwt_2d_inverse(const Decomposition2d& decomp, const WaveletFamily& family) {
  if (!is_pow2(decomp.coeffs.rows()) || !is_pow2(decomp.coeffs.cols()))
    throw config_error("fwt_2d: decomposition has invalid shape");
  Eigen::MatrixXd out = decomp.coeffs;
  std::vector<double> buf;
  for (int c = 0; c < out.cols(); ++c) {
    buf.assign(out.col(c).begin(), out.col(c).end());
    auto x = fwt_inverse_1d(unflatten(buf, decomp.coarse_level), family);
    for (int r = 0; r < out.rows(); ++r) out(r, c) = x[r];
  }
  for (int r = 0; r < out.rows(); ++r) {
    buf.assign(out.row(r).begin(), out.row(r).end());
    auto x = fwt_inverse_1d(unflatten(buf, decomp.coarse_level), family);
    for (int c = 0; c < out.cols(); ++c) out(r, c) = x[c];
  }
  return out;
}

std::vector<double> flatten(const Decomposition1d& decomp) {
  std::vector<double> out;
  out.reserve(decomp.total_size());
  out.insert(out.end(), decomp.coarse.begin(), decomp.coarse.end());
  for (const auto& d : decomp.details) out.insert(out.end(), d.begin(), d.end());
  return out;
}

Decomposition1d unflatten(const std::vector<double>& coeffs, int coarse_level) {
  if (!is_pow2(coeffs.size()))
    throw config_error("unflatten: coefficient count must be a power of two");
  const int finest = log2_exact(coeffs.size());
  if (coarse_level < 0 || coarse_level >= finest)
    throw config_error("unflatten: coarse level out of range");
  Decomposition1d out;
  out.coarse_level = coarse_level;
  out.finest_level = finest;
  std::size_t pos = 0;
  out.coarse.assign(coeffs.begin(), coeffs.begin() + (1 << coarse_level));
  pos += std::size_t(1) << coarse_level;
  for (int j = coarse_level; j < finest; ++j) {
    const std::size_t len = std::size_t(1) << j;
    out.details.emplace_back(coeffs.begin() + pos, coeffs.begin() + pos + len);
    pos += len;
  }
  return out;
}

Eigen::MatrixXd wavelet_representation(const Eigen::MatrixXd& dense,
                                       const WaveletFamily& family, int coarse_level) {
  if (dense.rows() != dense.cols())
    throw config_error("wavelet_representation: matrix must be square");
  const int n = static_cast<int>(dense.rows());
  Eigen::MatrixXd tmp(n, n), out(n, n);
  std::vector<double> buf(n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) buf[r] = dense(r, c);
    auto w = flatten(fwt_forward_1d(buf, family, coarse_level));
    for (int r = 0; r < n; ++r) tmp(r, c) = w[r];
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) buf[c] = tmp(r, c);
    auto w = flatten(fwt_forward_1d(buf, family, coarse_level));
    for (int c = 0; c < n; ++c) out(r, c) = w[c];
  }
  return out;
}

double shannon_entropy(const std::vector<double>& coeffs, double total_energy) {
  if (total_energy <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : coeffs) {
    const double p = c * c / total_energy;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

std::vector<std::vector<std::vector<double>>> packet_analyze(
    const std::vector<double>& samples, const WaveletFamily& family, int max_depth) {
  if (!is_pow2(samples.size()))
    throw config_error("packet_analyze: sample count must be a power of two");
  const int finest = log2_exact(samples.size());
  if (max_depth < 0 || max_depth > finest)
    throw config_error("packet_analyze: max_depth must be in 0..J");
  std::vector<std::vector<std::vector<double>>> tree(max_depth + 1);
  tree[0].push_back(samples);
  for (int l = 0; l < max_depth; ++l) {
    tree[l + 1].resize(std::size_t(2) << l);
    for (int b = 0; b < static_cast<int>(tree[l].size()); ++b) {
      std::vector<double> s, d;
      analysis_step(tree[l][b], family, s, d);
      tree[l + 1][2 * b] = std::move(s);
      tree[l + 1][2 * b + 1] = std::move(d);
    }
  }
  return tree;
}

std::vector<double> packet_node_reconstruct(const PacketNode& node,
                                            const std::vector<double>& coeffs,
                                            const WaveletFamily& family,
                                            int signal_length) {
  if (!is_pow2(signal_length))
    throw config_error("packet_node_reconstruct: signal length must be a power of two");
  if (static_cast<int>(coeffs.size()) != signal_length >> node.level)
    throw config_error("packet_node_reconstruct: coefficient count does not match node");
  std::vector<double> current = coeffs;
  int band = node.band;
  for (int l = node.level; l > 0; --l) {
    std::vector<double> zero(current.size(), 0.0);
    current = (band % 2 == 0) ? synthesis_step(current, zero, family)
                              : synthesis_step(zero, current, family);
    band /= 2;
  }
  return current;
}

PacketBasis best_basis(const std::vector<double>& samples,
                       const WaveletFamily& family, int max_depth) {
  auto tree = packet_analyze(samples, family, max_depth);
  const double total = energy(samples);

  // Coifman-Wickerhauser bottom-up selection with the additive entropy cost.
  const int depth = max_depth;
  std::vector<std::vector<double>> best_cost(depth + 1);
  std::vector<std::vector<bool>> keep_leaf(depth + 1);
  for (int l = depth; l >= 0; --l) {
    const int bands = 1 << l;
    best_cost[l].resize(bands);
    keep_leaf[l].resize(bands);
    for (int b = 0; b < bands; ++b) {
      const double own = shannon_entropy(tree[l][b], total);
      if (l == depth) {
        best_cost[l][b] = own;
        keep_leaf[l][b] = true;
      } else {
        const double split = best_cost[l + 1][2 * b] + best_cost[l + 1][2 * b + 1];
        if (own <= split) {
          best_cost[l][b] = own;
          keep_leaf[l][b] = true;
        } else {
          best_cost[l][b] = split;
          keep_leaf[l][b] = false;
        }
      }
    }
  }

  PacketBasis basis;
  basis.tree_depth = depth;
  basis.entropy = best_cost[0][0];
  // top-down collection
  std::vector<PacketNode> stack{{0, 0}};
  while (!stack.empty()) {
    PacketNode n = stack.back();
    stack.pop_back();
    if (keep_leaf[n.level][n.band]) {
      basis.selected_nodes.push_back(n);
    } else {
      stack.push_back({n.level + 1, 2 * n.band + 1});
      stack.push_back({n.level + 1, 2 * n.band});
    }
  }
  std::sort(basis.selected_nodes.begin(), basis.selected_nodes.end());
  return basis;
}

Eigen::VectorXd CompressedOperator::matvec(const Eigen::VectorXd& x) const {
  if (x.size() != original_dim)
    throw config_error("compressed matvec: dimension mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(original_dim);
  for (const auto& e : retained) y(e.row) += e.value * x(e.col);
  return y;
}

CompressedOperator compress_operator(const Eigen::MatrixXd& dense, double tau) {
  if (dense.rows() != dense.cols())
    throw config_error("compress_operator: matrix must be square");
  if (tau < 0.0) throw config_error("compress_operator: threshold must be nonnegative");
  CompressedOperator op;
  op.threshold = tau;
  op.original_dim = static_cast<int>(dense.rows());
  for (int r = 0; r < dense.rows(); ++r)
    for (int c = 0; c < dense.cols(); ++c) {
      const double v = dense(r, c);
      if (std::abs(v) > tau) op.retained.push_back({r, c, v});
    }
  const double dim = static_cast<double>(op.original_dim);
  op.sparsity = op.retained.empty() ? 0.0 : static_cast<double>(op.retained.size()) / (dim * dim);
  return op;
}

}  // namespace wigsim
