#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wigsim/connection.hpp"
#include "wigsim/errors.hpp"
#include "wigsim/transform.hpp"

using namespace wigsim;

namespace {

std::mt19937_64 rng(20250810);

std::vector<double> random_signal(std::size_t n) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = unit(rng);
  return x;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / (den > 0 ? den : 1.0));
}

double vec_energy(const std::vector<double>& v) {
  double e = 0.0;
  for (double x : v) e += x * x;
  return e;
}

// All admissible tilings of the packet tree rooted at (level, band) down to
// max_depth; used as the brute-force optimum oracle.
std::vector<std::vector<PacketNode>> enumerate_tilings(int level, int band, int max_depth) {
  std::vector<std::vector<PacketNode>> out;
  out.push_back({{level, band}});
  if (level == max_depth) return out;
  auto left = enumerate_tilings(level + 1, 2 * band, max_depth);
  auto right = enumerate_tilings(level + 1, 2 * band + 1, max_depth);
  for (const auto& l : left)
    for (const auto& r : right) {
      std::vector<PacketNode> combo = l;
      combo.insert(combo.end(), r.begin(), r.end());
      out.push_back(std::move(combo));
    }
  return out;
}

}  // namespace

TEST_CASE("constant vectors live entirely in the coarse block") {
  const auto fam = make_family("haar");
  std::vector<double> x(64, 3.25);
  auto d = fwt_forward_1d(x, fam, 0);
  for (const auto& level : d.details)
    for (double v : level) CHECK(std::abs(v) < 1e-12);
  CHECK(d.coarse_energy() == doctest::Approx(vec_energy(x)).epsilon(1e-12));
}

TEST_CASE("unit impulse reconstructs exactly") {
  const auto fam = make_family("haar");
  std::vector<double> e0(8, 0.0);
  e0[0] = 1.0;
  auto back = fwt_inverse_1d(fwt_forward_1d(e0, fam, 0), fam);
  for (std::size_t i = 0; i < e0.size(); ++i) CHECK(std::abs(back[i] - e0[i]) <= 1e-12);
}

TEST_CASE("round trip and energy conservation on random input") {
  for (const auto& name : {"haar", "daubechies-2", "daubechies-4", "daubechies-6",
                           "daubechies-8"}) {
    const auto fam = make_family(name);
    auto x = random_signal(1024);
    for (int c : {0, 3, 8}) {
      auto d = fwt_forward_1d(x, fam, c);
      CHECK(d.total_size() == x.size());
      CHECK(std::abs(d.total_energy() - vec_energy(x)) <= 1e-10 * vec_energy(x));
      auto back = fwt_inverse_1d(d, fam);
      CAPTURE(name);
      CAPTURE(c);
      CHECK(rel_l2(back, x) <= 1e-10);
    }
  }
}

TEST_CASE("gaussian round trip at tight tolerance") {
  const auto fam = make_family("daubechies-6");
  std::vector<double> x(512);
  for (int i = 0; i < 512; ++i) {
    const double t = (i - 256.0) / 40.0;
    x[i] = std::exp(-t * t);
  }
  auto back = fwt_inverse_1d(fwt_forward_1d(x, fam, 2), fam);
  CHECK(rel_l2(back, x) <= 1e-10);
}

TEST_CASE("transform is linear") {
  const auto fam = make_family("daubechies-4");
  auto x = random_signal(256);
  auto y = random_signal(256);
  std::vector<double> combo(256);
  const double alpha = 0.7, beta = -2.25;
  for (int i = 0; i < 256; ++i) combo[i] = alpha * x[i] + beta * y[i];
  auto dx = flatten(fwt_forward_1d(x, fam, 1));
  auto dy = flatten(fwt_forward_1d(y, fam, 1));
  auto dc = flatten(fwt_forward_1d(combo, fam, 1));
  for (int i = 0; i < 256; ++i)
    CHECK(std::abs(dc[i] - (alpha * dx[i] + beta * dy[i])) <= 1e-12);
}

TEST_CASE("zeroing details of a constant vector is the identity") {
  const auto fam = make_family("daubechies-3");
  std::vector<double> x(128, -1.5);
  auto d = fwt_forward_1d(x, fam, 2);
  for (auto& level : d.details) std::fill(level.begin(), level.end(), 0.0);
  auto back = fwt_inverse_1d(d, fam);
  for (double v : back) CHECK(v == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("input validation") {
  const auto fam = make_family("haar");
  CHECK_THROWS_AS(fwt_forward_1d(std::vector<double>(100, 0.0), fam, 0), config_error);
  CHECK_THROWS_AS(fwt_forward_1d(std::vector<double>(64, 0.0), fam, 6), config_error);
  Decomposition1d broken;
  broken.coarse_level = 2;
  broken.finest_level = 3;
  broken.coarse = {1.0, 2.0};  // wrong size for level 2
  broken.details = {{0.0, 0.0, 0.0, 0.0}};
  CHECK_THROWS_AS(fwt_inverse_1d(broken, fam), config_error);
}

TEST_CASE("2-D transform separates rank-one fields") {
  const auto fam = make_family("daubechies-4");
  auto u = random_signal(64);
  auto v = random_signal(32);
  Eigen::MatrixXd field(64, 32);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 32; ++j) field(i, j) = u[i] * v[j];
  const int c = 2;
  auto d2 = fwt_2d(field, fam, c);
  CHECK(d2.total_size() == 64u * 32u);

  auto du = flatten(fwt_forward_1d(u, fam, c));
  auto dv = flatten(fwt_forward_1d(v, fam, c));
  double worst = 0.0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 32; ++j)
      worst = std::max(worst, std::abs(d2.coeffs(i, j) - du[i] * dv[j]));
  CHECK(worst <= 1e-10);
}

TEST_CASE("2-D level blocks tile the coefficient matrix") {
  const auto fam = make_family("daubechies-2");
  Eigen::MatrixXd field = Eigen::MatrixXd::Random(64, 32);
  auto d = fwt_2d(field, fam, 2);
  std::size_t count = static_cast<std::size_t>(d.coarse().size());
  double energy = d.coarse_energy();
  for (int j = d.coarse_level; j < d.finest_level; ++j) {
    count += d.horizontal(j).size() + d.vertical(j).size() + d.diagonal(j).size();
    energy += d.detail_energy(j);
  }
  CHECK(count == 64u * 32u);
  CHECK(energy == doctest::Approx(d.total_energy()).epsilon(1e-12));
}

TEST_CASE("2-D constant field concentrates in the coarse block") {
  const auto fam = make_family("daubechies-2");
  Eigen::MatrixXd field = Eigen::MatrixXd::Constant(64, 64, 0.77);
  auto d = fwt_2d(field, fam, 1);
  for (int j = d.coarse_level; j < d.finest_level; ++j)
    CHECK(d.detail_energy(j) <= 1e-18 * d.total_energy());
}

TEST_CASE("2-D gaussian round trip") {
  const auto fam = make_family("daubechies-6");
  Eigen::MatrixXd field(256, 256);
  for (int i = 0; i < 256; ++i)
    for (int j = 0; j < 256; ++j) {
      const double x = (i - 128.0) / 24.0, y = (j - 128.0) / 24.0;
      field(i, j) = std::exp(-x * x - y * y);
    }
  auto d = fwt_2d(field, fam, 3);
  CHECK(std::abs(d.total_energy() - field.squaredNorm()) <=
        1e-10 * field.squaredNorm());
  Eigen::MatrixXd back = fwt_2d_inverse(d, fam);
  CHECK((back - field).norm() / field.norm() <= 1e-10);
}

TEST_CASE("non-square fields transform and reconstruct") {
  const auto fam = make_family("daubechies-2");
  Eigen::MatrixXd field = Eigen::MatrixXd::Random(128, 64);
  auto d = fwt_2d(field, fam, 2);
  CHECK(d.total_size() == 128u * 64u);
  Eigen::MatrixXd back = fwt_2d_inverse(d, fam);
  CHECK((back - field).norm() / field.norm() <= 1e-10);
}

TEST_CASE("best basis: single-band oscillation selects the aligned node") {
  const auto fam = make_family("daubechies-4");
  const int n = 128;
  // Build the signal from a one-hot coefficient vector on node (2, 3).
  std::vector<double> coeffs(n >> 2, 0.0);
  coeffs[5] = 1.0;
  auto signal = packet_node_reconstruct({2, 3}, coeffs, fam, n);
  auto basis = best_basis(signal, fam, 4);
  bool found = false;
  for (const auto& node : basis.selected_nodes)
    if (node.level == 2 && node.band == 3) found = true;
  CHECK(found);
  CHECK(basis.entropy < shannon_entropy(signal, vec_energy(signal)));
}

TEST_CASE("best basis beats the root and the standard basis on random input") {
  const auto fam = make_family("daubechies-2");
  for (int trial = 0; trial < 5; ++trial) {
    auto x = random_signal(256);
    auto basis = best_basis(x, fam, 5);
    const double total = vec_energy(x);
    const double root = shannon_entropy(x, total);
    const double standard = shannon_entropy(flatten(fwt_forward_1d(x, fam, 3)), total);
    CHECK(basis.entropy <= root + 1e-12);
    CHECK(basis.entropy <= standard + 1e-12);
    // tiling covers the tree exactly: band widths sum to the signal length
    std::size_t covered = 0;
    for (const auto& node : basis.selected_nodes) covered += 256u >> node.level;
    CHECK(covered == 256u);
  }
}

TEST_CASE("constant vector selects a basis containing the deepest lowpass node") {
  const auto fam = make_family("haar");
  std::vector<double> x(64, 1.0);
  auto basis = best_basis(x, fam, 3);
  // All energy sits in the lowpass chain; the deepest lowpass node has the
  // fewest (equal) coefficients, hence the smallest entropy ln(64/2^3).
  bool has_deepest_lowpass = false;
  for (const auto& node : basis.selected_nodes)
    if (node.level == 3 && node.band == 0) has_deepest_lowpass = true;
  CHECK(has_deepest_lowpass);
  CHECK(basis.entropy == doctest::Approx(std::log(8.0)).epsilon(1e-12));
}

TEST_CASE("best basis equals the exhaustive optimum at depth <= 3") {
  const auto fam = make_family("daubechies-2");
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_signal(64);
    const double total = vec_energy(x);
    auto tree = packet_analyze(x, fam, 3);
    auto basis = best_basis(x, fam, 3);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& tiling : enumerate_tilings(0, 0, 3)) {
      double cost = 0.0;
      for (const auto& node : tiling)
        cost += shannon_entropy(tree[node.level][node.band], total);
      best = std::min(best, cost);
    }
    CHECK(basis.entropy == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("compression: identity matrix") {
  Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(64, 64);
  auto op = compress_operator(eye, 0.5);
  CHECK(op.retained.size() == 64);
  CHECK(op.sparsity == doctest::Approx(1.0 / 64).epsilon(1e-15));
  Eigen::VectorXd x = Eigen::VectorXd::Random(64);
  CHECK((op.matvec(x) - x).norm() == 0.0);
}

TEST_CASE("compression: tau = 0 keeps exactly the nonzeros") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
  m(1, 2) = 0.25;
  m(7, 0) = -3.0;
  auto op = compress_operator(m, 0.0);
  CHECK(op.retained.size() == 2);
}

TEST_CASE("compression: infinite threshold empties the operator") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(16, 16);
  auto op = compress_operator(m, std::numeric_limits<double>::infinity());
  CHECK(op.retained.empty());
  Eigen::VectorXd x = Eigen::VectorXd::Random(16);
  CHECK(op.matvec(x).norm() == 0.0);
}

TEST_CASE("wavelet representation of a derivative matrix compresses") {
  const auto fam = make_family("daubechies-4");
  // unit grid spacing, so entries are O(1) and the absolute threshold bites
  auto dm = derivative_matrix(fam, 1, 8, 256.0);
  Eigen::MatrixXd dense = dm.dense();
  Eigen::MatrixXd wrep = wavelet_representation(dense, fam, 5);
  const double tau = 1e-6;
  auto op = compress_operator(wrep, tau);
  CHECK(op.sparsity <= 0.2);

  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXd x(256);
  for (int i = 0; i < 256; ++i) x(i) = unit(rng);
  Eigen::VectorXd dense_result = wrep * x;
  Eigen::VectorXd sparse_result = op.matvec(x);
  CHECK((dense_result - sparse_result).norm() / dense_result.norm() <= 1e-4);
  // elementwise drop guarantee
  CHECK((dense_result - sparse_result).lpNorm<Eigen::Infinity>() <=
        tau * 256 * x.lpNorm<Eigen::Infinity>());
}

TEST_CASE("wavelet representation is a similarity transform") {
  const auto fam = make_family("daubechies-3");
  auto dm = derivative_matrix(fam, 1, 6, 2.0);
  Eigen::MatrixXd dense = dm.dense();
  Eigen::MatrixXd wrep = wavelet_representation(dense, fam, 2);
  auto x = random_signal(64);
  Eigen::VectorXd xv(64);
  for (int i = 0; i < 64; ++i) xv(i) = x[i];
  // W (A x) == (W A W^T) (W x)
  Eigen::VectorXd ax = dense * xv;
  std::vector<double> ax_v(ax.data(), ax.data() + 64);
  auto w_ax = flatten(fwt_forward_1d(ax_v, fam, 2));
  auto w_x = flatten(fwt_forward_1d(x, fam, 2));
  Eigen::VectorXd wx(64);
  for (int i = 0; i < 64; ++i) wx(i) = w_x[i];
  Eigen::VectorXd lhs = wrep * wx;
  for (int i = 0; i < 64; ++i) CHECK(std::abs(lhs(i) - w_ax[i]) <= 1e-10);
}
