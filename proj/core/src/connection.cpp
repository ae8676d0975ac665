#include "wigsim/connection.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "wigsim/errors.hpp"

namespace wigsim {

double ConnectionTable::at(int shift) const {
  const int w = max_shift();
  if (shift < -w || shift > w) return 0.0;
  return values[shift + w];
}

namespace {

// Filter autocorrelation a(m) = sum_i h_i h_{i+m}.
std::vector<double> autocorrelation(const WaveletFamily& fam) {
  const int n = fam.taps();
  std::vector<double> a(2 * n - 1, 0.0);
  for (int m = -(n - 1); m <= n - 1; ++m) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const int j = i + m;
      if (j >= 0 && j < n) acc += fam.lowpass[i] * fam.lowpass[j];
    }
    a[m + n - 1] = acc;
  }
  return a;
}

double autocorr_at(const std::vector<double>& a, int m) {
  const int w = (static_cast<int>(a.size()) - 1) / 2;
  if (m < -w || m > w) return 0.0;
  return a[m + w];
}

ConnectionTable compute_table(const WaveletFamily& family, int a_order, int b_order) {
  if (a_order < 0 || b_order < 0)
    throw config_error("connection: derivative orders must be nonnegative");
  const int high = std::max(a_order, b_order);
  if (!(static_cast<double>(high) < family.sobolev_estimate))
    throw config_error(
        "connection: derivative order " + std::to_string(high) +
        " inadmissible for family " + family.name + " (requires max(a,b) < " +
        std::to_string(family.sobolev_estimate) + ", the Sobolev smoothness bound)");

  const int d = a_order + b_order;
  const int w = 2 * family.vanishing_moments - 2;  // table halfwidth
  const auto ac = autocorrelation(family);
  const double eigenvalue = std::ldexp(1.0, -d);
  const int sigma = (d % 2 == 0) ? 1 : -1;

  // Reduced transition matrix on the parity subspace v_{-k} = sigma v_k.
  const int lo = (sigma == 1) ? 0 : 1;
  const int dim = w - lo + 1;
  if (dim <= 0) throw numerical_error("connection: empty parity subspace");
  Eigen::MatrixXd reduced(dim, dim);
  for (int k = lo; k <= w; ++k)
    for (int l = lo; l <= w; ++l) {
      double v = autocorr_at(ac, 2 * k - l);
      if (l > 0) v += sigma * autocorr_at(ac, 2 * k + l);
      reduced(k - lo, l - lo) = v;
    }

  Eigen::MatrixXd shifted = reduced - eigenvalue * Eigen::MatrixXd::Identity(dim, dim);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max(1.0, sv(0));
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) ++null_dim;
  if (null_dim != 1)
    throw numerical_error("connection: eigenvalue 2^-" + std::to_string(d) +
                          " eigenspace has dimension " + std::to_string(null_dim) +
                          " for family " + family.name);

  Eigen::VectorXd u = svd.matrixV().col(dim - 1);
  std::vector<double> full(2 * w + 1, 0.0);
  for (int k = lo; k <= w; ++k) {
    full[k + w] = u(k - lo);
    full[-k + w] = sigma * u(k - lo);
  }

  // Moment-rule normalization: (-1)^a sum_k k^d gamma_k = (-1)^d d!.
  double moment = 0.0;
  for (int k = -w; k <= w; ++k) {
    double kd = 1.0;
    for (int i = 0; i < d; ++i) kd *= k;
    moment += kd * full[k + w];
  }
  if (std::abs(moment) < 1e-10)
    throw numerical_error("connection: degenerate moment normalization for family " +
                          family.name + ", orders (" + std::to_string(a_order) + "," +
                          std::to_string(b_order) + ")");
  double dfact = 1.0;
  for (int i = 2; i <= d; ++i) dfact *= i;
  const double target = ((b_order % 2 == 0) ? 1.0 : -1.0) * dfact;
  const double scale = target / moment;
  for (double& v : full) v *= scale;

  // Residual of the refinement-induced system on the full index range.
  double resid = 0.0;
  for (int k = -w; k <= w; ++k) {
    double acc = 0.0;
    for (int l = -w; l <= w; ++l) acc += autocorr_at(ac, 2 * k - l) * full[l + w];
    resid = std::max(resid, std::abs(acc - eigenvalue * full[k + w]));
  }
  if (resid > 1e-10)
    throw numerical_error("connection: refinement residual " + std::to_string(resid) +
                          " exceeds tolerance for family " + family.name);

  ConnectionTable table;
  table.family = family;
  table.left_order = a_order;
  table.right_order = b_order;
  table.values = std::move(full);
  return table;
}

}  // namespace

ConnectionTable connection_coefficients(const WaveletFamily& family, int a, int b) {
  using Key = std::tuple<std::string, int, int>;
  static std::map<Key, ConnectionTable> cache;
  static std::mutex mutex;
  const Key key{family.name, a, b};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  ConnectionTable table = compute_table(family, a, b);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(table)).first->second;
}

std::vector<double> derivative_stencil(const WaveletFamily& family, int d) {
  if (d < 0) throw config_error("derivative order must be nonnegative");
  const int a = d / 2;
  const int b = d - a;
  ConnectionTable table = connection_coefficients(family, a, b);
  std::vector<double> gamma = table.values;
  if (a % 2 == 1)
    for (double& v : gamma) v = -v;
  return gamma;
}

Eigen::VectorXd DerivativeMatrix::apply(const Eigen::VectorXd& x) const {
  if (x.size() != size) throw config_error("derivative matrix: dimension mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(size);
  for (int k = 0; k < size; ++k) {
    double acc = 0.0;
    for (int o = -halfwidth; o <= halfwidth; ++o)
      acc += stencil[o + halfwidth] * x(((k - o) % size + size) % size);
    y(k) = acc;
  }
  return y;
}

void DerivativeMatrix::apply_columns(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const {
  if (in.rows() != size) throw config_error("derivative matrix: row-count mismatch");
  out.setZero(in.rows(), in.cols());
  for (int o = -halfwidth; o <= halfwidth; ++o) {
    const double s = stencil[o + halfwidth];
    for (int k = 0; k < size; ++k)
      out.row(k) += s * in.row(((k - o) % size + size) % size);
  }
}

void DerivativeMatrix::apply_rows(const Eigen::MatrixXd& in, Eigen::MatrixXd& out) const {
  if (in.cols() != size) throw config_error("derivative matrix: column-count mismatch");
  out.setZero(in.rows(), in.cols());
  for (int o = -halfwidth; o <= halfwidth; ++o) {
    const double s = stencil[o + halfwidth];
    for (int k = 0; k < size; ++k)
      out.col(k) += s * in.col(((k - o) % size + size) % size);
  }
}

Eigen::MatrixXd DerivativeMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (int k = 0; k < size; ++k)
    for (int o = -halfwidth; o <= halfwidth; ++o)
      m(k, ((k - o) % size + size) % size) += stencil[o + halfwidth];
  return m;
}

DerivativeMatrix derivative_matrix(const WaveletFamily& family, int d, int level,
                                   double domain_length) {
  if (domain_length <= 0.0)
    throw config_error("derivative matrix: domain length must be positive");
  if (level < 1 || level > 30) throw config_error("derivative matrix: bad level");
  const int n = 1 << level;
  const int min_n = 2 * (2 * family.vanishing_moments - 1);
  if (n < min_n)
    throw config_error("derivative matrix: N=" + std::to_string(n) +
                       " too small for the filter band of " + family.name +
                       " (need N >= " + std::to_string(min_n) + ")");
  auto gamma = derivative_stencil(family, d);
  DerivativeMatrix m;
  m.order = d;
  m.level = level;
  m.size = n;
  m.domain_length = domain_length;
  m.halfwidth = (static_cast<int>(gamma.size()) - 1) / 2;
  const double scale = std::pow(static_cast<double>(n) / domain_length, d);
  m.stencil.resize(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) m.stencil[i] = scale * gamma[i];
  return m;
}

}  // namespace wigsim
