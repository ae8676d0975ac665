#include "wigsim/wavelets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "wigsim/errors.hpp"

namespace wigsim {

namespace {

// Conservative floors of the L2 Sobolev exponents of the Daubechies scaling
// functions (rounded down from the standard regularity tables).
double sobolev_floor(int k) {
  static const std::map<int, double> table = {
      {2, 0.99}, {3, 1.41}, {4, 1.77}, {5, 2.09}, {6, 2.38},
      {7, 2.65}, {8, 2.91}, {9, 3.16}, {10, 3.40}};
  return table.at(k);
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs) {
  // coeffs[i] multiplies y^i; leading coefficient must be nonzero.
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[i] / coeffs[deg];
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion);
  std::vector<std::complex<double>> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

// Initial guess for the 2K Daubechies taps by spectral factorization of the
// halfband polynomial; refined afterwards by Newton on the defining system.
std::vector<double> daubechies_seed(int k) {
  using cd = std::complex<double>;
  // P(y) = sum_{m=0}^{K-1} binom(K-1+m, m) y^m
  std::vector<double> p(k);
  p[0] = 1.0;
  for (int m = 1; m < k; ++m) p[m] = p[m - 1] * double(k - 1 + m) / double(m);

  std::vector<cd> zroots;  // minimal-phase roots of the factor Q
  for (const auto& y : polynomial_roots(p)) {
    // y = (2 - z - 1/z)/4  =>  z^2 - (2 - 4y) z + 1 = 0
    cd b = 2.0 - 4.0 * y;
    cd disc = std::sqrt(b * b - 4.0);
    cd z1 = (b + disc) / 2.0;
    cd z2 = (b - disc) / 2.0;
    zroots.push_back(std::abs(z1) < std::abs(z2) ? z1 : z2);
  }

  // h(z) = c * (1+z)^K * prod (z - z_i), normalized to sum sqrt(2).
  std::vector<cd> poly{1.0};
  auto mul_monomial = [&poly](cd root) {
    std::vector<cd> next(poly.size() + 1, cd(0.0));
    for (size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= root * poly[i];
    }
    poly = next;
  };
  for (int i = 0; i < k; ++i) mul_monomial(cd(-1.0));
  for (const auto& z : zroots) mul_monomial(z);

  std::vector<double> h(poly.size());
  for (size_t i = 0; i < poly.size(); ++i) h[i] = poly[i].real();
  double s = 0.0;
  for (double v : h) s += v;
  for (double& v : h) v *= std::sqrt(2.0) / s;
  // Extremal-phase convention: energy front-loaded.
  double front = 0.0, back = 0.0;
  const int n = static_cast<int>(h.size());
  for (int i = 0; i < n / 2; ++i) {
    front += h[i] * h[i];
    back += h[n - 1 - i] * h[n - 1 - i];
  }
  if (back > front) std::reverse(h.begin(), h.end());
  return h;
}

// Newton iteration on the defining system: K orthonormality equations
// sum_k h_k h_{k+2m} = delta_{m0} and K vanishing-moment equations evaluated
// on centered, scaled nodes (same zero set as the raw k^m moments but
// conditioned at O(1), which the raw monomials are not for large K).
std::vector<double> newton_polish(std::vector<double> h, int k) {
  const int n = 2 * k;
  auto node = [n](int i) { return (2.0 * i - (n - 1)) / (n - 1); };
  auto residual = [&](const std::vector<double>& taps, Eigen::VectorXd& f) {
    for (int m = 0; m < k; ++m) {
      double acc = 0.0;
      for (int i = 0; i + 2 * m < n; ++i) acc += taps[i] * taps[i + 2 * m];
      f(m) = acc - (m == 0 ? 1.0 : 0.0);
    }
    for (int m = 0; m < k; ++m) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += (i % 2 == 0 ? 1.0 : -1.0) * std::pow(node(i), m) * taps[i];
      f(k + m) = acc;
    }
  };

  Eigen::VectorXd f(n);
  std::vector<double> best = h;
  double best_norm = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 50; ++iter) {
    residual(h, f);
    const double fnorm = f.lpNorm<Eigen::Infinity>();
    if (fnorm < best_norm) {
      best_norm = fnorm;
      best = h;
    }
    if (fnorm < 3e-15) break;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int m = 0; m < k; ++m)
      for (int i = 0; i < n; ++i) {
        double d = 0.0;
        if (i + 2 * m < n) d += h[i + 2 * m];
        if (i - 2 * m >= 0) d += h[i - 2 * m];
        jac(m, i) = d;
      }
    for (int m = 0; m < k; ++m)
      for (int i = 0; i < n; ++i)
        jac(k + m, i) = (i % 2 == 0 ? 1.0 : -1.0) * std::pow(node(i), m);
    Eigen::VectorXd step = jac.fullPivLu().solve(f);
    for (int i = 0; i < n; ++i) h[i] -= step(i);
  }
  if (!(best_norm < 1e-12))
    throw numerical_error("wavelets: filter refinement did not converge for K=" +
                          std::to_string(k));

  // Final extended-precision correction so the stored doubles are rounding
  // of the exact solution (the raw high-order moment sums are sensitive to
  // the last bits of the taps).
  using ld = long double;
  std::vector<ld> hx(best.begin(), best.end());
  for (int pass = 0; pass < 4; ++pass) {
    Eigen::VectorXd fx(n);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int m = 0; m < k; ++m) {
      ld acc = 0.0L;
      for (int i = 0; i + 2 * m < n; ++i) acc += hx[i] * hx[i + 2 * m];
      fx(m) = static_cast<double>(acc - (m == 0 ? 1.0L : 0.0L));
      for (int i = 0; i < n; ++i) {
        ld d = 0.0L;
        if (i + 2 * m < n) d += hx[i + 2 * m];
        if (i - 2 * m >= 0) d += hx[i - 2 * m];
        jac(m, i) = static_cast<double>(d);
      }
    }
    for (int m = 0; m < k; ++m) {
      ld acc = 0.0L;
      for (int i = 0; i < n; ++i) {
        ld xm = 1.0L;
        for (int t = 0; t < m; ++t) xm *= static_cast<ld>(node(i));
        acc += (i % 2 == 0 ? 1.0L : -1.0L) * xm * hx[i];
      }
      fx(k + m) = static_cast<double>(acc);
      for (int i = 0; i < n; ++i)
        jac(k + m, i) = (i % 2 == 0 ? 1.0 : -1.0) * std::pow(node(i), m);
    }
    Eigen::VectorXd step = jac.fullPivLu().solve(fx);
    for (int i = 0; i < n; ++i) hx[i] -= static_cast<ld>(step(i));
  }
  for (int i = 0; i < n; ++i) best[i] = static_cast<double>(hx[i]);
  return best;
}

std::vector<double> quadrature_mirror(const std::vector<double>& h) {
  const int n = static_cast<int>(h.size());
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = (i % 2 == 0 ? 1.0 : -1.0) * h[n - 1 - i];
  return g;
}

// phi at integer points: kernel of (A - I) with A_{mn} = sqrt(2) h_{2m-n} on
// the interior 1..2K-2, normalized so the integer values sum to 1.
std::vector<double> integer_values(const WaveletFamily& fam) {
  const int support = fam.support_length();
  const int interior = support - 1;
  if (interior <= 0) {
    // Haar: left-continuous indicator.
    return {1.0, 0.0};
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(interior, interior);
  for (int m = 1; m <= interior; ++m)
    for (int n = 1; n <= interior; ++n) {
      int idx = 2 * m - n;
      if (idx >= 0 && idx < fam.taps())
        a(m - 1, n - 1) = std::sqrt(2.0) * fam.lowpass[idx];
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a - Eigen::MatrixXd::Identity(interior, interior),
                                        Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-10 * std::max(1.0, sv(0));
  int null_dim = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) ++null_dim;
  if (null_dim != 1)
    throw numerical_error(
        "wavelets: refinement matrix eigenvalue-1 eigenspace has dimension " +
        std::to_string(null_dim) + " for family " + fam.name);
  Eigen::VectorXd v = svd.matrixV().col(interior - 1);
  double s = v.sum();
  if (std::abs(s) < 1e-12)
    throw numerical_error("wavelets: degenerate integer-value normalization for " + fam.name);
  std::vector<double> vals(support + 1, 0.0);
  for (int i = 0; i < interior; ++i) vals[i + 1] = v(i) / s;
  return vals;
}

}  // namespace

WaveletFamily make_family(const std::string& name) {
  WaveletFamily fam;
  fam.name = name;
  if (name == "haar") {
    fam.vanishing_moments = 1;
    fam.lowpass = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    fam.sobolev_estimate = 0.49;
  } else if (name.rfind("daubechies-", 0) == 0) {
    int k = 0;
    try {
      size_t pos = 0;
      const std::string tail = name.substr(11);
      k = std::stoi(tail, &pos);
      if (pos != tail.size()) k = 0;
    } catch (const std::exception&) {
      k = 0;
    }
    if (k < 2 || k > 10)
      throw config_error("unknown wavelet family '" + name +
                         "' (supported: haar, daubechies-K with K in 2..10)");
    fam.vanishing_moments = k;
    fam.lowpass = newton_polish(daubechies_seed(k), k);
    fam.sobolev_estimate = sobolev_floor(k);
  } else {
    throw config_error("unknown wavelet family '" + name +
                       "' (supported: haar, daubechies-K with K in 2..10)");
  }
  fam.highpass = quadrature_mirror(fam.lowpass);
  return fam;
}

double DyadicFunctionTable::step() const { return std::ldexp(1.0, -depth); }

double DyadicFunctionTable::integral_phi() const {
  double acc = 0.0;
  for (size_t i = 0; i + 1 < phi_values.size(); ++i) acc += phi_values[i];
  return acc * step();
}

DyadicFunctionTable cascade_table(const WaveletFamily& family, int depth) {
  if (depth < 1 || depth > 14)
    throw config_error("cascade depth must be in 1..14, got " + std::to_string(depth));

  std::vector<double> level = integer_values(family);  // values at spacing 1
  for (int j = 1; j <= depth; ++j) {
    const int prev_pts = static_cast<int>(level.size());  // support*2^{j-1}+1
    std::vector<double> next(2 * (prev_pts - 1) + 1, 0.0);
    for (int m = 0; m < static_cast<int>(next.size()); ++m) {
      if (m % 2 == 0) {
        next[m] = level[m / 2];
        continue;
      }
      // phi(x) = sqrt(2) sum_k h_k phi(2x - k); 2x - k sits on the previous grid.
      double acc = 0.0;
      const int stride = 1 << (j - 1);
      for (int k = 0; k < family.taps(); ++k) {
        int idx = m - k * stride;
        if (idx >= 0 && idx < prev_pts) acc += family.lowpass[k] * level[idx];
      }
      next[m] = std::sqrt(2.0) * acc;
    }
    level = std::move(next);
  }

  DyadicFunctionTable table;
  table.family = family;
  table.depth = depth;
  table.phi_values = level;
  const int pts = static_cast<int>(level.size());
  const int stride = 1 << depth;
  table.psi_values.assign(pts, 0.0);
  for (int m = 0; m < pts; ++m) {
    double acc = 0.0;
    for (int k = 0; k < family.taps(); ++k) {
      int idx = 2 * m - k * stride;
      if (idx >= 0 && idx < pts) acc += family.highpass[k] * level[idx];
    }
    table.psi_values[m] = std::sqrt(2.0) * acc;
  }
  return table;
}

}  // namespace wigsim
