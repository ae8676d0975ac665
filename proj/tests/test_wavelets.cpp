#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wigsim/errors.hpp"
#include "wigsim/wavelets.hpp"

using namespace wigsim;

namespace {

double tap_sum(const WaveletFamily& f) {
  double s = 0.0;
  for (double h : f.lowpass) s += h;
  return s;
}

double even_autocorr(const WaveletFamily& f, int m) {
  double s = 0.0;
  for (int i = 0; i + 2 * m < f.taps(); ++i) s += f.lowpass[i] * f.lowpass[i + 2 * m];
  return s;
}

double discrete_moment(const WaveletFamily& f, int m) {
  double s = 0.0;
  for (int k = 0; k < f.taps(); ++k) {
    double km = 1.0;
    for (int i = 0; i < m; ++i) km *= k;
    s += (k % 2 == 0 ? 1.0 : -1.0) * km * f.lowpass[k];
  }
  return s;
}

std::vector<std::string> supported_families() {
  std::vector<std::string> names{"haar"};
  for (int k = 2; k <= 10; ++k) names.push_back("daubechies-" + std::to_string(k));
  return names;
}

}  // namespace

TEST_CASE("filter invariants hold for every supported family") {
  for (const auto& name : supported_families()) {
    CAPTURE(name);
    const auto fam = make_family(name);
    CHECK(fam.taps() == 2 * fam.vanishing_moments);
    CHECK(std::abs(tap_sum(fam) - std::numbers::sqrt2) < 1e-12);
    for (int m = 0; m < fam.vanishing_moments; ++m) {
      CHECK(std::abs(even_autocorr(fam, m) - (m == 0 ? 1.0 : 0.0)) < 1e-12);
      // The raw moment functional has condition number ~ sum |k^m h_k|, so
      // the achievable accuracy in binary64 scales with it (matters for the
      // long high-order families; equals the nominal bound through K=6).
      double cond = 0.0;
      for (int k = 0; k < fam.taps(); ++k) {
        double km = 1.0;
        for (int i = 0; i < m; ++i) km *= k;
        cond += std::abs(km * fam.lowpass[k]);
      }
      const double tol =
          std::max(1e-10, 16.0 * std::numeric_limits<double>::epsilon() * cond);
      CHECK(std::abs(discrete_moment(fam, m)) < tol);
    }
    // quadrature-mirror rule: defined arithmetic, so bit-exact
    for (int k = 0; k < fam.taps(); ++k)
      CHECK(fam.highpass[k] ==
            (k % 2 == 0 ? 1.0 : -1.0) * fam.lowpass[fam.taps() - 1 - k]);
  }
}

TEST_CASE("haar is the two-tap orthonormal filter") {
  const auto fam = make_family("haar");
  CHECK(fam.lowpass.size() == 2);
  CHECK(fam.lowpass[0] == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-15));
  CHECK(fam.lowpass[1] == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-15));
}

TEST_CASE("daubechies-2 matches the closed-form taps") {
  // (1 +/- sqrt 3) family: exact solution of the 2-vanishing-moment system.
  const auto fam = make_family("daubechies-2");
  const double s3 = std::sqrt(3.0);
  const double d = 4.0 * std::numbers::sqrt2;
  REQUIRE(fam.taps() == 4);
  CHECK(std::abs(fam.lowpass[0] - (1 + s3) / d) < 1e-14);
  CHECK(std::abs(fam.lowpass[1] - (3 + s3) / d) < 1e-14);
  CHECK(std::abs(fam.lowpass[2] - (3 - s3) / d) < 1e-14);
  CHECK(std::abs(fam.lowpass[3] - (1 - s3) / d) < 1e-14);
}

TEST_CASE("unknown families are rejected by name") {
  CHECK_THROWS_WITH_AS(make_family("daubechies-99"),
                       doctest::Contains("daubechies-99"), config_error);
  CHECK_THROWS_AS(make_family("daubechies-1"), config_error);
  CHECK_THROWS_AS(make_family("sym4"), config_error);
  CHECK_THROWS_AS(make_family(""), config_error);
}

TEST_CASE("haar cascade is the left-continuous indicator") {
  const auto tbl = cascade_table(make_family("haar"), 4);
  REQUIRE(tbl.points() == 17);
  for (int m = 0; m < 16; ++m) CHECK(tbl.phi_values[m] == doctest::Approx(1.0));
  CHECK(tbl.phi_values[16] == doctest::Approx(0.0));
  CHECK(tbl.integral_phi() == doctest::Approx(1.0).epsilon(1e-12));
  // psi: +1 on [0, 1/2), -1 on [1/2, 1)
  CHECK(tbl.psi_values[0] == doctest::Approx(1.0));
  CHECK(tbl.psi_values[8] == doctest::Approx(-1.0));
}

TEST_CASE("daubechies-2 integer values match the closed form") {
  const auto tbl = cascade_table(make_family("daubechies-2"), 10);
  const int stride = 1 << 10;
  const double s3 = std::sqrt(3.0);
  CHECK(std::abs(tbl.phi_values[0 * stride] - 0.0) < 1e-12);
  CHECK(std::abs(tbl.phi_values[1 * stride] - (1 + s3) / 2.0) < 1e-12);
  CHECK(std::abs(tbl.phi_values[2 * stride] - (1 - s3) / 2.0) < 1e-12);
  CHECK(std::abs(tbl.phi_values[3 * stride] - 0.0) < 1e-12);
}

TEST_CASE("cascade tables satisfy the refinement relation") {
  for (const auto& name : {"daubechies-2", "daubechies-6"}) {
    const auto fam = make_family(name);
    const int depth = 10;
    const auto tbl = cascade_table(fam, depth);
    const int stride = 1 << depth;
    double worst = 0.0;
    for (int m = 0; m < tbl.points(); ++m) {
      double acc = 0.0;
      for (int k = 0; k < fam.taps(); ++k) {
        const int idx = 2 * m - k * stride;
        if (idx >= 0 && idx < tbl.points()) acc += fam.lowpass[k] * tbl.phi_values[idx];
      }
      worst = std::max(worst,
                       std::abs(tbl.phi_values[m] - std::numbers::sqrt2 * acc));
    }
    CAPTURE(name);
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("cascade integral is one") {
  for (const auto& name : {"daubechies-3", "daubechies-8"}) {
    const auto tbl = cascade_table(make_family(name), 10);
    CAPTURE(name);
    CHECK(std::abs(tbl.integral_phi() - 1.0) < 1e-6);
  }
}

TEST_CASE("cascade depths agree at shared dyadic points") {
  const auto fam = make_family("daubechies-5");
  const auto a = cascade_table(fam, 7);
  const auto b = cascade_table(fam, 8);
  for (int m = 0; m < a.points(); ++m)
    CHECK(std::abs(a.phi_values[m] - b.phi_values[2 * m]) <= 1e-10);
}

TEST_CASE("integer-translate autocorrelation approximates orthonormality") {
  for (const auto& name : {"haar", "daubechies-2", "daubechies-6"}) {
    const auto tbl = cascade_table(make_family(name), 10);
    const int stride = 1 << 10;
    const int pts = tbl.points();
    for (int shift = 0; shift <= 2; ++shift) {
      double acc = 0.0;
      for (int m = 0; m < pts; ++m) {
        const int idx = m - shift * stride;
        if (idx >= 0 && idx < pts) acc += tbl.phi_values[m] * tbl.phi_values[idx];
      }
      acc /= stride;
      CAPTURE(name);
      CAPTURE(shift);
      CHECK(std::abs(acc - (shift == 0 ? 1.0 : 0.0)) < 1e-3);
    }
  }
}

TEST_CASE("cascade depth bounds are enforced") {
  const auto fam = make_family("daubechies-2");
  CHECK_THROWS_AS(cascade_table(fam, 0), config_error);
  CHECK_THROWS_AS(cascade_table(fam, 15), config_error);
}

TEST_CASE("degenerate refinement matrices are reported") {
  // Fabricated taps whose refinement matrix has no eigenvalue-1 direction.
  WaveletFamily broken;
  broken.name = "broken";
  broken.vanishing_moments = 2;
  broken.lowpass = {0.0, 0.0, std::numbers::sqrt2, 0.0};
  broken.highpass = broken.lowpass;
  broken.sobolev_estimate = 1.0;
  CHECK_THROWS_AS(cascade_table(broken, 4), numerical_error);
}
