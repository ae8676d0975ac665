#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wigsim/diagnostics.hpp"
#include "wigsim/errors.hpp"

using namespace wigsim;

namespace {

PhaseSpaceGrid benchmark_grid() {
  return PhaseSpaceGrid::create(-8.0, 16.0, -8.0, 16.0, 8, 8, 1.0, 1.0);
}

}  // namespace

TEST_CASE("harmonic ground state observables") {
  auto grid = benchmark_grid();
  auto w = oracle_harmonic(0.0, 0.0, 1.0, 0.0, grid);
  auto r = report(w, poly_potential({0, 0, 0.5}));
  CHECK(std::abs(r.normalization - 1.0) <= 1e-6);
  CHECK(std::abs(r.purity - 1.0) <= 1e-4);
  CHECK(r.negativity_volume <= 1e-10);
  // ground-state energy hbar*omega/2
  CHECK(r.energy == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.boundary_mass <= 1e-10);
}

TEST_CASE("position marginal matches the closed form") {
  auto grid = benchmark_grid();
  auto w = oracle_harmonic(0.0, 0.0, 1.0, 0.0, grid);
  auto r = report(w, poly_potential({0, 0, 0.5}));
  double worst = 0.0;
  for (int i = 0; i < grid.nq(); ++i) {
    const double q = grid.q(i);
    const double exact = std::exp(-q * q) / std::sqrt(std::numbers::pi);
    worst = std::max(worst, std::abs(r.position_marginal[i] - exact));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("observables scale homogeneously") {
  auto grid = benchmark_grid();
  auto w = oracle_harmonic(1.0, 0.0, 1.0, 0.0, grid);
  auto w2 = w;
  w2.data *= 2.0;
  auto r1 = report(w, poly_potential({0, 0, 0.5}));
  auto r2 = report(w2, poly_potential({0, 0, 0.5}));
  CHECK(r2.normalization == doctest::Approx(2.0 * r1.normalization).epsilon(1e-12));
  CHECK(r2.purity == doctest::Approx(4.0 * r1.purity).epsilon(1e-12));
  CHECK(r2.energy == doctest::Approx(2.0 * r1.energy).epsilon(1e-12));
}

TEST_CASE("cat state carries interference negativity") {
  auto grid = benchmark_grid();
  auto cat = oracle_cat(4.0, 1.0, grid);
  auto r = report(cat, poly_potential({0, 0, 0.5}));
  CHECK(std::abs(r.normalization - 1.0) <= 1e-8);
  CHECK(r.negativity_volume > 0.05);
  CHECK(r.purity <= 1.0 + 1e-6);
}

TEST_CASE("harmonic oracle rotates rigidly") {
  auto grid = benchmark_grid();
  auto t0 = oracle_harmonic(1.0, 0.0, 1.0, 0.0, grid);
  auto full = oracle_harmonic(1.0, 0.0, 1.0, 2.0 * std::numbers::pi, grid);
  CHECK(compare(t0, full) <= 1e-14);

  auto half = oracle_harmonic(1.0, 0.0, 1.0, std::numbers::pi, grid);
  auto at_minus = oracle_harmonic(-1.0, 0.0, 1.0, 0.0, grid);
  CHECK(compare(half, at_minus) <= 1e-13);

  // quarter turn maps (1,0) to (0,-1)
  auto quarter = oracle_harmonic(1.0, 0.0, 1.0, std::numbers::pi / 2.0, grid);
  auto at_down = oracle_harmonic(0.0, -1.0, 1.0, 0.0, grid);
  CHECK(compare(quarter, at_down) <= 1e-13);
}

TEST_CASE("compare is a symmetric normalized distance") {
  auto grid = benchmark_grid();
  auto x = oracle_harmonic(1.0, 0.0, 1.0, 0.0, grid);
  auto y = oracle_harmonic(-1.0, 0.5, 1.0, 0.0, grid);
  CHECK(compare(x, x) == 0.0);
  auto minus = x;
  minus.data = -x.data;
  CHECK(compare(x, minus) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(compare(x, y) == doctest::Approx(compare(y, x)).epsilon(1e-14));
  auto z1 = zero_field(grid), z2 = zero_field(grid);
  CHECK(compare(z1, z2) == 0.0);
  auto other = zero_field(PhaseSpaceGrid::create(-8, 16, -8, 16, 7, 8, 1, 1));
  CHECK_THROWS_AS(compare(x, other), config_error);
}

TEST_CASE("gibbs state is normalized and centered on the wells") {
  auto grid = benchmark_grid();
  auto pot = poly_potential({0, 0, -1, 0, 0.1});
  auto g = gibbs_state(pot, 0.5, grid);
  auto r = report(g, pot);
  CHECK(std::abs(r.normalization - 1.0) <= 1e-10);
  CHECK(r.negativity_volume == 0.0);
  // mass concentrates near the well minima q = +-sqrt(5)
  double peak_q = 0.0, peak = 0.0;
  for (int i = 0; i < grid.nq(); ++i)
    if (r.position_marginal[i] > peak) {
      peak = r.position_marginal[i];
      peak_q = grid.q(i);
    }
  CHECK(std::abs(std::abs(peak_q) - std::sqrt(5.0)) <= 0.2);
  CHECK_THROWS_AS(gibbs_state(pot, -1.0, grid), config_error);
}

TEST_CASE("95 percent mass radius of the ground state") {
  auto grid = benchmark_grid();
  auto w = oracle_harmonic(0.0, 0.0, 1.0, 0.0, grid);
  // |W| is radially exp(-r^2/hbar): fraction f inside R gives R = sqrt(-ln(1-f))
  const double expected = std::sqrt(-std::log(0.05));
  CHECK(mass_radius(w, 0.95) == doctest::Approx(expected).epsilon(0.02));
  CHECK_THROWS_AS(mass_radius(w, 0.0), config_error);
}
