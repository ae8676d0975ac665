#include <doctest.h>

#include <cmath>
#include <random>

#include "wigsim/diagnostics.hpp"
#include "wigsim/errors.hpp"
#include "wigsim/scales.hpp"

using namespace wigsim;

namespace {

std::mt19937_64 rng(1357);

PhaseSpaceGrid grid64() {
  return PhaseSpaceGrid::create(-8.0, 16.0, -8.0, 16.0, 6, 6, 1.0, 1.0);
}

CoefficientField random_field(const PhaseSpaceGrid& grid) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  CoefficientField f = zero_field(grid);
  for (int i = 0; i < grid.nq(); ++i)
    for (int j = 0; j < grid.np(); ++j) f.data(i, j) = unit(rng);
  return f;
}

}  // namespace

TEST_CASE("constant field has no detail energy") {
  auto fam = make_family("daubechies-4");
  auto f = zero_field(grid64());
  f.data.setConstant(0.4);
  auto d = decompose(f, fam, 2);
  for (int j = d.coarse_level; j < d.finest_level; ++j)
    CHECK(d.detail_energy(j) <= 1e-20 * d.total_energy());
}

TEST_CASE("smooth gaussian has negligible finest-scale energy") {
  auto fam = make_family("daubechies-6");
  auto grid = PhaseSpaceGrid::create(-8.0, 16.0, -8.0, 16.0, 8, 8, 1.0, 1.0);
  auto f = oracle_harmonic(0.0, 0.0, 1.0, 0.0, grid);
  auto d = decompose(f, fam, 3);
  CHECK(d.detail_energy(d.finest_level - 1) <= 1e-6 * d.total_energy());
}

TEST_CASE("single fine-scale basis function keeps its energy in one block") {
  auto fam = make_family("daubechies-4");
  auto grid = grid64();
  // build the field from a one-hot coefficient in the finest diagonal region
  Decomposition2d seed = fwt_2d(Eigen::MatrixXd::Zero(64, 64), fam, 2);
  seed.coeffs(40, 44) = 1.0;  // inside [32,64) x [32,64): level-5 annulus
  CoefficientField f = zero_field(grid);
  f.data = fwt_2d_inverse(seed, fam);
  auto d = decompose(f, fam, 2);
  CHECK(d.detail_energy(5) == doctest::Approx(d.total_energy()).epsilon(1e-12));
  for (int j = d.coarse_level; j < 5; ++j)
    CHECK(d.detail_energy(j) <= 1e-20 * d.total_energy());
}

TEST_CASE("energy table fractions sum to one") {
  auto fam = make_family("daubechies-4");
  auto f = random_field(grid64());
  auto rows = energy_table(decompose(f, fam, 1));
  double total = 0.0;
  for (const auto& r : rows) total += r.fraction;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("slow/fast split reconstructs and conserves energy") {
  auto fam = make_family("daubechies-6");
  auto f = random_field(grid64());
  auto split = slow_fast_split(f, fam, 4, 1);
  CHECK(split.reconstruction_error <= 1e-10);

  const double total = f.data.squaredNorm();
  double parts = split.slow_part.data.squaredNorm();
  for (const auto& part : split.fast_parts) parts += part.component.data.squaredNorm();
  CHECK(std::abs(parts - total) <= 1e-10 * total);

  // per-part energies recorded from the coefficient domain agree
  for (const auto& part : split.fast_parts)
    CHECK(part.energy ==
          doctest::Approx(part.component.data.squaredNorm()).epsilon(1e-8));
  // frequency labels are the dyadic scale labels
  CHECK(split.fast_parts.front().nominal_frequency ==
        doctest::Approx(std::ldexp(1.0, split.fast_parts.front().level)));
}

TEST_CASE("split recovers a slow + fine superposition") {
  auto fam = make_family("daubechies-6");
  auto grid = grid64();
  // slow part: a gaussian clear of the seam; fast part: one finest wavelet
  CoefficientField slow = zero_field(grid);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const double q = grid.q(i) / 2.5, p = grid.p(j) / 2.5;
      slow.data(i, j) = std::exp(-q * q - p * p);
    }
  Decomposition2d seed = fwt_2d(Eigen::MatrixXd::Zero(64, 64), fam, 1);
  seed.coeffs(50, 3) = 0.5;  // level-5 horizontal region
  CoefficientField fine = zero_field(grid);
  fine.data = fwt_2d_inverse(seed, fam);

  CoefficientField sum = zero_field(grid);
  sum.data = slow.data + fine.data;
  auto split = slow_fast_split(sum, fam, 5, 1);
  // the fast level-5 component equals the injected wavelet up to the
  // gaussian's own (tiny) level-5 content
  const auto& f5 = split.fast_parts.front();
  REQUIRE(f5.level == 5);
  CHECK((f5.component.data - fine.data).norm() <= 5e-3 * fine.data.norm());
  // and the slow part carries the gaussian
  CHECK((split.slow_part.data - slow.data).norm() <= 1e-4 * slow.data.norm());
}

TEST_CASE("split level is range checked") {
  auto fam = make_family("daubechies-4");
  auto f = random_field(grid64());
  CHECK_THROWS_AS(slow_fast_split(f, fam, 6, 1), config_error);  // must be < finest
  CHECK_THROWS_AS(slow_fast_split(f, fam, 0, 1), config_error);  // below coarse
}

TEST_CASE("fock norm basics") {
  FockStateList vacuum_only{3.0, {}};
  CHECK(fock_norm(vacuum_only) == doctest::Approx(3.0).epsilon(1e-15));

  // unit coefficient energy with unit cell weights
  FockComponent unit_comp;
  unit_comp.dims = {4, 4};
  unit_comp.axis_weights = {1.0, 1.0};
  unit_comp.data.assign(16, 0.25);  // 16 * 0.0625 = 1
  FockStateList single{0.0, {unit_comp}};
  CHECK(fock_norm(single) == doctest::Approx(1.0).epsilon(1e-10));

  FockStateList zero{0.0, {}};
  CHECK(fock_norm(zero) == 0.0);
}

TEST_CASE("fock norm is additive over orthogonal components") {
  auto a = fock_component(random_field(grid64()));
  auto b = fock_component(random_field(grid64()));
  FockStateList la{0.0, {a}}, lb{0.0, {b}}, both{0.0, {a, b}};
  const double lhs = fock_norm(both) * fock_norm(both);
  const double rhs = fock_norm(la) * fock_norm(la) + fock_norm(lb) * fock_norm(lb);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("fock norm: triangle inequality and homogeneity (random lists)") {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto fa = random_field(grid64());
    auto fb = random_field(grid64());
    const double w0a = unit(rng), w0b = unit(rng);
    FockStateList a{w0a, {fock_component(fa)}};
    FockStateList b{w0b, {fock_component(fb)}};
    FockStateList sum{w0a + w0b, {}};
    {
      auto c = fock_component(fa);
      auto cb = fock_component(fb);
      for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] += cb.data[i];
      sum.components.push_back(c);
    }
    CHECK(fock_norm(sum) <= fock_norm(a) + fock_norm(b) + 1e-12);

    const double alpha = unit(rng) * 3.0;
    FockStateList scaled{alpha * w0a, {}};
    {
      auto c = fock_component(fa);
      for (auto& v : c.data) v *= alpha;
      scaled.components.push_back(c);
    }
    CHECK(fock_norm(scaled) ==
          doctest::Approx(std::abs(alpha) * fock_norm(a)).epsilon(1e-12));
  }
}

TEST_CASE("fock norm rejects inconsistent geometry") {
  FockComponent broken;
  broken.dims = {4, 4};
  broken.axis_weights = {1.0, 1.0};
  broken.data.assign(15, 1.0);  // wrong count
  FockStateList list{0.0, {broken}};
  CHECK_THROWS_AS(fock_norm(list), config_error);

  auto a = random_field(grid64());
  auto b = zero_field(PhaseSpaceGrid::create(-8, 16, -8, 16, 5, 6, 1, 1));
  CHECK_THROWS_AS(fock_distance(a, b), config_error);
}

TEST_CASE("restriction by decimation keeps shared nodes exactly") {
  auto grid = PhaseSpaceGrid::create(-8.0, 16.0, -8.0, 16.0, 7, 7, 1.0, 1.0);
  auto f = oracle_harmonic(1.0, 0.5, 1.0, 0.0, grid);
  auto half = restrict_halve(f);
  CHECK(half.grid.nq() == 64);
  for (int i = 0; i < 64; i += 7)
    for (int j = 0; j < 64; j += 5) {
      CHECK(half.grid.q(i) == doctest::Approx(f.grid.q(2 * i)).epsilon(1e-15));
      CHECK(half.data(i, j) == f.data(2 * i, 2 * j));
    }
  auto tiny = zero_field(PhaseSpaceGrid::create(-8, 16, -8, 16, 5, 5, 1, 1));
  CHECK_THROWS_AS(restrict_halve(tiny), config_error);
}

TEST_CASE("per-level energy decays above the state's characteristic scale") {
  // measured on the harmonic ground state and frozen as a regression bound:
  // each level above the characteristic one carries at most half the energy
  // of the previous (the concrete field decays much faster)
  auto fam = make_family("daubechies-6");
  auto grid = PhaseSpaceGrid::create(-8.0, 16.0, -8.0, 16.0, 8, 8, 1.0, 1.0);
  auto f = oracle_harmonic(0.0, 0.0, 1.0, 0.0, grid);
  auto d = decompose(f, fam, 3);
  for (int j = 5; j + 1 < d.finest_level; ++j)
    CHECK(d.detail_energy(j + 1) <= 0.5 * d.detail_energy(j));
}
