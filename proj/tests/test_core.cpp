#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "solsim/ensemble.hpp"
#include "solsim/errors.hpp"
#include "solsim/units.hpp"
#include "support/oracles.hpp"

using namespace solsim;

TEST_CASE("natural-unit identities") {
  CHECK(kRecoilEnergy == 0.5);
  CHECK(kRecoilVelocity == 1.0);
  CHECK(kRecoilEnergy == kHbar * kWavenumber * kWavenumber / (2.0 * kMass));
  CHECK(kChiOptN == -2.0);
  CHECK(kTau == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("chi_opt values and symmetry") {
  CHECK(chi_opt(0.5 * kPi, 1.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(chi_opt(0.5 * kPi, 1.0) == -4.0 * kRecoilEnergy);
  CHECK(chi_opt(0.25 * kPi, 1.0) ==
        doctest::Approx(-2.0 * kRecoilEnergy).epsilon(1e-14));
  CHECK(chi_opt(0.0, 1.0) == 0.0);
  CHECK(chi_opt(kPi, 1.0) == 0.0);
  CHECK(chi_opt(0.5 * kPi, 100.0) == doctest::Approx(-0.02).epsilon(1e-15));

  // Even about pi/2, bitwise. Sampling theta in [pi/2, pi] makes the
  // reflection pi - theta exact in floating point (Sterbenz), so every
  // reflection pair is covered without rounding the pair itself.
  oracles::Xorshift rng(42);
  for (int i = 0; i < 200; ++i) {
    const double th = rng.range(0.5 * kPi, kPi);
    CHECK(chi_opt(th, 3.0) == chi_opt(kPi - th, 3.0));
  }
}

TEST_CASE("grid ensemble: three-point example") {
  SimulationParams p;
  p.sigma_p = 0.1;
  p.n_momentum = 3;
  p.p_span = 1.0;  // half-width = sigma_p
  const MomentumEnsemble e = build_ensemble(p);

  REQUIRE(e.size() == 3);
  CHECK(e.p(0, 0) == -0.1);
  CHECK(e.p(1, 0) == 0.0);
  CHECK(e.p(2, 0) == 0.1);

  // Weights proportional to the Gaussian at the nodes, normalized.
  const double side = std::exp(-0.5);
  const double norm = 1.0 + 2.0 * side;
  CHECK(e.weights[0] == doctest::Approx(side / norm).epsilon(1e-15));
  CHECK(e.weights[1] == doctest::Approx(1.0 / norm).epsilon(1e-15));
  CHECK(e.weights[2] == e.weights[0]);
}

TEST_CASE("grid ensemble: normalization and symmetry") {
  SimulationParams p;
  p.sigma_p = 0.05;
  p.n_momentum = 101;
  const MomentumEnsemble e = build_ensemble(p);

  double sum = 0.0;
  for (double w : e.weights) sum += w;
  CHECK(std::fabs(sum - 1.0) < 1e-12);

  for (std::size_t n = 0; n < e.size(); ++n) {
    CHECK(e.weights[n] == e.weights[e.size() - 1 - n]);
    CHECK(e.p(n, 0) == -e.p(e.size() - 1 - n, 0));
  }
  CHECK(e.p(50, 0) == 0.0);
}

TEST_CASE("grid ensemble: determinism") {
  SimulationParams p;
  const MomentumEnsemble a = build_ensemble(p);
  const MomentumEnsemble b = build_ensemble(p);
  REQUIRE(a.size() == b.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    CHECK(a.points[n] == b.points[n]);
    CHECK(a.weights[n] == b.weights[n]);
  }
}

TEST_CASE("monte carlo ensemble: sample statistics and reproducibility") {
  SimulationParams p;
  p.ensemble_mode = EnsembleMode::MonteCarlo;
  p.n_momentum = 10000;
  p.seed = 7;
  p.sigma_p = 0.05;
  const MomentumEnsemble e = build_ensemble(p);

  REQUIRE(e.size() == 10000);
  double mean = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n) mean += e.p(n, 0);
  mean /= static_cast<double>(e.size());
  double var = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n)
    var += (e.p(n, 0) - mean) * (e.p(n, 0) - mean);
  var /= static_cast<double>(e.size());
  const double std_dev = std::sqrt(var);
  CHECK(std::fabs(std_dev / p.sigma_p - 1.0) < 0.03);

  for (double w : e.weights) CHECK(w == 1.0 / 10000.0);

  const MomentumEnsemble e2 = build_ensemble(p);
  for (std::size_t n = 0; n < e.size(); ++n)
    CHECK(e.points[n] == e2.points[n]);
}

TEST_CASE("monte carlo ensemble: 2D axes independent") {
  SimulationParams p;
  p.ensemble_mode = EnsembleMode::MonteCarlo;
  p.n_momentum = 5000;
  p.dimension = 2;
  p.seed = 11;
  const MomentumEnsemble e = build_ensemble(p);
  double sx = 0.0, sz = 0.0, sxz = 0.0;
  for (std::size_t n = 0; n < e.size(); ++n) {
    sx += e.p(n, 0) * e.p(n, 0);
    sz += e.p(n, 1) * e.p(n, 1);
    sxz += e.p(n, 0) * e.p(n, 1);
  }
  CHECK(std::sqrt(sx / 5000.0) == doctest::Approx(p.sigma_p).epsilon(0.05));
  CHECK(std::sqrt(sz / 5000.0) == doctest::Approx(p.sigma_p).epsilon(0.05));
  CHECK(std::fabs(sxz / 5000.0) < 0.05 * p.sigma_p * p.sigma_p);
}

TEST_CASE("ensemble rejects invalid parameters") {
  SimulationParams p;
  p.n_momentum = 100;  // even
  CHECK_THROWS_AS(build_ensemble(p), ConfigError);
  p.n_momentum = 1;
  CHECK_THROWS_AS(build_ensemble(p), ConfigError);
  p.n_momentum = 201;
  p.sigma_p = 0.0;
  CHECK_THROWS_AS(build_ensemble(p), ConfigError);
  p.sigma_p = -0.1;
  CHECK_THROWS_AS(build_ensemble(p), ConfigError);
}

TEST_CASE("locked-regime guard warning") {
  SimulationParams p;
  p.locked_analytics = true;
  p.chiN = -2.0;
  p.sigma_p = 0.05;  // ratio = 2 / 0.1 = 20 >= 10
  CHECK(p.warnings().empty());

  p.sigma_p = 0.15;  // ratio = 2 / 0.3 < 10
  CHECK(p.warnings().size() == 1);

  p.locked_analytics = false;
  CHECK(p.warnings().empty());
}

TEST_CASE("2D grid ensemble is a normalized tensor product") {
  SimulationParams p;
  p.dimension = 2;
  p.n_momentum = 9;
  const MomentumEnsemble e = build_ensemble(p);
  REQUIRE(e.size() == 81);
  double sum = 0.0;
  for (double w : e.weights) sum += w;
  CHECK(std::fabs(sum - 1.0) < 1e-12);
  // Point (0,0) is a node and carries the largest weight.
  std::size_t center = 4 * 9 + 4;
  CHECK(e.p(center, 0) == 0.0);
  CHECK(e.p(center, 1) == 0.0);
  for (double w : e.weights) CHECK(w <= e.weights[center] + 1e-18);
}
