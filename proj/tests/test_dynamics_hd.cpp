#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "solsim/dynamics_hd.hpp"
#include "solsim/ensemble.hpp"
#include "solsim/errors.hpp"
#include "solsim/linalg.hpp"
#include "support/oracles.hpp"

using namespace solsim;

namespace {

MomentumEnsemble grid_2d(double sigma_p, int n) {
  SimulationParams p;
  p.dimension = 2;
  p.sigma_p = sigma_p;
  p.n_momentum = n;
  return build_ensemble(p);
}

}  // namespace

TEST_CASE("coupling matrix: layout and symmetry") {
  const double chiN = -1.7;
  const CouplingMatrixHD cm =
      build_coupling_matrix({0.13, -0.07, 0.0}, chiN, 2);
  REQUIRE(cm.size() == 5);
  CHECK(cm.at(0, 1) == 0.5 * chiN);
  CHECK(cm.at(1, 2) == 0.13);
  CHECK(cm.at(1, 3) == -0.07);
  for (int r = 0; r < 5; ++r) {
    CHECK(cm.at(r, 4) == 0.0);
    CHECK(cm.at(4, r) == 0.0);
    for (int c = 0; c < 5; ++c) CHECK(cm.at(r, c) == cm.at(c, r));
  }
  CHECK(cm.at(0, 2) == 0.0);
  CHECK(cm.at(0, 3) == 0.0);
  CHECK(cm.at(2, 3) == 0.0);

  CHECK_THROWS_AS(build_coupling_matrix({0.1, 0.1, 0.0}, chiN, 4),
                  NumericError);
}

TEST_CASE("coupling matrix: eigenvalues at special points") {
  // p = 0: the exchange block gives +-chiN/2 plus three zeros.
  const double chiN = -2.0;
  const CouplingMatrixHD cm0 = build_coupling_matrix({0, 0, 0}, chiN, 2);
  const std::vector<double> ev0 = symmetric_eigenvalues(cm0.m, 5);
  CHECK(ev0.front() == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(ev0.back() == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 1; i < 4; ++i) CHECK(std::fabs(ev0[i]) < 1e-14);

  // chiN = 0: the star of A couplings gives +-|k p / M|.
  const CouplingMatrixHD cmk =
      build_coupling_matrix({0.12, 0.05, 0.0}, 0.0, 2);
  const std::vector<double> evk = symmetric_eigenvalues(cmk.m, 5);
  const double r = std::sqrt(0.12 * 0.12 + 0.05 * 0.05);
  CHECK(evk.front() == doctest::Approx(-r).epsilon(1e-12));
  CHECK(evk.back() == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("coupling matrix: ground eigenvalue closed form, 100 random p") {
  oracles::Xorshift rng(9);
  for (int dim = 2; dim <= 3; ++dim) {
    for (int trial = 0; trial < 100; ++trial) {
      std::array<double, 3> p = {rng.range(-0.3, 0.3), rng.range(-0.3, 0.3),
                                 dim == 3 ? rng.range(-0.3, 0.3) : 0.0};
      const double chiN = rng.range(-3.0, -0.5);
      const CouplingMatrixHD cm = build_coupling_matrix(p, chiN, dim);
      const std::vector<double> ev =
          symmetric_eigenvalues(cm.m, cm.size());
      CHECK(std::fabs(ev.front() - hd_ground_eigenvalue(p, chiN, dim)) <
            1e-12);
    }
  }
}

TEST_CASE("dressed basis transform") {
  const std::array<Complex, 4> sym_bare = {0.5, 0.5, 0.5, 0.5};
  const std::array<Complex, 4> dressed = dressed_basis_transform(sym_bare);
  CHECK(std::abs(dressed[0] - Complex{1, 0}) < 1e-15);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(dressed[i]) < 1e-15);

  const std::array<Complex, 4> back =
      bare_basis_transform({Complex{1, 0}, 0, 0, 0});
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(back[i] - Complex{0.5, 0}) < 1e-15);

  oracles::Xorshift rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<Complex, 4> v;
    double norm = 0.0;
    for (auto& c : v) {
      c = Complex{rng.range(-1, 1), rng.range(-1, 1)};
      norm += std::norm(c);
    }
    const std::array<Complex, 4> w = dressed_basis_transform(v);
    double wnorm = 0.0;
    for (const auto& c : w) wnorm += std::norm(c);
    CHECK(wnorm == doctest::Approx(norm).epsilon(1e-14));
    // Involution: applying the (symmetric, orthogonal) transform twice
    // restores the input.
    const std::array<Complex, 4> vv = dressed_basis_transform(w);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(vv[i] - v[i]) < 1e-14);
  }
}

TEST_CASE("evolve_hd: p = 0 point stays a two-level problem") {
  MomentumEnsemble e;
  e.dimension = 2;
  e.points = {{0.0, 0.0, 0.0}};
  e.weights = {1.0};
  const SpinorFieldHD f0 = SpinorFieldHD::equal_superposition(2, 1);
  const double chiN = -2.0;
  const double t = 2.0 * kTau;
  const TrajectoryHD traj = evolve_hd(f0, e, chiN, t, 1e-3 * kTau);
  const SpinorFieldHD& f = traj.states.back();

  // Locked two-level phase evolution at the gap frequency chiN/2.
  const Complex expect =
      std::exp(Complex{0, -1} * (0.5 * chiN * t)) / std::sqrt(2.0);
  CHECK(std::abs(f.at(0, 0) - expect) < 1e-9);
  CHECK(std::abs(f.at(1, 0) - expect) < 1e-9);
  for (int c = 2; c < 5; ++c) CHECK(std::abs(f.at(c, 0)) < 1e-10);
}

TEST_CASE("evolve_hd: conservation and the inert component") {
  const MomentumEnsemble e = grid_2d(0.05, 9);
  SpinorFieldHD f0 = SpinorFieldHD::equal_superposition(2, e.size());
  // Put some weight in the decoupled state to watch it stay put.
  for (std::size_t n = 0; n < e.size(); ++n) {
    f0.at(0, n) = 0.6;
    f0.at(1, n) = 0.6;
    f0.at(4, n) = std::sqrt(1.0 - 2 * 0.36);
  }
  const double chiN = kChiOptN;
  const TrajectoryHD traj = evolve_hd(f0, e, chiN, 5.0 * kTau, 1e-3 * kTau,
                                      1000);

  const double sz0 = weighted_magnetization_hd(f0, e);
  const double en0 = mean_field_energy_hd(f0, e, chiN);
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double tau_elapsed = natural_to_tau(traj.times[i]);
    const SpinorFieldHD& f = traj.states[i];
    for (std::size_t n = 0; n < e.size(); ++n)
      CHECK(std::fabs(f.per_point_norm(n) - 1.0) < 1e-9 * tau_elapsed);
    CHECK(std::fabs(weighted_magnetization_hd(f, e) - sz0) <
          1e-9 * tau_elapsed);
    CHECK(std::fabs(mean_field_energy_hd(f, e, chiN) - en0) <
          1e-8 * tau_elapsed);

    // The remainder state only picks up the kinetic phase.
    for (std::size_t n = 0; n < e.size(); ++n) {
      const Complex expect =
          f0.at(4, n) * std::exp(Complex{0, -1} *
                                 (e.p_squared(n) / 2.0) * traj.times[i]);
      CHECK(std::abs(f.at(4, n) - expect) < 1e-8);
      CHECK(std::fabs(std::abs(f.at(4, n)) - std::abs(f0.at(4, n))) < 1e-10);
    }
  }
}

TEST_CASE("evolve_hd: 3D reduced model conserves as well") {
  SimulationParams p;
  p.dimension = 3;
  p.n_momentum = 5;
  p.sigma_p = 0.05;
  const MomentumEnsemble e = build_ensemble(p);
  const SpinorFieldHD f0 = SpinorFieldHD::equal_superposition(3, e.size());
  const TrajectoryHD traj =
      evolve_hd(f0, e, kChiOptN, 2.0 * kTau, 1e-3 * kTau);
  const SpinorFieldHD& f = traj.states.back();
  for (std::size_t n = 0; n < e.size(); ++n)
    CHECK(std::fabs(f.per_point_norm(n) - 1.0) < 1e-9);
  CHECK(std::fabs(weighted_magnetization_hd(f, e) -
                  weighted_magnetization_hd(f0, e)) < 1e-9);
}

TEST_CASE("flat-band Taylor remainder bound in 2D") {
  const double chiN = kChiOptN;
  const double e0 = 0.5 * chiN;
  oracles::Xorshift rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const double px = rng.range(-0.2, 0.2);
    const double pz = rng.range(-0.2, 0.2);
    const double band =
        -std::sqrt(0.25 * chiN * chiN + px * px + pz * pz) +
        0.5 * (px * px + pz * pz);
    const double q2 = px * px + pz * pz;  // sum of (k p_i / M)^2
    const double bound = 2.0 * q2 * q2 / std::pow(std::fabs(chiN), 3);
    CHECK(std::fabs(band - e0) <= bound + 1e-15);
  }
}

TEST_CASE("naive 2D dispersion: values and quadratic form") {
  const double chiN = kChiOptN;

  // Cross coefficient never cancels: k^2 / (2 M^2 chiN) at k_vec = (k, k).
  const NaiveQuadraticForm q = naive_2d_quadratic_coeffs(chiN, 1.0, 1.0);
  CHECK(q.cxz == doctest::Approx(1.0 / (2.0 * chiN)).epsilon(1e-15));
  CHECK(q.cxz != 0.0);

  // Finite differences of the exact energy reproduce the coefficients.
  auto energy = [&](double px, double pz) {
    return naive_2d_dispersion(px, pz, chiN, 1.0, 1.0);
  };
  const double h = 1e-4;
  CHECK(oracles::fd_dxz(energy, 0.0, 0.0, h) ==
        doctest::Approx(q.cxz).epsilon(1e-5));
  CHECK(0.5 * oracles::fd_dxx(energy, 0.0, 0.0, h) ==
        doctest::Approx(q.cxx).epsilon(1e-5));

  // Along (1, -1)/sqrt(2) the interaction correction vanishes.
  for (double s : {0.05, 0.1, 0.2}) {
    const double px = s / std::sqrt(2.0), pz = -s / std::sqrt(2.0);
    CHECK(naive_2d_dispersion(px, pz, chiN, 1.0, 1.0) ==
          doctest::Approx(0.5 * chiN + 0.5 * s * s).epsilon(1e-12));
  }

  // One principal-axis eigenvalue of the coefficient matrix is the bare
  // 1/(2 M hbar) for every chiN.
  for (double c : {-8.0, -2.0, -0.5, 0.7, 3.0}) {
    const NaiveQuadraticForm qc = naive_2d_quadratic_coeffs(c, 1.0, 1.0);
    const double tr = qc.cxx + qc.czz;
    const double det = qc.cxx * qc.czz - 0.25 * qc.cxz * qc.cxz;
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    const double lo = tr / 2.0 - disc, hi = tr / 2.0 + disc;
    const bool bare_is_eigen = std::fabs(lo - 0.5) < 1e-12 ||
                               std::fabs(hi - 0.5) < 1e-12;
    CHECK(bare_is_eigen);
  }
}

TEST_CASE("naive control: uncoupled axis spreads freely") {
  SimulationParams p;
  p.dimension = 2;
  p.sigma_p = 0.08;
  p.n_momentum = 9;
  const MomentumEnsemble e = build_ensemble(p);
  const SpinorField1D f0 = SpinorField1D::polar(e.size(), 0.5 * kPi);
  const double k_norm = std::sqrt(2.0);
  const Trajectory1D traj = evolve_naive_control(
      f0, e, -1.0, k_norm, 2.0 * kTau, 1e-3 * kTau);
  // Norms stay unit; the second axis enters only through the kinetic phase.
  const SpinorField1D& f = traj.states.back();
  for (std::size_t n = 0; n < e.size(); ++n)
    CHECK(std::fabs(f.per_point_norm(n) - 1.0) < 1e-9);
}
