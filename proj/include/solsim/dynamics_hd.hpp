#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "solsim/dynamics1d.hpp"
#include "solsim/ensemble.hpp"
#include "solsim/rk4.hpp"
#include "solsim/units.hpp"

namespace solsim {

// Per-momentum coupling matrix in the ordered dressed basis
// { down, up_sym, up_A1 .. up_Ad, decoupled remainder }, size d+3.
// Entries: (down, up_sym) = chiN/2, (up_sym, A_i) = k p_i / M; the row and
// column of the remainder state are identically zero. Real symmetric.
struct CouplingMatrixHD {
  int dimension = 2;
  double chiN = kChiOptN;
  std::vector<double> m;  // row-major, (d+3)^2

  int size() const { return dimension + 3; }
  double at(int r, int c) const { return m[r * size() + c]; }
};

CouplingMatrixHD build_coupling_matrix(std::array<double, 3> p, double chiN,
                                       int dimension);

// Closed-form ground eigenvalue of the coupling matrix,
// -sqrt((chiN/2)^2 + sum_i (k p_i / M)^2).
double hd_ground_eigenvalue(std::array<double, 3> p, double chiN,
                            int dimension);

// Orthonormal transform between the four bare up states (mu_x, mu_z ordered
// ++, +-, -+, --) and the dressed set {up_sym, A_1, A_2, A_3}. The matrix is
// symmetric, so it is its own inverse.
std::array<Complex, 4> dressed_basis_transform(
    const std::array<Complex, 4>& bare);
std::array<Complex, 4> bare_basis_transform(
    const std::array<Complex, 4>& dressed);

// Component-major amplitude field over the ensemble; ncomp = d + 3 per
// point, unit per-point norm.
struct SpinorFieldHD {
  int dimension = 2;
  std::size_t npoints = 0;
  std::vector<Complex> amps;  // amps[c * npoints + n]
  double time = 0.0;

  SpinorFieldHD() = default;
  SpinorFieldHD(int dim, std::size_t n)
      : dimension(dim), npoints(n), amps(static_cast<std::size_t>(dim + 3) * n) {}

  int ncomp() const { return dimension + 3; }
  Complex& at(int c, std::size_t n) { return amps[c * npoints + n]; }
  Complex at(int c, std::size_t n) const { return amps[c * npoints + n]; }

  double per_point_norm(std::size_t n) const {
    double s = 0.0;
    for (int c = 0; c < ncomp(); ++c) s += std::norm(at(c, n));
    return s;
  }

  // (|down> + |up_sym>)/sqrt(2) at every point (the Raman pi/2 pulse).
  static SpinorFieldHD equal_superposition(int dim, std::size_t n);
};

struct TrajectoryHD {
  std::vector<double> times;
  std::vector<SpinorFieldHD> states;
};

// Per-point coupling matrix plus the common dispersion p^2/(2 M hbar), with
// the down <-> up_sym entry made self-consistent (chiN times the weighted
// collective bilinear). Same RK4 driver and guards as the 1D model.
TrajectoryHD evolve_hd(const SpinorFieldHD& f0, const MomentumEnsemble& e,
                       double chiN, double t_final, double dt,
                       std::size_t record_stride = 0);

// Population difference between down and the up sector, conserved by the
// exchange term.
double weighted_magnetization_hd(const SpinorFieldHD& f,
                                 const MomentumEnsemble& e);
double mean_field_energy_hd(const SpinorFieldHD& f, const MomentumEnsemble& e,
                            double chiN);

// Single-recoil 2D scheme (negative control): coupling |p> <-> |p + hbar k|
// with photon wave vector k_vec = (k_x, k_z).
//   E(p) = -(1/2) sqrt((chiN)^2 + ((k_x p_x + k_z p_z)/M)^2)
//          + (p_x^2 + p_z^2)/(2 M hbar)
double naive_2d_dispersion(double px, double pz, double chiN, double kx,
                           double kz);

// Coefficients of the small-p quadratic form of the naive dispersion:
// E ~ chiN/2 + cxx px^2 + czz pz^2 + cxz px pz. The off-diagonal
// cxz = kx kz / (2 M^2 chiN) cannot be canceled by any chiN.
struct NaiveQuadraticForm {
  double cxx = 0.0, czz = 0.0, cxz = 0.0;
};
NaiveQuadraticForm naive_2d_quadratic_coeffs(double chiN, double kx,
                                             double kz);

// Mean-field evolution of the single-recoil control on a 2D ensemble, in
// coordinates rotated so the first axis is along k_vec; the second axis is
// then uncoupled and broadens freely, exposing the anisotropy.
Trajectory1D evolve_naive_control(const SpinorField1D& f0,
                                  const MomentumEnsemble& e, double chiN,
                                  double k_norm, double t_final, double dt,
                                  std::size_t record_stride = 0);

}  // namespace solsim
