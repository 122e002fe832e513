#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "solsim/ensemble.hpp"
#include "solsim/rk4.hpp"
#include "solsim/units.hpp"

namespace solsim {

// Two-component amplitude field over the ensemble: branch |p - hbar k>
// (down) and |p + hbar k> (up), one complex pair per momentum point,
// with |psi_down|^2 + |psi_up|^2 = 1 per point under unitary evolution.
struct SpinorField1D {
  std::vector<Complex> down, up;
  double time = 0.0;  // natural units

  explicit SpinorField1D(std::size_t n = 0) : down(n), up(n) {}
  std::size_t size() const { return down.size(); }

  // Bloch vector at polar angle theta, azimuth phi:
  // psi_up = cos(theta/2), psi_down = sin(theta/2) e^{i phi}, so
  // <s_z> = cos(theta)/2 and <s_+> = (sin(theta)/2) e^{i phi}.
  static SpinorField1D polar(std::size_t n, double theta, double phi = 0.0);

  // Instantaneous pi rotation about the equatorial axis at azimuth phi
  // (phi = 0 is the X axis); used as the spin-echo pulse.
  void apply_pi_pulse(double phi = 0.0);

  double per_point_norm(std::size_t n) const {
    return std::norm(down[n]) + std::norm(up[n]);
  }
};

// Weighted collective bilinear sum_m w_m conj(up_m) down_m; the weights
// sum to one, so the equal superposition gives exactly 1/2.
Complex exchange_field(const SpinorField1D& f, const MomentumEnsemble& e);

// Single-particle frequencies in the frame rotating at chiN*cos(theta)
// about Z (stationary collective field):
//   omega_down(p) = p^2/2 - k p - chiN cos(theta)/2
//   omega_up(p)   = p^2/2 + k p + chiN cos(theta)/2
// theta_frame = pi/2 is the symmetric rotating frame of the main model.
struct SingleParticleTerms {
  std::vector<double> omega_down, omega_up;
};
SingleParticleTerms single_particle_terms(const MomentumEnsemble& e,
                                          double chiN, double theta_frame);

// i d(psi)/dt for the self-consistent exchange model:
//   i psi_down' = omega_down psi_down + chiN * F * psi_up
//   i psi_up'   = omega_up   psi_up   + chiN * conj(F) * psi_down
// with F the weighted collective bilinear. Returns the time derivative
// (not i times it).
SpinorField1D derivative(const SpinorField1D& f, const MomentumEnsemble& e,
                         double chiN, double theta_frame = 0.5 * kPi);

// Same structure with the collective term replaced by the fixed transverse
// field Omega/2 (the non-interacting reference arm).
SpinorField1D drive_flatband_derivative(const SpinorField1D& f,
                                        const MomentumEnsemble& e,
                                        double omega);

struct EvolveOptions {
  double dt = 1e-3 * kTau;  // natural units
  std::size_t n_steps = 30000;
  std::size_t record_stride = 500;  // record every this many steps
};

struct Trajectory1D {
  std::vector<double> times;  // natural units
  std::vector<SpinorField1D> states;
};

// Generic two-level engine: exchange (self-consistent chiN) or drive
// (fixed Omega) coupling over arbitrary precomputed single-particle terms.
// Shared by the 1D model, the reference arm and the single-recoil 2D
// negative control.
struct TwoLevelCoupling {
  enum class Kind { Exchange, Drive };
  Kind kind = Kind::Exchange;
  double strength = kChiOptN;  // chiN or Omega
};

Trajectory1D evolve_two_level(const SpinorField1D& f0,
                              const std::vector<double>& weights,
                              const SingleParticleTerms& sp,
                              TwoLevelCoupling coupling,
                              const EvolveOptions& opt);

// Self-consistent exchange evolution in the theta rotating frame.
Trajectory1D evolve(const SpinorField1D& f0, const MomentumEnsemble& e,
                    double chiN, double t_final, double dt,
                    std::size_t record_stride = 0,
                    double theta_frame = 0.5 * kPi);

// Reference-arm evolution under the fixed drive Omega.
Trajectory1D evolve_driven(const SpinorField1D& f0, const MomentumEnsemble& e,
                           double omega, double t_final, double dt,
                           std::size_t record_stride = 0);

// Locked-regime closed-form amplitudes for the equal-superposition initial
// state: rotation generated by the fixed transverse field chiN/2 plus the
// spin-dependent Doppler, times the kinetic phase e^{-i p^2 t / 2}.
std::pair<Complex, Complex> closed_form_solution(double p, double chiN,
                                                 double t_d);

// Exact locked-band energy and its polynomial characterization.
struct DispersionCurve {
  std::vector<double> p_values;
  std::vector<double> energies;
  double effective_mass = kMass;  // analytic M/(1 + 4 E_R sin^2(theta)/chiN)
  double c_s = 0.0;               // sqrt(|chiN / (2 M*)|)
  // Quartic polynomial fit E ~ c0 + c1 p + c2 p^2 + c3 p^3 + c4 p^4;
  // c2 is the curvature at the band minimum, c1 the collective recoil shift.
  double c0 = 0, c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  double fit_effective_mass = kMass;  // 1/(2 c2), +inf when c2 ~ 0
};

// E(p) = -(1/2) sqrt((chiN sin(theta))^2 + (2 k p / M + chiN cos(theta))^2)
//        + p^2 / (2 M hbar)
double band_energy(double p, double chiN, double theta = 0.5 * kPi);

DispersionCurve dispersion(const std::vector<double>& p_values, double chiN,
                           double theta = 0.5 * kPi);

// Analytic effective mass M/(1 + 4 E_R sin^2(theta) / chiN); infinity at
// the flat-band condition, M for the free case chiN = 0.
double effective_mass(double chiN, double theta = 0.5 * kPi);

// Conserved quantities of the mean-field flow, used by the test suites.
double weighted_magnetization(const SpinorField1D& f,
                              const MomentumEnsemble& e);
double mean_field_energy(const SpinorField1D& f, const MomentumEnsemble& e,
                         double chiN, double theta_frame = 0.5 * kPi);

}  // namespace solsim
