#pragma once

#include <cmath>

namespace solsim {

// Natural units: hbar = M = k = 1. Energies are then multiples of
// 2*E_R = 1, momenta are in units of hbar*k, and the recoil velocity
// hbar*k/M equals one.
inline constexpr double kHbar = 1.0;
inline constexpr double kMass = 1.0;
inline constexpr double kWavenumber = 1.0;

// E_R = hbar^2 k^2 / (2 M) = 0.5
inline constexpr double kRecoilEnergy =
    kHbar * kWavenumber * kWavenumber / (2.0 * kMass);

// hbar*k/M = 1
inline constexpr double kRecoilVelocity = kHbar * kWavenumber / kMass;

inline constexpr double kPi = 3.14159265358979323846;

// Flat-band coupling at theta = pi/2: chi_opt * N = -4 E_R = -2.
inline constexpr double kChiOptN = -4.0 * kRecoilEnergy;

// Characteristic time tau = 2*pi / (|chi_opt| N) = pi. All file exports
// report times in units of tau; internal integration uses natural units.
inline constexpr double kTau = 2.0 * kPi / (-kChiOptN);

inline double tau_to_natural(double t_tau) { return t_tau * kTau; }
inline double natural_to_tau(double t_nat) { return t_nat / kTau; }

// Optimal coupling chi_opt(theta) * N / N_atoms = -4 E_R sin^2(theta) / N.
// theta outside [0, pi] is folded in by the sin^2 symmetry; the fold about
// pi/2 uses the same subtraction the evenness identity does, so
// chi_opt(theta) == chi_opt(pi - theta) holds bitwise.
inline double chi_opt(double theta, double n_atoms) {
  double th = std::fabs(theta);
  if (th > kPi) th = std::fmod(th, kPi);
  if (th > 0.5 * kPi) th = kPi - th;
  const double s = std::sin(th);
  return -4.0 * kRecoilEnergy * s * s / n_atoms;
}

}  // namespace solsim
