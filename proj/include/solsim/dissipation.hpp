#pragma once

#include <utility>
#include <vector>

#include "solsim/units.hpp"

namespace solsim {

// Cavity inputs of the dual-pump rate formula. All frequencies in the same
// (arbitrary) unit; the Gammas come out in that unit.
struct CavityParams {
  double g = 0.0;        // single-photon coupling
  double delta0 = 1.0;   // atomic detuning
  double kappa = 1.0;    // cavity linewidth
  double alpha_sq_1 = 0.0, alpha_sq_2 = 0.0;  // intracavity photon numbers
  double delta1 = 0.0, delta2 = 0.0;          // pump-cavity detunings

  void validate() const;  // kappa > 0, photon numbers >= 0
};

// Gamma_i = (g^2 / 4 Delta0)^2 |alpha_i|^2 kappa / (Delta_i^2 + (kappa/2)^2)
std::pair<double, double> gamma_rates(const CavityParams& c);

// Collective spin expectations for the damped Bloch model.
struct CollectiveBloch {
  double sx = 0.0, sy = 0.0, sz = 0.0;
  double n_atoms = 1.0;

  double norm_squared() const { return sx * sx + sy * sy + sz * sz; }
  static CollectiveBloch polar(double n_atoms, double theta, double phi = 0.0);
};

// Mean-field Bloch derivative for pumps L1 = sqrt(Gamma1) S+ and
// L2 = sqrt(Gamma2) S-. The unitary part is the Z precession at
// -2 (chi1+chi2) S_Z from H = (chi1+chi2)(S^2 - S_Z^2); chiN = (chi1+chi2)N.
// Balanced case: dS_X = U_X - Gamma S_X, dS_Y = U_Y - Gamma S_Y,
// dS_Z = -2 Gamma S_Z. The unbalanced terms come from factorizing
// <S+ S-> -> S_X^2 + S_Y^2 + S_Z (and the transverse analogue); they are an
// extension beyond the balanced display.
CollectiveBloch bloch_derivative(const CollectiveBloch& s, double chiN,
                                 double gamma1, double gamma2);

struct BlochTrajectory {
  std::vector<double> times;  // natural units
  std::vector<CollectiveBloch> states;
};

// RK4 on bloch_derivative; preserves the contraction invariant
// |S| <= N/2 for admissible initial states.
BlochTrajectory evolve_bloch(const CollectiveBloch& s0, double chiN,
                             double gamma1, double gamma2, double t_final,
                             double dt, std::size_t record_stride = 0);

// Least-squares exponential decay rate of the series q(t) (log-linear fit);
// used to extract Gamma and 2*Gamma from trajectories.
double fit_decay_rate(const std::vector<double>& times,
                      const std::vector<double>& values);

}  // namespace solsim
