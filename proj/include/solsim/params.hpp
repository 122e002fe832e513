#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solsim/units.hpp"

namespace solsim {

enum class EnsembleMode { Grid, MonteCarlo };

// Physical and numerical inputs shared by all dynamics modules. The
// coupling enters only as the product chi*N; times (dt, t_final) are in
// units of tau, momenta in units of hbar*k.
struct SimulationParams {
  double chiN = kChiOptN;    // exchange energy chi*N (natural units)
  double sigma_p = 0.05;     // rms momentum spread of the selected ensemble
  double theta = 0.5 * kPi;  // initial polar angle of the Bloch vector
  int n_momentum = 201;      // grid nodes per axis (odd) or MC sample count
  double p_span = 5.0;       // grid half-width, in units of sigma_p
  double dt = 1e-3;          // integrator step, units of tau
  double t_final = 30.0;     // units of tau
  int dimension = 1;         // 1, 2 or 3
  std::uint64_t seed = 12345;
  EnsembleMode ensemble_mode = EnsembleMode::Grid;
  bool locked_analytics = false;  // user requests locked-regime analytics

  double dt_natural() const { return dt * kTau; }
  double t_final_natural() const { return t_final * kTau; }
  double grid_half_width() const { return p_span * sigma_p; }

  // |chiN| compared to the Doppler spread 2 k sigma_p / M.
  double locked_ratio() const {
    return std::fabs(chiN) / (2.0 * kWavenumber * sigma_p / kMass);
  }

  // Hard invariants; throws ConfigError naming the offending field.
  void validate() const;

  // Soft guards (locked-regime validity, marginal step sizes). Never throws.
  std::vector<std::string> warnings() const;
};

// Largest single-particle angular frequency seen by the integrator,
// including the exchange field bound |chiN|/2. Used by the dt guard
// dt * f_max <= 0.05.
double max_single_particle_frequency(const SimulationParams& p);

}  // namespace solsim
