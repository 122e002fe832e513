#pragma once

#include <cstddef>
#include <vector>

#include "solsim/dynamics1d.hpp"
#include "solsim/dynamics_hd.hpp"
#include "solsim/ensemble.hpp"

namespace solsim {

enum class Branch { Down, Up };

// Uniform position grid.
struct ZGrid {
  std::vector<double> z;
  double dz = 0.0;

  static ZGrid linspace(double z_min, double z_max, std::size_t n);
};

// Default rendering grid: span 40 sigma_z(0) plus the ballistic drift
// margin 2 hbar k t_final / M, 2048 points. sigma_z(0) = hbar/(2 sigma_p).
ZGrid default_z_grid(double sigma_p, double t_final_natural,
                     std::size_t n_points = 2048);

// Branch-resolved position-space density at one time. The per-branch
// integral equals the branch population by construction.
struct DensityProfile {
  std::vector<double> z;
  std::vector<double> rho_down, rho_up;
  // Fringe-resolved combined density |A_down e^{-ikz} + A_up e^{+ikz}|^2,
  // secondary output (the per-branch densities ignore the cross term).
  std::vector<double> rho_total;
  double time = 0.0;

  double integral(Branch b) const;
};

// A_b(z) = sum_n sqrt(w_n) psi_b(p_n) e^{i p_n z}, density = |A_b|^2,
// rescaled so the window integral equals the branch population. Errors if
// the window holds less than 99.9% of the synthesized mass.
DensityProfile position_density(const SpinorField1D& f,
                                const MomentumEnsemble& e, const ZGrid& grid);

// Single-branch variant matching the per-branch contract.
std::vector<double> position_density_branch(const SpinorField1D& f,
                                            const MomentumEnsemble& e,
                                            const ZGrid& grid, Branch b);

// Gaussian fit A exp(-(z - z0)^2 / 2 sigma^2) (no offset) by damped
// Gauss-Newton, moment-initialized; converged when the relative parameter
// update drops below 1e-8 (at most 100 iterations). Non-convergence keeps
// the moment values and sets converged = false.
struct FitResult {
  double amplitude = 0.0;
  double center = 0.0;
  double sigma = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
  int iterations = 0;
};

FitResult fit_gaussian(const std::vector<double>& z,
                       const std::vector<double>& rho);
FitResult fit_gaussian(const DensityProfile& profile, Branch b);

// Fitted widths per sample time and branch, normalized by the t = 0 width.
struct WidthSeries {
  std::vector<double> times;  // natural units
  std::vector<FitResult> down, up;
  std::vector<double> ratio_down, ratio_up;
  double sigma0_down = 0.0, sigma0_up = 0.0;
};

WidthSeries width_series(const Trajectory1D& traj, const MomentumEnsemble& e,
                         const ZGrid& grid);

// Terminal normalized width per coupling value of a theta-initialized
// ensemble evolved to t_d. ratio_weighted combines the two branches with
// their populations sin^2(theta/2), cos^2(theta/2); it is the observable
// symmetric under theta <-> pi - theta (which swaps the branches).
struct SweepPoint {
  double chiN = 0.0;
  double ratio_down = 0.0, ratio_up = 0.0;
  double ratio_weighted = 0.0;
  bool fit_ok = true;
};

struct SweepResult {
  double theta = 0.0;
  std::vector<SweepPoint> points;
  std::size_t argmin = 0;       // index minimizing ratio_weighted
  bool locked_guard_ok = true;  // |chi_opt(theta) N| >= 10 * 2 k sigma_p / M
};

SweepResult sweep_width_vs_chi(const SimulationParams& base, double theta,
                               const std::vector<double>& chi_grid,
                               double t_d_natural);

// Two-arm detection sequence: arm A evolves under the fixed drive
// Omega_arm, arm B under the exchange coupling chiN_arm (or the drive too,
// for the reference case). Contrast C(t) = |sum_n w_n <psi_A | psi_B>_n|;
// the closing-pulse population difference P(t) = (1 + Re O~)/2 references
// the overlap phase to the p = 0 grid node. The echo flag inserts
// simultaneous pi pulses about X in both arms at t/2.
struct ContrastSeries {
  std::vector<double> times;  // natural units
  std::vector<double> contrast;
  std::vector<double> population;
};

ContrastSeries interferometer_sequence(const MomentumEnsemble& e,
                                       double chiN_arm, double omega_arm,
                                       bool echo, double t_final, double dt,
                                       std::size_t record_stride,
                                       bool arm_b_driven = false);

// --- higher-dimensional observables ------------------------------------

// Exact marginal density along one axis of a tensor-product-grid field:
// integration over the other axes uses momentum-row orthogonality, so no
// transverse position window is involved.
std::vector<double> marginal_density_hd(const SpinorFieldHD& f,
                                        const MomentumEnsemble& e, int axis,
                                        const ZGrid& grid, Branch b);

struct WidthSeriesHD {
  std::vector<double> times;
  // Fitted down-branch widths per axis, normalized by the initial width.
  std::vector<std::vector<FitResult>> fits;    // [axis][sample]
  std::vector<std::vector<double>> ratios;     // [axis][sample]
  std::vector<double> sigma0;                  // [axis]
};

WidthSeriesHD width_series_hd(const TrajectoryHD& traj,
                              const MomentumEnsemble& e, const ZGrid& grid);

// Full 2D down-branch density on a tensor position grid (for export).
struct DensityGrid2D {
  std::vector<double> x, z;
  std::vector<double> rho;  // row-major, x slow
  double time = 0.0;
};

DensityGrid2D density_grid_2d(const SpinorFieldHD& f,
                              const MomentumEnsemble& e, const ZGrid& gx,
                              const ZGrid& gz);

// Marginal widths of a two-level field over a 2D ensemble (the
// single-recoil negative control).
std::vector<double> marginal_density_two_level(const SpinorField1D& f,
                                               const MomentumEnsemble& e,
                                               int axis, const ZGrid& grid,
                                               Branch b);

}  // namespace solsim
