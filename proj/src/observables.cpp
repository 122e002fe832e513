#include "solsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "solsim/errors.hpp"
#include "solsim/parallel.hpp"

namespace solsim {

namespace {
constexpr Complex kI{0.0, 1.0};

// Fraction of window mass allowed in the outer 2.5% strips before the
// window is declared too small to hold 99.9% of the density.
constexpr double kEdgeMassTolerance = 1e-3;

void check_window(const std::vector<double>& rho, double dz, double z_min,
                  double z_max) {
  double total = 0.0;
  for (double r : rho) total += r;
  if (total <= 0.0) return;
  const std::size_t margin = std::max<std::size_t>(1, rho.size() / 40);
  double edge = 0.0;
  for (std::size_t i = 0; i < margin; ++i)
    edge += rho[i] + rho[rho.size() - 1 - i];
  if (edge > kEdgeMassTolerance * total) {
    std::ostringstream os;
    os << "position_density: window [" << z_min << ", " << z_max
       << "] holds less than 99.9% of the density; suggest a span of at "
          "least "
       << 2.0 * (z_max - z_min);
    throw NumericError(os.str());
  }
  (void)dz;
}

void normalize_to(std::vector<double>& rho, double dz, double target) {
  double integral = 0.0;
  for (double r : rho) integral += r;
  integral *= dz;
  if (integral > 0.0) {
    const double scale = target / integral;
    for (double& r : rho) r *= scale;
  }
}

// A discrete momentum grid synthesizes a periodic position amplitude with
// period 2*pi/dp; windows wider than that would include the image packets.
void check_period(const MomentumEnsemble& e, int axis, const ZGrid& grid) {
  if (e.mode != EnsembleMode::Grid || e.size() < 2) return;
  // Node spacing along the axis: step between the first two distinct
  // values given the tensor ordering (axis 0 slowest).
  double dp = 0.0;
  for (std::size_t n = 1; n < e.size(); ++n) {
    const double diff = std::fabs(e.p(n, axis) - e.p(0, axis));
    if (diff > 0.0) {
      dp = diff;
      break;
    }
  }
  if (dp == 0.0) return;
  const double period = 2.0 * kPi / dp;
  const double span = grid.z.back() - grid.z.front();
  if (span > period) {
    std::ostringstream os;
    os << "position grid span " << span
       << " exceeds the synthesis period 2*pi/dp = " << period
       << "; increase n_momentum or shrink the window";
    throw ConfigError(os.str());
  }
}

}  // namespace

ZGrid ZGrid::linspace(double z_min, double z_max, std::size_t n) {
  ZGrid g;
  g.z.resize(n);
  g.dz = (z_max - z_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    g.z[i] = z_min + static_cast<double>(i) * g.dz;
  return g;
}

ZGrid default_z_grid(double sigma_p, double t_final_natural,
                     std::size_t n_points) {
  const double sigma_z0 = kHbar / (2.0 * sigma_p);
  const double half =
      20.0 * sigma_z0 + kRecoilVelocity * t_final_natural;
  return ZGrid::linspace(-half, half, n_points);
}

double DensityProfile::integral(Branch b) const {
  const std::vector<double>& rho = b == Branch::Down ? rho_down : rho_up;
  double acc = 0.0;
  for (double r : rho) acc += r;
  return acc * (z[1] - z[0]);
}

DensityProfile position_density(const SpinorField1D& f,
                                const MomentumEnsemble& e, const ZGrid& grid) {
  check_period(e, 0, grid);
  const std::size_t np = f.size();
  const std::size_t nz = grid.z.size();

  std::vector<double> sqw(np);
  for (std::size_t n = 0; n < np; ++n) sqw[n] = std::sqrt(e.weights[n]);

  DensityProfile prof;
  prof.z = grid.z;
  prof.time = f.time;
  prof.rho_down.assign(nz, 0.0);
  prof.rho_up.assign(nz, 0.0);
  prof.rho_total.assign(nz, 0.0);

  std::vector<Complex> a_down(nz), a_up(nz);
  for (std::size_t j = 0; j < nz; ++j) {
    Complex ad{0.0, 0.0}, au{0.0, 0.0};
    for (std::size_t n = 0; n < np; ++n) {
      const Complex phase = std::exp(kI * (e.p(n, 0) * grid.z[j]));
      ad += sqw[n] * f.down[n] * phase;
      au += sqw[n] * f.up[n] * phase;
    }
    a_down[j] = ad;
    a_up[j] = au;
    prof.rho_down[j] = std::norm(ad);
    prof.rho_up[j] = std::norm(au);
    // Branch carriers -k and +k survive only in the cross term.
    const Complex carrier = std::exp(kI * (2.0 * kWavenumber * grid.z[j]));
    prof.rho_total[j] = std::norm(ad + au * carrier);
  }

  check_window(prof.rho_down, grid.dz, grid.z.front(), grid.z.back());
  check_window(prof.rho_up, grid.dz, grid.z.front(), grid.z.back());

  double pop_down = 0.0, pop_up = 0.0;
  for (std::size_t n = 0; n < np; ++n) {
    pop_down += e.weights[n] * std::norm(f.down[n]);
    pop_up += e.weights[n] * std::norm(f.up[n]);
  }
  normalize_to(prof.rho_down, grid.dz, pop_down);
  normalize_to(prof.rho_up, grid.dz, pop_up);
  normalize_to(prof.rho_total, grid.dz, pop_down + pop_up);
  return prof;
}

std::vector<double> position_density_branch(const SpinorField1D& f,
                                            const MomentumEnsemble& e,
                                            const ZGrid& grid, Branch b) {
  const DensityProfile prof = position_density(f, e, grid);
  return b == Branch::Down ? prof.rho_down : prof.rho_up;
}

namespace {

struct FitParams {
  double a, z0, sigma;
};

double residual_norm_of(const std::vector<double>& z,
                        const std::vector<double>& rho, const FitParams& p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double u = (z[i] - p.z0) / p.sigma;
    const double m = p.a * std::exp(-0.5 * u * u);
    acc += (rho[i] - m) * (rho[i] - m);
  }
  return std::sqrt(acc);
}

// Solves the 3x3 system by Gaussian elimination with partial pivoting.
bool solve3(double m[3][3], double b[3], double x[3]) {
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(m[idx[r]][col]) > std::fabs(m[idx[piv]][col])) piv = r;
    std::swap(idx[col], idx[piv]);
    const double d = m[idx[col]][col];
    if (d == 0.0 || !std::isfinite(d)) return false;
    for (int r = col + 1; r < 3; ++r) {
      const double s = m[idx[r]][col] / d;
      for (int c = col; c < 3; ++c) m[idx[r]][c] -= s * m[idx[col]][c];
      b[idx[r]] -= s * b[idx[col]];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double acc = b[idx[r]];
    for (int c = r + 1; c < 3; ++c) acc -= m[idx[r]][c] * x[c];
    x[r] = acc / m[idx[r]][r];
  }
  return std::isfinite(x[0] + x[1] + x[2]);
}

}  // namespace

FitResult fit_gaussian(const std::vector<double>& z,
                       const std::vector<double>& rho) {
  FitResult out;

  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    m0 += rho[i];
    m1 += rho[i] * z[i];
  }
  if (m0 <= 0.0) return out;
  const double mean = m1 / m0;
  double var = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    var += rho[i] * (z[i] - mean) * (z[i] - mean);
  var /= m0;

  FitParams moments{*std::max_element(rho.begin(), rho.end()), mean,
                    std::sqrt(std::max(var, 1e-300))};
  FitParams p = moments;
  double rn = residual_norm_of(z, rho, p);
  double lambda = 1e-3;

  for (int iter = 1; iter <= 100; ++iter) {
    out.iterations = iter;
    double jtj[3][3] = {};
    double jtr[3] = {};
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double u = (z[i] - p.z0) / p.sigma;
      const double m = p.a * std::exp(-0.5 * u * u);
      const double r = rho[i] - m;
      const double j0 = m / p.a;
      const double j1 = m * u / p.sigma;
      const double j2 = m * u * u / p.sigma;
      const double jac[3] = {j0, j1, j2};
      for (int a = 0; a < 3; ++a) {
        jtr[a] += jac[a] * r;
        for (int b = 0; b < 3; ++b) jtj[a][b] += jac[a] * jac[b];
      }
    }

    bool accepted = false;
    FitParams next = p;
    double rn_next = rn;
    double delta[3] = {};
    for (int attempt = 0; attempt < 24 && !accepted; ++attempt) {
      double damped[3][3];
      double rhs[3] = {jtr[0], jtr[1], jtr[2]};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          damped[a][b] = jtj[a][b] * (a == b ? 1.0 + lambda : 1.0);
      if (!solve3(damped, rhs, delta)) {
        lambda *= 10.0;
        continue;
      }
      FitParams trial{p.a + delta[0], p.z0 + delta[1], p.sigma + delta[2]};
      trial.sigma = std::fabs(trial.sigma);
      if (trial.sigma < 1e-300 || trial.a <= 0.0) {
        lambda *= 10.0;
        continue;
      }
      const double rt = residual_norm_of(z, rho, trial);
      if (rt <= rn) {
        next = trial;
        rn_next = rt;
        accepted = true;
        lambda = std::max(lambda / 3.0, 1e-12);
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) break;  // stalled; report the last accepted state

    const double rel = std::max(
        {std::fabs(delta[0]) / std::max(std::fabs(next.a), 1e-300),
         std::fabs(delta[1]) / std::max(std::fabs(next.z0), next.sigma),
         std::fabs(delta[2]) / next.sigma});
    p = next;
    rn = rn_next;
    if (rel < 1e-8) {
      out.converged = true;
      break;
    }
  }

  if (!out.converged) {
    // Moment-based fallback, flagged.
    out.amplitude = moments.a;
    out.center = moments.z0;
    out.sigma = moments.sigma;
    out.residual_norm = residual_norm_of(z, rho, moments);
    return out;
  }
  out.amplitude = p.a;
  out.center = p.z0;
  out.sigma = p.sigma;
  out.residual_norm = rn;
  return out;
}

FitResult fit_gaussian(const DensityProfile& profile, Branch b) {
  return fit_gaussian(profile.z,
                      b == Branch::Down ? profile.rho_down : profile.rho_up);
}

WidthSeries width_series(const Trajectory1D& traj, const MomentumEnsemble& e,
                         const ZGrid& grid) {
  WidthSeries ws;
  ws.times = traj.times;
  ws.down.resize(traj.states.size());
  ws.up.resize(traj.states.size());
  parallel_for(traj.states.size(), [&](std::size_t i) {
    const DensityProfile prof = position_density(traj.states[i], e, grid);
    ws.down[i] = fit_gaussian(prof, Branch::Down);
    ws.up[i] = fit_gaussian(prof, Branch::Up);
  });
  ws.sigma0_down = ws.down.front().sigma;
  ws.sigma0_up = ws.up.front().sigma;
  ws.ratio_down.resize(ws.down.size());
  ws.ratio_up.resize(ws.up.size());
  for (std::size_t i = 0; i < ws.down.size(); ++i) {
    ws.ratio_down[i] = ws.down[i].sigma / ws.sigma0_down;
    ws.ratio_up[i] = ws.up[i].sigma / ws.sigma0_up;
  }
  return ws;
}

SweepResult sweep_width_vs_chi(const SimulationParams& base, double theta,
                               const std::vector<double>& chi_grid,
                               double t_d_natural) {
  SimulationParams params = base;
  params.theta = theta;
  const MomentumEnsemble ens = build_ensemble(params);
  const ZGrid grid = default_z_grid(params.sigma_p, t_d_natural);
  const SpinorField1D f0 = SpinorField1D::polar(ens.size(), theta);

  const DensityProfile prof0 = position_density(f0, ens, grid);
  const FitResult fit0_down = fit_gaussian(prof0, Branch::Down);
  const FitResult fit0_up = fit_gaussian(prof0, Branch::Up);

  SweepResult result;
  result.theta = theta;
  result.points.resize(chi_grid.size());
  result.locked_guard_ok =
      std::fabs(chi_opt(theta, 1.0)) >=
      10.0 * 2.0 * kWavenumber * params.sigma_p / kMass;

  const double pop_down = std::sin(0.5 * theta) * std::sin(0.5 * theta);
  const double pop_up = 1.0 - pop_down;

  parallel_for(chi_grid.size(), [&](std::size_t i) {
    const double chiN = chi_grid[i];
    const Trajectory1D traj = evolve(f0, ens, chiN, t_d_natural,
                                     params.dt_natural(), 0, theta);
    const DensityProfile prof =
        position_density(traj.states.back(), ens, grid);
    const FitResult fd = fit_gaussian(prof, Branch::Down);
    const FitResult fu = fit_gaussian(prof, Branch::Up);
    SweepPoint& pt = result.points[i];
    pt.chiN = chiN;
    pt.ratio_down = fd.sigma / fit0_down.sigma;
    pt.ratio_up = fu.sigma / fit0_up.sigma;
    pt.ratio_weighted = pop_down * pt.ratio_down + pop_up * pt.ratio_up;
    pt.fit_ok = fd.converged && fu.converged;
  });

  result.argmin = 0;
  for (std::size_t i = 1; i < result.points.size(); ++i)
    if (result.points[i].ratio_weighted <
        result.points[result.argmin].ratio_weighted)
      result.argmin = i;
  return result;
}

namespace {

std::size_t zero_node(const MomentumEnsemble& e) {
  std::size_t best = 0;
  double best_p2 = e.p_squared(0);
  for (std::size_t n = 1; n < e.size(); ++n) {
    const double p2 = e.p_squared(n);
    if (p2 < best_p2) {
      best_p2 = p2;
      best = n;
    }
  }
  return best;
}

Trajectory1D concat_halves(Trajectory1D first, Trajectory1D second) {
  for (std::size_t i = 1; i < second.times.size(); ++i) {
    first.times.push_back(second.times[i]);
    first.states.push_back(std::move(second.states[i]));
  }
  return first;
}

Trajectory1D run_arm(const SpinorField1D& f0, const MomentumEnsemble& e,
                     bool driven, double strength, bool echo, double t_final,
                     double dt, std::size_t stride) {
  auto go = [&](const SpinorField1D& f, double t) {
    return driven ? evolve_driven(f, e, strength, t, dt, stride)
                  : evolve(f, e, strength, t, dt, stride);
  };
  if (!echo) return go(f0, t_final);
  Trajectory1D first = go(f0, 0.5 * t_final);
  SpinorField1D mid = first.states.back();
  mid.apply_pi_pulse(0.0);
  Trajectory1D second = go(mid, 0.5 * t_final);
  return concat_halves(std::move(first), std::move(second));
}

}  // namespace

ContrastSeries interferometer_sequence(const MomentumEnsemble& e,
                                       double chiN_arm, double omega_arm,
                                       bool echo, double t_final, double dt,
                                       std::size_t record_stride,
                                       bool arm_b_driven) {
  const SpinorField1D f0 = SpinorField1D::polar(e.size(), 0.5 * kPi);
  const Trajectory1D arm_a =
      run_arm(f0, e, true, omega_arm, echo, t_final, dt, record_stride);
  const Trajectory1D arm_b = run_arm(f0, e, arm_b_driven, chiN_arm, echo,
                                     t_final, dt, record_stride);

  const std::size_t n0 = zero_node(e);
  ContrastSeries cs;
  const std::size_t n_samples =
      std::min(arm_a.states.size(), arm_b.states.size());
  cs.times.resize(n_samples);
  cs.contrast.resize(n_samples);
  cs.population.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const SpinorField1D& a = arm_a.states[i];
    const SpinorField1D& b = arm_b.states[i];
    Complex overlap{0.0, 0.0};
    for (std::size_t n = 0; n < e.size(); ++n)
      overlap += e.weights[n] * (std::conj(a.down[n]) * b.down[n] +
                                 std::conj(a.up[n]) * b.up[n]);
    const Complex ref = std::conj(a.down[n0]) * b.down[n0] +
                        std::conj(a.up[n0]) * b.up[n0];
    const double ref_mag = std::abs(ref);
    const Complex referred =
        ref_mag > 0.0 ? overlap * std::conj(ref) / ref_mag : overlap;
    cs.times[i] = arm_a.times[i];
    cs.contrast[i] = std::abs(overlap);
    cs.population[i] = 0.5 * (1.0 + std::real(referred));
  }
  return cs;
}

// --- higher-dimensional observables ------------------------------------

namespace {

// Row-orthogonality marginal: sum over the collapsed axes of |1D synthesis
// along `axis`|^2. coeffs holds sqrt(w)*amplitude per ensemble point.
std::vector<double> marginal_from_coeffs(const std::vector<Complex>& coeffs,
                                         const MomentumEnsemble& e, int axis,
                                         const ZGrid& grid, int n_per_axis) {
  const std::size_t nz = grid.z.size();
  const int d = e.dimension;
  const std::size_t np = e.size();

  // Tensor strides, axis 0 slowest.
  std::size_t strides[3] = {1, 1, 1};
  {
    std::size_t s = 1;
    for (int a = d - 1; a >= 0; --a) {
      strides[a] = s;
      s *= static_cast<std::size_t>(n_per_axis);
    }
  }
  const std::size_t axis_stride = strides[axis];

  std::vector<Complex> phase(static_cast<std::size_t>(n_per_axis) * nz);
  for (int i = 0; i < n_per_axis; ++i) {
    const double node =
        e.p(static_cast<std::size_t>(i) * axis_stride, axis);
    for (std::size_t j = 0; j < nz; ++j)
      phase[i * nz + j] = std::exp(kI * (node * grid.z[j]));
  }

  std::vector<double> out(nz, 0.0);
  const std::size_t n_rows = np / static_cast<std::size_t>(n_per_axis);
  std::vector<Complex> row(nz);
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::size_t base = 0;
    std::size_t rem = r;
    for (int a = d - 1; a >= 0; --a) {
      if (a == axis) continue;
      base += (rem % n_per_axis) * strides[a];
      rem /= n_per_axis;
    }
    std::fill(row.begin(), row.end(), Complex{0.0, 0.0});
    for (int i = 0; i < n_per_axis; ++i) {
      const Complex c = coeffs[base + static_cast<std::size_t>(i) * axis_stride];
      const Complex* ph = &phase[static_cast<std::size_t>(i) * nz];
      for (std::size_t j = 0; j < nz; ++j) row[j] += c * ph[j];
    }
    for (std::size_t j = 0; j < nz; ++j) out[j] += std::norm(row[j]);
  }
  return out;
}

int per_axis_count(const MomentumEnsemble& e) {
  const std::size_t np = e.size();
  const int d = e.dimension;
  int n = static_cast<int>(std::llround(std::pow(
      static_cast<double>(np), 1.0 / static_cast<double>(d))));
  while (static_cast<std::size_t>(std::pow(n, d)) < np) ++n;
  return n;
}

}  // namespace

std::vector<double> marginal_density_hd(const SpinorFieldHD& f,
                                        const MomentumEnsemble& e, int axis,
                                        const ZGrid& grid, Branch b) {
  check_period(e, axis, grid);
  const int n_axis = per_axis_count(e);
  const std::size_t np = e.size();
  std::vector<double> out(grid.z.size(), 0.0);
  double population = 0.0;

  if (b == Branch::Down) {
    std::vector<Complex> coeffs(np);
    for (std::size_t n = 0; n < np; ++n) {
      coeffs[n] = std::sqrt(e.weights[n]) * f.at(0, n);
      population += e.weights[n] * std::norm(f.at(0, n));
    }
    out = marginal_from_coeffs(coeffs, e, axis, grid, n_axis);
  } else {
    // Sum of the bare up branches, cross terms dropped (branch-resolved
    // convention); only defined for d = 2 where four bare states exist.
    if (f.dimension != 2)
      throw NumericError("marginal_density_hd: up-branch marginal is "
                         "implemented for dimension 2");
    for (int mu = 0; mu < 4; ++mu) {
      std::vector<Complex> coeffs(np);
      for (std::size_t n = 0; n < np; ++n) {
        const std::array<Complex, 4> dressed{f.at(1, n), f.at(2, n),
                                             f.at(3, n), f.at(4, n)};
        const std::array<Complex, 4> bare = bare_basis_transform(dressed);
        coeffs[n] = std::sqrt(e.weights[n]) * bare[mu];
        if (mu == 0) {
          for (const Complex& c : bare) population += e.weights[n] * std::norm(c);
        }
      }
      const std::vector<double> part =
          marginal_from_coeffs(coeffs, e, axis, grid, n_axis);
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += part[j];
    }
  }

  check_window(out, grid.dz, grid.z.front(), grid.z.back());
  normalize_to(out, grid.dz, population);
  return out;
}

WidthSeriesHD width_series_hd(const TrajectoryHD& traj,
                              const MomentumEnsemble& e, const ZGrid& grid) {
  const int d = traj.states.front().dimension;
  WidthSeriesHD ws;
  ws.times = traj.times;
  ws.fits.assign(d, std::vector<FitResult>(traj.states.size()));
  ws.ratios.assign(d, std::vector<double>(traj.states.size()));
  ws.sigma0.assign(d, 0.0);

  parallel_for(traj.states.size(), [&](std::size_t i) {
    for (int a = 0; a < d; ++a) {
      const std::vector<double> rho =
          marginal_density_hd(traj.states[i], e, a, grid, Branch::Down);
      ws.fits[a][i] = fit_gaussian(grid.z, rho);
    }
  });
  for (int a = 0; a < d; ++a) {
    ws.sigma0[a] = ws.fits[a].front().sigma;
    for (std::size_t i = 0; i < traj.states.size(); ++i)
      ws.ratios[a][i] = ws.fits[a][i].sigma / ws.sigma0[a];
  }
  return ws;
}

DensityGrid2D density_grid_2d(const SpinorFieldHD& f,
                              const MomentumEnsemble& e, const ZGrid& gx,
                              const ZGrid& gz) {
  if (f.dimension != 2)
    throw NumericError("density_grid_2d: needs a 2D field");
  check_period(e, 0, gx);
  check_period(e, 1, gz);
  const int n = per_axis_count(e);
  const std::size_t nx = gx.z.size();
  const std::size_t nz = gz.z.size();

  // Two-stage separable synthesis: half[jx][iz], then the z transform.
  std::vector<Complex> half(nx * static_cast<std::size_t>(n));
  for (std::size_t jx = 0; jx < nx; ++jx) {
    for (int iz = 0; iz < n; ++iz) {
      Complex acc{0.0, 0.0};
      for (int ix = 0; ix < n; ++ix) {
        const std::size_t idx =
            static_cast<std::size_t>(ix) * n + static_cast<std::size_t>(iz);
        acc += std::sqrt(e.weights[idx]) * f.at(0, idx) *
               std::exp(kI * (e.p(idx, 0) * gx.z[jx]));
      }
      half[jx * n + iz] = acc;
    }
  }

  DensityGrid2D out;
  out.x = gx.z;
  out.z = gz.z;
  out.time = f.time;
  out.rho.assign(nx * nz, 0.0);
  double population = 0.0;
  for (std::size_t idx = 0; idx < e.size(); ++idx)
    population += e.weights[idx] * std::norm(f.at(0, idx));

  std::vector<double> z_nodes(n);
  for (int iz = 0; iz < n; ++iz) z_nodes[iz] = e.p(iz, 1);
  for (std::size_t jx = 0; jx < nx; ++jx) {
    for (std::size_t jz = 0; jz < nz; ++jz) {
      Complex acc{0.0, 0.0};
      for (int iz = 0; iz < n; ++iz)
        acc += half[jx * n + iz] * std::exp(kI * (z_nodes[iz] * gz.z[jz]));
      out.rho[jx * nz + jz] = std::norm(acc);
    }
  }
  double integral = 0.0;
  for (double r : out.rho) integral += r;
  integral *= gx.dz * gz.dz;
  if (integral > 0.0)
    for (double& r : out.rho) r *= population / integral;
  return out;
}

std::vector<double> marginal_density_two_level(const SpinorField1D& f,
                                               const MomentumEnsemble& e,
                                               int axis, const ZGrid& grid,
                                               Branch b) {
  check_period(e, axis, grid);
  const int n_axis = per_axis_count(e);
  const std::size_t np = e.size();
  const std::vector<Complex>& amps = b == Branch::Down ? f.down : f.up;
  std::vector<Complex> coeffs(np);
  double population = 0.0;
  for (std::size_t n = 0; n < np; ++n) {
    coeffs[n] = std::sqrt(e.weights[n]) * amps[n];
    population += e.weights[n] * std::norm(amps[n]);
  }
  std::vector<double> out =
      marginal_from_coeffs(coeffs, e, axis, grid, n_axis);
  check_window(out, grid.dz, grid.z.front(), grid.z.back());
  normalize_to(out, grid.dz, population);
  return out;
}

}  // namespace solsim
