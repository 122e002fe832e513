#include "solsim/dynamics1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "solsim/errors.hpp"

namespace solsim {

namespace {
constexpr Complex kI{0.0, 1.0};
}

SpinorField1D SpinorField1D::polar(std::size_t n, double theta, double phi) {
  SpinorField1D f(n);
  const Complex d = std::sin(0.5 * theta) * std::exp(kI * phi);
  const Complex u = std::cos(0.5 * theta);
  for (std::size_t i = 0; i < n; ++i) {
    f.down[i] = d;
    f.up[i] = u;
  }
  return f;
}

void SpinorField1D::apply_pi_pulse(double phi) {
  // exp(-i (pi/2) n.sigma) with n = (cos phi, sin phi, 0):
  // (down, up) -> -i (e^{-i phi} up, e^{+i phi} down).
  const Complex a = -kI * std::exp(-kI * phi);
  const Complex b = -kI * std::exp(kI * phi);
  for (std::size_t i = 0; i < size(); ++i) {
    const Complex d = down[i];
    down[i] = a * up[i];
    up[i] = b * d;
  }
}

Complex exchange_field(const SpinorField1D& f, const MomentumEnsemble& e) {
  Complex acc{0.0, 0.0};
  for (std::size_t n = 0; n < f.size(); ++n)
    acc += e.weights[n] * std::conj(f.up[n]) * f.down[n];
  return acc;
}

SingleParticleTerms single_particle_terms(const MomentumEnsemble& e,
                                          double chiN, double theta_frame) {
  const std::size_t n = e.size();
  SingleParticleTerms sp;
  sp.omega_down.resize(n);
  sp.omega_up.resize(n);
  const double frame_shift = 0.5 * chiN * std::cos(theta_frame);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = e.p(i, 0);
    const double kinetic = p * p / (2.0 * kMass * kHbar);
    const double doppler = kWavenumber * p / kMass;
    sp.omega_down[i] = kinetic - doppler - frame_shift;
    sp.omega_up[i] = kinetic + doppler + frame_shift;
  }
  return sp;
}

namespace {

// dy/dt with y = [down..., up...]; the two collective sums are reduced
// before the per-point map, so the map may run data-parallel.
struct TwoLevelSystem {
  const std::vector<double>* weights;  // null for drive coupling
  const SingleParticleTerms* sp;
  TwoLevelCoupling coupling;

  void operator()(double, const std::vector<Complex>& y,
                  std::vector<Complex>& dy) const {
    const std::size_t n = sp->omega_down.size();
    Complex field;
    if (coupling.kind == TwoLevelCoupling::Kind::Exchange) {
      Complex acc{0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i)
        acc += (*weights)[i] * std::conj(y[n + i]) * y[i];
      field = coupling.strength * acc;
    } else {
      field = 0.5 * coupling.strength;
    }
    const Complex fconj = std::conj(field);
    for (std::size_t i = 0; i < n; ++i) {
      dy[i] = -kI * (sp->omega_down[i] * y[i] + field * y[n + i]);
      dy[n + i] = -kI * (sp->omega_up[i] * y[n + i] + fconj * y[i]);
    }
  }
};

std::vector<Complex> flatten(const SpinorField1D& f) {
  std::vector<Complex> y(2 * f.size());
  std::copy(f.down.begin(), f.down.end(), y.begin());
  std::copy(f.up.begin(), f.up.end(), y.begin() + f.size());
  return y;
}

SpinorField1D unflatten(const std::vector<Complex>& y, double t) {
  const std::size_t n = y.size() / 2;
  SpinorField1D f(n);
  std::copy(y.begin(), y.begin() + n, f.down.begin());
  std::copy(y.begin() + n, y.end(), f.up.begin());
  f.time = t;
  return f;
}

}  // namespace

Trajectory1D evolve_two_level(const SpinorField1D& f0,
                              const std::vector<double>& weights,
                              const SingleParticleTerms& sp,
                              TwoLevelCoupling coupling,
                              const EvolveOptions& opt) {
  if (f0.size() != sp.omega_down.size())
    throw NumericError("evolve: field and single-particle terms disagree on "
                       "point count");
  if (coupling.kind == TwoLevelCoupling::Kind::Exchange &&
      f0.size() != weights.size())
    throw NumericError("evolve: field and ensemble have mismatched lengths");

  double fmax = std::fabs(coupling.strength) / 2.0;
  for (std::size_t i = 0; i < sp.omega_down.size(); ++i)
    fmax = std::max(fmax, std::max(std::fabs(sp.omega_down[i]),
                                   std::fabs(sp.omega_up[i])) +
                              std::fabs(coupling.strength) / 2.0);
  if (opt.dt * fmax > 0.05)
    throw NumericError("evolve: step-size guard violated, dt * f_max = " +
                       std::to_string(opt.dt * fmax) + " > 0.05");

  TwoLevelSystem sys{&weights, &sp, coupling};
  std::vector<Complex> y = flatten(f0);
  Rk4Integrator rk(y.size());

  const std::size_t stride =
      opt.record_stride == 0 ? opt.n_steps : opt.record_stride;

  Trajectory1D traj;
  traj.times.push_back(f0.time);
  traj.states.push_back(f0);

  double t = f0.time;
  for (std::size_t s = 1; s <= opt.n_steps; ++s) {
    rk.step(y, t, opt.dt, std::cref(sys));
    t = f0.time + static_cast<double>(s) * opt.dt;
    if (s % stride == 0 || s == opt.n_steps) {
      abort_if_nan(y, t, "evolve");
      traj.times.push_back(t);
      traj.states.push_back(unflatten(y, t));
    }
  }
  return traj;
}

namespace {

EvolveOptions make_options(double t_final, double dt,
                           std::size_t record_stride) {
  EvolveOptions opt;
  opt.dt = dt;
  opt.n_steps = static_cast<std::size_t>(std::llround(t_final / dt));
  opt.record_stride = record_stride == 0 ? opt.n_steps : record_stride;
  return opt;
}

}  // namespace

Trajectory1D evolve(const SpinorField1D& f0, const MomentumEnsemble& e,
                    double chiN, double t_final, double dt,
                    std::size_t record_stride, double theta_frame) {
  const SingleParticleTerms sp = single_particle_terms(e, chiN, theta_frame);
  return evolve_two_level(
      f0, e.weights, sp,
      {TwoLevelCoupling::Kind::Exchange, chiN},
      make_options(t_final, dt, record_stride));
}

Trajectory1D evolve_driven(const SpinorField1D& f0, const MomentumEnsemble& e,
                           double omega, double t_final, double dt,
                           std::size_t record_stride) {
  const SingleParticleTerms sp = single_particle_terms(e, 0.0, 0.5 * kPi);
  return evolve_two_level(f0, e.weights, sp,
                          {TwoLevelCoupling::Kind::Drive, omega},
                          make_options(t_final, dt, record_stride));
}

SpinorField1D derivative(const SpinorField1D& f, const MomentumEnsemble& e,
                         double chiN, double theta_frame) {
  if (f.size() != e.size())
    throw NumericError("derivative: field and ensemble have mismatched "
                       "lengths");
  const SingleParticleTerms sp = single_particle_terms(e, chiN, theta_frame);
  const Complex field = chiN * exchange_field(f, e);
  SpinorField1D out(f.size());
  out.time = f.time;
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.down[i] = -kI * (sp.omega_down[i] * f.down[i] + field * f.up[i]);
    out.up[i] =
        -kI * (sp.omega_up[i] * f.up[i] + std::conj(field) * f.down[i]);
  }
  return out;
}

SpinorField1D drive_flatband_derivative(const SpinorField1D& f,
                                        const MomentumEnsemble& e,
                                        double omega) {
  if (f.size() != e.size())
    throw NumericError("drive_flatband_derivative: mismatched lengths");
  const SingleParticleTerms sp = single_particle_terms(e, 0.0, 0.5 * kPi);
  const Complex field = 0.5 * omega;
  SpinorField1D out(f.size());
  out.time = f.time;
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.down[i] = -kI * (sp.omega_down[i] * f.down[i] + field * f.up[i]);
    out.up[i] = -kI * (sp.omega_up[i] * f.up[i] + field * f.down[i]);
  }
  return out;
}

std::pair<Complex, Complex> closed_form_solution(double p, double chiN,
                                                 double t_d) {
  const double doppler = 2.0 * kWavenumber * p / kMass;
  const double rabi = std::sqrt(doppler * doppler + chiN * chiN);
  const double phase = 0.5 * rabi * t_d;
  const double c = std::cos(phase);
  // sin(x)/x is finite at rabi -> 0 (free evolution at p = 0, chiN = 0).
  const double sinc =
      rabi == 0.0 ? 0.5 * t_d : std::sin(phase) / rabi;
  const Complex kinetic =
      std::exp(-kI * (p * p / (2.0 * kMass * kHbar)) * t_d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex down =
      kinetic * (c + kI * (doppler - chiN) * sinc) * inv_sqrt2;
  const Complex up = kinetic * (c - kI * (doppler + chiN) * sinc) * inv_sqrt2;
  return {down, up};
}

double band_energy(double p, double chiN, double theta) {
  const double transverse = chiN * std::sin(theta);
  const double axial = 2.0 * kWavenumber * p / kMass + chiN * std::cos(theta);
  return -0.5 * std::sqrt(transverse * transverse + axial * axial) +
         p * p / (2.0 * kMass * kHbar);
}

double effective_mass(double chiN, double theta) {
  if (chiN == 0.0) return kMass;  // free particle; the locked formula is
                                  // singular at zero coupling
  const double s = std::sin(theta);
  const double denom = 1.0 + 4.0 * kRecoilEnergy * s * s / chiN;
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return kMass / denom;
}

DispersionCurve dispersion(const std::vector<double>& p_values, double chiN,
                           double theta) {
  DispersionCurve curve;
  curve.p_values = p_values;
  curve.energies.resize(p_values.size());
  for (std::size_t i = 0; i < p_values.size(); ++i)
    curve.energies[i] = band_energy(p_values[i], chiN, theta);

  // Least-squares quartic; the quadratic coefficient is the curvature at
  // the band minimum (a pure-quadratic window fit would alias the quartic
  // term into it).
  const std::size_t m = p_values.size();
  if (m >= 5) {
    double ata[5][5] = {};
    double atb[5] = {};
    for (std::size_t i = 0; i < m; ++i) {
      double pw[5];
      pw[0] = 1.0;
      for (int k = 1; k < 5; ++k) pw[k] = pw[k - 1] * p_values[i];
      for (int r = 0; r < 5; ++r) {
        atb[r] += pw[r] * curve.energies[i];
        for (int c = 0; c < 5; ++c) ata[r][c] += pw[r] * pw[c];
      }
    }
    // Gaussian elimination with partial pivoting on the 5x5 system.
    double a[5][6];
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 5; ++c) a[r][c] = ata[r][c];
      a[r][5] = atb[r];
    }
    for (int col = 0; col < 5; ++col) {
      int piv = col;
      for (int r = col + 1; r < 5; ++r)
        if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
      for (int c = 0; c < 6; ++c) std::swap(a[col][c], a[piv][c]);
      for (int r = 0; r < 5; ++r) {
        if (r == col) continue;
        const double s = a[r][col] / a[col][col];
        for (int c = col; c < 6; ++c) a[r][c] -= s * a[col][c];
      }
    }
    curve.c0 = a[0][5] / a[0][0];
    curve.c1 = a[1][5] / a[1][1];
    curve.c2 = a[2][5] / a[2][2];
    curve.c3 = a[3][5] / a[3][3];
    curve.c4 = a[4][5] / a[4][4];
  }

  curve.effective_mass = effective_mass(chiN, theta);
  curve.fit_effective_mass =
      curve.c2 == 0.0 ? std::numeric_limits<double>::infinity()
                      : 1.0 / (2.0 * curve.c2);
  const double mstar = std::fabs(curve.effective_mass);
  curve.c_s = std::isinf(mstar) ? 0.0 : std::sqrt(std::fabs(chiN) /
                                                  (2.0 * mstar));
  return curve;
}

double weighted_magnetization(const SpinorField1D& f,
                              const MomentumEnsemble& e) {
  double acc = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n)
    acc += e.weights[n] * 0.5 * (std::norm(f.up[n]) - std::norm(f.down[n]));
  return acc;
}

double mean_field_energy(const SpinorField1D& f, const MomentumEnsemble& e,
                         double chiN, double theta_frame) {
  const SingleParticleTerms sp = single_particle_terms(e, chiN, theta_frame);
  double acc = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n)
    acc += e.weights[n] * (sp.omega_down[n] * std::norm(f.down[n]) +
                           sp.omega_up[n] * std::norm(f.up[n]));
  return acc + chiN * std::norm(exchange_field(f, e));
}

}  // namespace solsim
