#include "solsim/dynamics_hd.hpp"

#include <cmath>

#include "solsim/errors.hpp"

namespace solsim {

namespace {
constexpr Complex kI{0.0, 1.0};
}

CouplingMatrixHD build_coupling_matrix(std::array<double, 3> p, double chiN,
                                       int dimension) {
  if (dimension != 2 && dimension != 3)
    throw NumericError("build_coupling_matrix: dimension must be 2 or 3");
  CouplingMatrixHD cm;
  cm.dimension = dimension;
  cm.chiN = chiN;
  const int n = cm.size();
  cm.m.assign(static_cast<std::size_t>(n) * n, 0.0);
  auto set = [&](int r, int c, double v) {
    cm.m[r * n + c] = v;
    cm.m[c * n + r] = v;
  };
  set(0, 1, 0.5 * chiN);
  for (int a = 0; a < dimension; ++a)
    set(1, 2 + a, kWavenumber * p[a] / kMass);
  // Row/column of the last (fully antisymmetric / remainder) state stays 0.
  return cm;
}

double hd_ground_eigenvalue(std::array<double, 3> p, double chiN,
                            int dimension) {
  double s = 0.25 * chiN * chiN;
  for (int a = 0; a < dimension; ++a) {
    const double c = kWavenumber * p[a] / kMass;
    s += c * c;
  }
  return -std::sqrt(s);
}

namespace {
// Rows: sym, A_1 (mu_x), A_2 (mu_z), A_3 (mu_x mu_z); columns ++, +-, -+, --.
constexpr double kDress[4][4] = {
    {0.5, 0.5, 0.5, 0.5},
    {0.5, 0.5, -0.5, -0.5},
    {0.5, -0.5, 0.5, -0.5},
    {0.5, -0.5, -0.5, 0.5},
};
}  // namespace

std::array<Complex, 4> dressed_basis_transform(
    const std::array<Complex, 4>& bare) {
  std::array<Complex, 4> out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r] += kDress[r][c] * bare[c];
  return out;
}

std::array<Complex, 4> bare_basis_transform(
    const std::array<Complex, 4>& dressed) {
  // The transform is symmetric and orthogonal: it inverts itself.
  return dressed_basis_transform(dressed);
}

SpinorFieldHD SpinorFieldHD::equal_superposition(int dim, std::size_t n) {
  SpinorFieldHD f(dim, n);
  const Complex amp = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < n; ++i) {
    f.at(0, i) = amp;
    f.at(1, i) = amp;
  }
  return f;
}

namespace {

// State layout matches SpinorFieldHD: component-major planes.
struct HdSystem {
  const MomentumEnsemble* ens;
  double chiN = 0.0;
  int ncomp = 5;
  std::vector<double> kinetic;                 // p^2 / 2 per point
  std::vector<std::array<double, 3>> coupling; // k p_i / M per point

  void operator()(double, const std::vector<Complex>& y,
                  std::vector<Complex>& dy) const {
    const std::size_t np = ens->size();
    const int d = ncomp - 3;
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < np; ++i)
      acc += ens->weights[i] * std::conj(y[np + i]) * y[i];
    const Complex field = chiN * acc;
    const Complex fconj = std::conj(field);
    for (std::size_t i = 0; i < np; ++i) {
      const double k0 = kinetic[i];
      Complex hsym = k0 * y[np + i] + fconj * y[i];
      for (int a = 0; a < d; ++a)
        hsym += coupling[i][a] * y[(2 + a) * np + i];
      dy[i] = -kI * (k0 * y[i] + field * y[np + i]);
      dy[np + i] = -kI * hsym;
      for (int a = 0; a < d; ++a)
        dy[(2 + a) * np + i] =
            -kI * (k0 * y[(2 + a) * np + i] + coupling[i][a] * y[np + i]);
      const std::size_t rest = (ncomp - 1) * np + i;
      dy[rest] = -kI * (k0 * y[rest]);
    }
  }
};

}  // namespace

TrajectoryHD evolve_hd(const SpinorFieldHD& f0, const MomentumEnsemble& e,
                       double chiN, double t_final, double dt,
                       std::size_t record_stride) {
  if (f0.npoints != e.size())
    throw NumericError("evolve_hd: field and ensemble have mismatched "
                       "lengths");
  if (f0.dimension != e.dimension)
    throw NumericError("evolve_hd: field and ensemble dimension disagree");

  HdSystem sys;
  sys.ens = &e;
  sys.chiN = chiN;
  sys.ncomp = f0.ncomp();
  sys.kinetic.resize(e.size());
  sys.coupling.resize(e.size());
  double fmax = std::fabs(chiN) / 2.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    sys.kinetic[i] = e.p_squared(i) / (2.0 * kMass * kHbar);
    double cmax = 0.0;
    for (int a = 0; a < e.dimension; ++a) {
      sys.coupling[i][a] = kWavenumber * e.p(i, a) / kMass;
      cmax += std::fabs(sys.coupling[i][a]);
    }
    fmax = std::max(fmax, sys.kinetic[i] + cmax + std::fabs(chiN) / 2.0);
  }
  if (dt * fmax > 0.05)
    throw NumericError("evolve_hd: step-size guard violated, dt * f_max = " +
                       std::to_string(dt * fmax) + " > 0.05");

  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(t_final / dt));
  const std::size_t stride = record_stride == 0 ? n_steps : record_stride;

  std::vector<Complex> y = f0.amps;
  Rk4Integrator rk(y.size());

  TrajectoryHD traj;
  traj.times.push_back(f0.time);
  traj.states.push_back(f0);

  double t = f0.time;
  for (std::size_t s = 1; s <= n_steps; ++s) {
    rk.step(y, t, dt, std::cref(sys));
    t = f0.time + static_cast<double>(s) * dt;
    if (s % stride == 0 || s == n_steps) {
      abort_if_nan(y, t, "evolve_hd");
      SpinorFieldHD f(f0.dimension, f0.npoints);
      f.amps = y;
      f.time = t;
      traj.times.push_back(t);
      traj.states.push_back(std::move(f));
    }
  }
  return traj;
}

double weighted_magnetization_hd(const SpinorFieldHD& f,
                                 const MomentumEnsemble& e) {
  double acc = 0.0;
  for (std::size_t n = 0; n < f.npoints; ++n) {
    double up = 0.0;
    for (int c = 1; c < f.ncomp(); ++c) up += std::norm(f.at(c, n));
    acc += e.weights[n] * 0.5 * (up - std::norm(f.at(0, n)));
  }
  return acc;
}

double mean_field_energy_hd(const SpinorFieldHD& f, const MomentumEnsemble& e,
                            double chiN) {
  const int d = f.dimension;
  double acc = 0.0;
  Complex bilinear{0.0, 0.0};
  for (std::size_t n = 0; n < f.npoints; ++n) {
    const double k0 = e.p_squared(n) / (2.0 * kMass * kHbar);
    acc += e.weights[n] * k0 * f.per_point_norm(n);
    for (int a = 0; a < d; ++a) {
      const double c = kWavenumber * e.p(n, a) / kMass;
      acc += e.weights[n] * 2.0 * c *
             std::real(std::conj(f.at(1, n)) * f.at(2 + a, n));
    }
    bilinear += e.weights[n] * std::conj(f.at(1, n)) * f.at(0, n);
  }
  return acc + chiN * std::norm(bilinear);
}

double naive_2d_dispersion(double px, double pz, double chiN, double kx,
                           double kz) {
  const double doppler = (kx * px + kz * pz) / kMass;
  return -0.5 * std::sqrt(chiN * chiN + doppler * doppler) +
         (px * px + pz * pz) / (2.0 * kMass * kHbar);
}

NaiveQuadraticForm naive_2d_quadratic_coeffs(double chiN, double kx,
                                             double kz) {
  NaiveQuadraticForm q;
  const double bare = 1.0 / (2.0 * kMass * kHbar);
  q.cxx = bare + kx * kx / (4.0 * kMass * kMass * chiN);
  q.czz = bare + kz * kz / (4.0 * kMass * kMass * chiN);
  q.cxz = kx * kz / (2.0 * kMass * kMass * chiN);
  return q;
}

Trajectory1D evolve_naive_control(const SpinorField1D& f0,
                                  const MomentumEnsemble& e, double chiN,
                                  double k_norm, double t_final, double dt,
                                  std::size_t record_stride) {
  // Axis 0 carries the full photon recoil |k_vec|; the spin-dependent term
  // is half the branch energy difference (single-recoil Doppler).
  SingleParticleTerms sp;
  sp.omega_down.resize(e.size());
  sp.omega_up.resize(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double kinetic = e.p_squared(i) / (2.0 * kMass * kHbar);
    const double doppler = 0.5 * k_norm * e.p(i, 0) / kMass;
    sp.omega_down[i] = kinetic - doppler;
    sp.omega_up[i] = kinetic + doppler;
  }
  EvolveOptions opt;
  opt.dt = dt;
  opt.n_steps = static_cast<std::size_t>(std::llround(t_final / dt));
  opt.record_stride = record_stride == 0 ? opt.n_steps : record_stride;
  return evolve_two_level(f0, e.weights, sp,
                          {TwoLevelCoupling::Kind::Exchange, chiN}, opt);
}

}  // namespace solsim
