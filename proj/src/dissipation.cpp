#include "solsim/dissipation.hpp"

#include <cmath>

#include "solsim/errors.hpp"

namespace solsim {

void CavityParams::validate() const {
  if (kappa <= 0.0) throw ConfigError("cavity.kappa: must be > 0");
  if (alpha_sq_1 < 0.0 || alpha_sq_2 < 0.0)
    throw ConfigError("cavity.alpha_sq: photon numbers must be >= 0");
  if (delta0 == 0.0) throw ConfigError("cavity.delta0: must be nonzero");
}

std::pair<double, double> gamma_rates(const CavityParams& c) {
  c.validate();
  const double pref = std::pow(c.g * c.g / (4.0 * c.delta0), 2);
  const double half_kappa_sq = 0.25 * c.kappa * c.kappa;
  const double g1 =
      pref * c.alpha_sq_1 * c.kappa / (c.delta1 * c.delta1 + half_kappa_sq);
  const double g2 =
      pref * c.alpha_sq_2 * c.kappa / (c.delta2 * c.delta2 + half_kappa_sq);
  return {g1, g2};
}

CollectiveBloch CollectiveBloch::polar(double n_atoms, double theta,
                                       double phi) {
  CollectiveBloch s;
  s.n_atoms = n_atoms;
  const double r = 0.5 * n_atoms;
  s.sx = r * std::sin(theta) * std::cos(phi);
  s.sy = r * std::sin(theta) * std::sin(phi);
  s.sz = r * std::cos(theta);
  return s;
}

CollectiveBloch bloch_derivative(const CollectiveBloch& s, double chiN,
                                 double gamma1, double gamma2) {
  if (gamma1 < 0.0 || gamma2 < 0.0)
    throw ConfigError("dissipation: decay rates must be >= 0");

  const double chi = chiN / s.n_atoms;
  const double precession = -2.0 * chi * s.sz;  // about Z

  CollectiveBloch d;
  d.n_atoms = s.n_atoms;
  d.sx = -precession * s.sy;
  d.sy = precession * s.sx;
  d.sz = 0.0;

  const double gsum = gamma1 + gamma2;
  const double gdiff = gamma2 - gamma1;
  d.sx += gdiff * s.sz * s.sx - 0.5 * gsum * s.sx;
  d.sy += gdiff * s.sz * s.sy - 0.5 * gsum * s.sy;
  d.sz += -gdiff * (s.sx * s.sx + s.sy * s.sy) - gsum * s.sz;
  return d;
}

BlochTrajectory evolve_bloch(const CollectiveBloch& s0, double chiN,
                             double gamma1, double gamma2, double t_final,
                             double dt, std::size_t record_stride) {
  const std::size_t n_steps =
      static_cast<std::size_t>(std::llround(t_final / dt));
  const std::size_t stride = record_stride == 0 ? n_steps : record_stride;

  BlochTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(s0);

  CollectiveBloch y = s0;
  auto axpy = [](CollectiveBloch a, double h, const CollectiveBloch& b) {
    a.sx += h * b.sx;
    a.sy += h * b.sy;
    a.sz += h * b.sz;
    return a;
  };

  for (std::size_t s = 1; s <= n_steps; ++s) {
    const CollectiveBloch k1 = bloch_derivative(y, chiN, gamma1, gamma2);
    const CollectiveBloch k2 =
        bloch_derivative(axpy(y, 0.5 * dt, k1), chiN, gamma1, gamma2);
    const CollectiveBloch k3 =
        bloch_derivative(axpy(y, 0.5 * dt, k2), chiN, gamma1, gamma2);
    const CollectiveBloch k4 =
        bloch_derivative(axpy(y, dt, k3), chiN, gamma1, gamma2);
    y.sx += dt / 6.0 * (k1.sx + 2.0 * (k2.sx + k3.sx) + k4.sx);
    y.sy += dt / 6.0 * (k1.sy + 2.0 * (k2.sy + k3.sy) + k4.sy);
    y.sz += dt / 6.0 * (k1.sz + 2.0 * (k2.sz + k3.sz) + k4.sz);
    if (!std::isfinite(y.sx + y.sy + y.sz))
      throw NumericError("evolve_bloch: non-finite state at step " +
                         std::to_string(s));
    if (s % stride == 0 || s == n_steps) {
      traj.times.push_back(static_cast<double>(s) * dt);
      traj.states.push_back(y);
    }
  }
  return traj;
}

double fit_decay_rate(const std::vector<double>& times,
                      const std::vector<double>& values) {
  // Linear regression of log|q| on t over strictly positive samples.
  double st = 0, sl = 0, stt = 0, stl = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (values[i] <= 0.0) continue;
    const double l = std::log(values[i]);
    st += times[i];
    sl += l;
    stt += times[i] * times[i];
    stl += times[i] * l;
    ++n;
  }
  if (n < 2) throw NumericError("fit_decay_rate: not enough positive samples");
  const double denom = n * stt - st * st;
  return -(n * stl - st * sl) / denom;
}

}  // namespace solsim
