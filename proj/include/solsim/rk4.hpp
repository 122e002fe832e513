#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "solsim/errors.hpp"

namespace solsim {

using Complex = std::complex<double>;

// dy/dt = f(t, y). The callee writes into dy (preallocated, same size as y).
using DerivFn =
    std::function<void(double t, const std::vector<Complex>& y,
                       std::vector<Complex>& dy)>;

// Classical fixed-step fourth-order Runge-Kutta on a flat complex state.
// Deterministic and allocation-free after construction; no adaptivity.
class Rk4Integrator {
 public:
  explicit Rk4Integrator(std::size_t n)
      : k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  void step(std::vector<Complex>& y, double t, double dt, const DerivFn& f) {
    const std::size_t n = y.size();
    f(t, y, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k1_[i];
    f(t + 0.5 * dt, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * dt * k2_[i];
    f(t + 0.5 * dt, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + dt * k3_[i];
    f(t + dt, tmp_, k4_);
    const double h6 = dt / 6.0;
    for (std::size_t i = 0; i < n; ++i)
      y[i] += h6 * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
  }

 private:
  std::vector<Complex> k1_, k2_, k3_, k4_, tmp_;
};

inline void abort_if_nan(const std::vector<Complex>& y, double t,
                         const std::string& where) {
  double s = 0.0;
  for (const Complex& c : y) s += std::norm(c);
  if (!std::isfinite(s))
    throw NumericError(where + ": non-finite state at t = " +
                       std::to_string(t) + " (natural units)");
}

}  // namespace solsim
