#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "solsim/params.hpp"

namespace solsim {

// Deterministic grid or Monte Carlo sample of the selected Wigner marginal:
// momenta p_n with Gaussian weights, sum(w_n) == 1.
struct MomentumEnsemble {
  int dimension = 1;
  EnsembleMode mode = EnsembleMode::Grid;
  std::vector<std::array<double, 3>> points;  // unused axes stay zero
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double p(std::size_t n, int axis = 0) const { return points[n][axis]; }

  // |p|^2 of point n over the active axes.
  double p_squared(std::size_t n) const {
    const auto& q = points[n];
    return q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
  }
};

// Grid mode: per-axis nodes uniform on [-p_span*sigma_p, +p_span*sigma_p]
// with p = 0 an exact node, weights ~ exp(-|p|^2 / 2 sigma_p^2), normalized.
// Monte Carlo mode: i.i.d. Gaussian per axis (Box-Muller on mt19937_64 so
// streams are reproducible across platforms), weights 1/N.
MomentumEnsemble build_ensemble(const SimulationParams& params);

}  // namespace solsim
