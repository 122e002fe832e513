#include "solsim/ensemble.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "solsim/errors.hpp"

namespace solsim {

void SimulationParams::validate() const {
  if (sigma_p <= 0.0)
    throw ConfigError("simulation.sigma_p: must be > 0 (got " +
                      std::to_string(sigma_p) + ")");
  if (ensemble_mode == EnsembleMode::Grid) {
    if (n_momentum < 3 || n_momentum % 2 == 0)
      throw ConfigError(
          "simulation.n_momentum: grid mode requires an odd count >= 3 so "
          "p = 0 is a grid node (got " +
          std::to_string(n_momentum) + ")");
  } else if (n_momentum < 1) {
    throw ConfigError("simulation.n_momentum: must be >= 1 (got " +
                      std::to_string(n_momentum) + ")");
  }
  if (p_span <= 0.0)
    throw ConfigError("simulation.p_span: must be > 0");
  if (dt <= 0.0) throw ConfigError("simulation.dt: must be > 0");
  if (t_final < 0.0) throw ConfigError("simulation.t_final: must be >= 0");
  if (dimension < 1 || dimension > 3)
    throw ConfigError("simulation.dimension: must be 1, 2 or 3 (got " +
                      std::to_string(dimension) + ")");
  if (theta < 0.0 || theta > kPi)
    throw ConfigError("simulation.theta: must lie in [0, pi]");
}

std::vector<std::string> SimulationParams::warnings() const {
  std::vector<std::string> out;
  if (locked_analytics && locked_ratio() < 10.0) {
    std::ostringstream os;
    os << "locked-regime analytics requested but |chiN| = " << std::fabs(chiN)
       << " < 10 * 2 k sigma_p / M = " << 10.0 * 2.0 * sigma_p
       << "; locked-regime formulas are unreliable here";
    out.push_back(os.str());
  }
  return out;
}

double max_single_particle_frequency(const SimulationParams& p) {
  // Grid corner dominates: d axes each up to p_span*sigma_p.
  const double pmax_axis = p.grid_half_width();
  const double p2 = p.dimension * pmax_axis * pmax_axis;
  const double doppler = 2.0 * kWavenumber * std::sqrt(p2) / kMass / 2.0;
  const double frame = std::fabs(p.chiN * std::cos(p.theta)) / 2.0;
  const double field = std::fabs(p.chiN) / 2.0;
  return p2 / (2.0 * kMass * kHbar) + doppler + frame + field;
}

namespace {

// Per-axis symmetric node list: -h, ..., -step, 0, +step, ..., +h. Nodes are
// mirrored exactly so weights obey w(p) == w(-p) bitwise.
std::vector<double> axis_nodes(int n, double half_width) {
  const int half = (n - 1) / 2;
  const double step = half_width / half;
  std::vector<double> nodes(n);
  nodes[half] = 0.0;
  for (int j = 1; j <= half; ++j) {
    nodes[half + j] = j * step;
    nodes[half - j] = -(j * step);
  }
  return nodes;
}

double box_muller(std::mt19937_64& rng) {
  // (0,1] uniforms; explicit transform keeps streams platform-independent.
  const double u1 =
      (static_cast<double>(rng() >> 11) + 1.0) / 9007199254740993.0;
  const double u2 = static_cast<double>(rng() >> 11) / 9007199254740992.0;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

MomentumEnsemble build_ensemble(const SimulationParams& params) {
  params.validate();

  MomentumEnsemble ens;
  ens.dimension = params.dimension;
  ens.mode = params.ensemble_mode;

  const int d = params.dimension;

  if (params.ensemble_mode == EnsembleMode::MonteCarlo) {
    std::mt19937_64 rng(params.seed);
    const std::size_t n = static_cast<std::size_t>(params.n_momentum);
    ens.points.resize(n, {0.0, 0.0, 0.0});
    ens.weights.assign(n, 1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (int a = 0; a < d; ++a)
        ens.points[i][a] = params.sigma_p * box_muller(rng);
    return ens;
  }

  const int n = params.n_momentum;
  const std::vector<double> nodes = axis_nodes(n, params.grid_half_width());
  const double inv2s2 = 1.0 / (2.0 * params.sigma_p * params.sigma_p);

  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(n);
  ens.points.resize(total, {0.0, 0.0, 0.0});
  ens.weights.resize(total);

  double wsum = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    double p2 = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      const std::size_t ia = rem % n;
      rem /= n;
      const double pa = nodes[ia];
      ens.points[idx][a] = pa;
      p2 += pa * pa;
    }
    const double w = std::exp(-p2 * inv2s2);
    ens.weights[idx] = w;
    wsum += w;
  }
  for (double& w : ens.weights) w /= wsum;
  return ens;
}

}  // namespace solsim
