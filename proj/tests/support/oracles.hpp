// Test-only oracles, independent of the mean-field implementation paths
// they check.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "solsim/linalg.hpp"

namespace oracles {

// Free Gaussian wave-packet spreading: sigma(t)^2 = sigma0^2 + (sigma_p t/M)^2.
inline double free_spread_ratio(double sigma_p, double t) {
  const double sigma0 = 1.0 / (2.0 * sigma_p);
  return std::sqrt(1.0 + std::pow(sigma_p * t / sigma0, 2));
}

// Exact spectrum of chi * S+ S- for n spin-1/2 particles, by direct
// diagonalization over the 2^n product basis. S+ = sum_i sigma_+^(i).
// Basis state b: bit i set means spin i up.
inline std::vector<double> dicke_spectrum(int n, double chi) {
  const int dim = 1 << n;
  // S+S- = sum_{i,j} sigma_+^i sigma_-^j. Matrix elements are real.
  std::vector<double> h(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int b = 0; b < dim; ++b) {
    for (int j = 0; j < n; ++j) {
      if (!(b & (1 << j))) continue;          // sigma_-^j needs spin j up
      const int mid = b & ~(1 << j);          // spin j lowered
      for (int i = 0; i < n; ++i) {
        if (mid & (1 << i)) continue;         // sigma_+^i needs spin i down
        const int out = mid | (1 << i);
        h[static_cast<std::size_t>(out) * dim + b] += chi;
      }
    }
  }
  return solsim::symmetric_eigenvalues(h, dim);
}

// Same operator restricted to the fixed-magnetization sector with n_up
// spins up; returns that sector's eigenvalues.
inline std::vector<double> dicke_sector_spectrum(int n, int n_up,
                                                 double chi) {
  std::vector<int> basis;
  for (int b = 0; b < (1 << n); ++b)
    if (__builtin_popcount(static_cast<unsigned>(b)) == n_up)
      basis.push_back(b);
  const int dim = static_cast<int>(basis.size());
  std::vector<int> where(1 << n, -1);
  for (int k = 0; k < dim; ++k) where[basis[k]] = k;

  std::vector<double> h(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int k = 0; k < dim; ++k) {
    const int b = basis[k];
    for (int j = 0; j < n; ++j) {
      if (!(b & (1 << j))) continue;
      const int mid = b & ~(1 << j);
      for (int i = 0; i < n; ++i) {
        if (mid & (1 << i)) continue;
        const int out = mid | (1 << i);
        h[static_cast<std::size_t>(where[out]) * dim + k] += chi;
      }
    }
  }
  return solsim::symmetric_eigenvalues(h, dim);
}

// Predicted eigenvalue chi (S(S+1) - M^2 + M) on |S, M>.
inline double dicke_eigenvalue(double chi, double s, double m) {
  return chi * (s * (s + 1.0) - m * m + m);
}

// Central finite-difference second derivatives of a scalar field f(x, z).
template <typename F>
double fd_dxx(const F& f, double x, double z, double h) {
  return (f(x + h, z) - 2.0 * f(x, z) + f(x - h, z)) / (h * h);
}

template <typename F>
double fd_dxz(const F& f, double x, double z, double h) {
  return (f(x + h, z + h) - f(x + h, z - h) - f(x - h, z + h) +
          f(x - h, z - h)) /
         (4.0 * h * h);
}

// Deterministic xorshift generator for property-style sampling.
struct Xorshift {
  std::uint64_t state;
  explicit Xorshift(std::uint64_t seed) : state(seed ? seed : 1) {}
  double uniform() {  // in (0, 1)
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return (static_cast<double>(state >> 11) + 0.5) / 9007199254740992.0;
  }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace oracles
