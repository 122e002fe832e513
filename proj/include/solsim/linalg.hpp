#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace solsim {

// Eigenvalues of a dense real symmetric matrix (row-major, n x n) by cyclic
// Jacobi rotations, returned ascending. Intended for the small matrices in
// this code base (coupling matrices, few-spin sectors); quadratic
// convergence makes a handful of sweeps plenty.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a,
                                                 int n) {
  auto at = [&](int r, int c) -> double& { return a[r * n + c]; };
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double theta = 0.5 * std::atan2(2.0 * apq, app - aqq);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = at(p, k) = c * akp + s * akq;
          at(k, q) = at(q, k) = -s * akp + c * akq;
        }
        at(p, p) = c * c * app + 2.0 * c * s * apq + s * s * aqq;
        at(q, q) = s * s * app - 2.0 * c * s * apq + c * c * aqq;
        at(p, q) = at(q, p) = 0.0;
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace solsim
