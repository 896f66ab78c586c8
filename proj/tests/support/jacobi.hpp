#ifndef WIGNERLAB_TESTS_SUPPORT_JACOBI_HPP
#define WIGNERLAB_TESTS_SUPPORT_JACOBI_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wignerlab/matrix.hpp"

// Cyclic Jacobi rotations: an independent eigensolver used only to cross-check
// the LAPACK route in the tests. O(n^2) rotations per sweep, each O(n), so
// keep n small; a reference implementation should be simple, not fast.

namespace wignerlab::testing {

inline std::vector<double> jacobi_eigenvalues(const SymMatrix& m,
                                              double tol = 1e-13,
                                              int max_sweeps = 200) {
  const int n = m.n;
  std::vector<double> a = m.a;
  auto idx = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };

  double total = 0.0;
  for (double x : a) total += x * x;
  const double target = tol * tol * std::max(total, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += 2.0 * a[idx(i, j)] * a[idx(i, j)];
    if (off <= target) {
      std::vector<double> lam(n);
      for (int i = 0; i < n; ++i) lam[static_cast<std::size_t>(i)] = a[idx(i, i)];
      std::sort(lam.begin(), lam.end());
      return lam;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[idx(p, q)];
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a_pq, stable root of t^2 + 2 theta t = 1.
        const double theta = (a[idx(q, q)] - a[idx(p, p)]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[idx(k, p)], akq = a[idx(k, q)];
          a[idx(k, p)] = c * akp - s * akq;
          a[idx(k, q)] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[idx(p, k)], aqk = a[idx(q, k)];
          a[idx(p, k)] = c * apk - s * aqk;
          a[idx(q, k)] = s * apk + c * aqk;
        }
      }
    }
  }
  throw std::runtime_error("jacobi reference did not converge");
}

}  // namespace wignerlab::testing

#endif
