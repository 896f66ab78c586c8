#ifndef WIGNERLAB_SPECTRA_HPP
#define WIGNERLAB_SPECTRA_HPP

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wignerlab/matrix.hpp"

// Full symmetric spectra via LAPACK dsyev: Householder tridiagonalization
// followed by the shifted QL/QR iteration on the tridiagonal form. The whole
// spectrum is needed because Tr A^{2s} sums over every eigenvalue.

namespace wignerlab {

// Tolerance/iteration constants shared by the residual checks in the tests.
namespace spectol {
// Residual scale per dimension for trace / Frobenius identities.
inline constexpr double residual_per_n = 1e-10;
// QL/QR sweep cap per eigenvalue enforced by the backend (dsteqr).
inline constexpr int iteration_cap = 30;
// Cross-check tolerance against the Jacobi reference solver.
inline constexpr double jacobi_agreement = 1e-8;
}  // namespace spectol

struct Spectrum {
  int n = 0;
  std::vector<double> lambda;  // ascending
};

struct EigensolverError : std::runtime_error {
  int index;  // 1-based index reported by the backend
  EigensolverError(int idx, int n)
      : std::runtime_error(
            "eigensolver failed to converge within " +
            std::to_string(spectol::iteration_cap) +
            " sweeps: off-diagonal element " + std::to_string(idx) +
            " of the tridiagonal form did not vanish (n = " +
            std::to_string(n) + ")"),
        index(idx) {}
};

inline Spectrum eigenvalues(const SymMatrix& m) {
  Spectrum s;
  s.n = m.n;
  s.lambda.resize(m.n);
  std::vector<double> work = m.a;  // dsyev destroys its input
  const lapack_int info =
      LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'N', 'U', m.n, work.data(), m.n,
                    s.lambda.data());
  if (info > 0) throw EigensolverError(static_cast<int>(info), m.n);
  if (info < 0)
    throw std::logic_error("dsyev: illegal argument " +
                           std::to_string(-info));
  // dsyev returns ascending order already; keep the guarantee explicit.
  std::sort(s.lambda.begin(), s.lambda.end());
  return s;
}

inline Spectrum eigenvalues(const MatrixSample& m) {
  return eigenvalues(m.entries);
}

inline double spectral_norm(const Spectrum& s) {
  if (s.lambda.empty()) throw std::invalid_argument("empty spectrum");
  return std::max(std::abs(s.lambda.front()), std::abs(s.lambda.back()));
}

// Sum of lambda_i^{two_s}, factored through max|lambda| so that large powers
// neither overflow nor flush to zero before the sum is taken.
inline double trace_power(const Spectrum& s, int two_s) {
  if (two_s < 2 || two_s % 2 != 0)
    throw std::invalid_argument("trace_power needs an even exponent >= 2");
  if (s.lambda.empty()) throw std::invalid_argument("empty spectrum");
  const double amax = spectral_norm(s);
  if (amax == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : s.lambda) sum += std::pow(std::abs(x) / amax, two_s);
  return std::pow(amax, two_s) * sum;
}

}  // namespace wignerlab

#endif
