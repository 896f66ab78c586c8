#ifndef WIGNERLAB_BOUNDS_HPP
#define WIGNERLAB_BOUNDS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wignerlab/format.hpp"

// Closed-form evaluators for the displayed bounds: the edge moment
// asymptote, the variance bound, the Chebyshev ratio, the concentration tail,
// the mean-norm lower bound, and the preliminary lower-bound chain evaluated
// at finite n. Everything here is a pure total function of its arguments;
// the (1+o(1)) gaps are the caller's to judge.

namespace wignerlab {

// Moment growth rule s(n) = round(n^{6/11 - epsilon}), at least 1. The
// continuous form keeps working at the astronomically large n the bound
// chain scans.
inline double s_rule_real(double n, double epsilon) {
  if (!(n >= 1.0)) throw std::invalid_argument("s_rule needs n >= 1");
  if (!(epsilon > 0.0 && epsilon < 6.0 / 11.0))
    throw std::invalid_argument("s_rule needs 0 < epsilon < 6/11, got " +
                                format_double(epsilon));
  return std::max(1.0, std::round(std::pow(n, 6.0 / 11.0 - epsilon)));
}

inline long long s_rule(long long n, double epsilon) {
  return static_cast<long long>(s_rule_real(static_cast<double>(n), epsilon));
}

// n (2 sigma)^{2s} / (sqrt(pi) s^{3/2}): the leading term of E Tr A^{2s}.
inline double asymptotic_moment(double n, double s, double sigma) {
  if (!(n >= 1.0) || !(s >= 1.0))
    throw std::invalid_argument("asymptotic_moment needs n >= 1, s >= 1");
  return n * std::pow(2.0 * sigma, 2.0 * s) /
         (std::sqrt(M_PI) * std::pow(s, 1.5));
}

// Const sqrt(s) (2 sigma)^{4s}: the variance bound.
inline double variance_bound(double s, double sigma, double constant) {
  if (!(s >= 1.0)) throw std::invalid_argument("variance_bound needs s >= 1");
  return constant * std::sqrt(s) * std::pow(2.0 * sigma, 4.0 * s);
}

// Const s^{7/2} / n^2: the relative-variance (Chebyshev) ratio.
inline double chebyshev_ratio(double n, double s, double constant) {
  if (!(n >= 1.0) || !(s >= 1.0))
    throw std::invalid_argument("chebyshev_ratio needs n >= 1, s >= 1");
  return constant * std::pow(s, 3.5) / (n * n);
}

// 4 exp(-t^2/32): the norm concentration tail bound.
inline double concentration_bound(double t) {
  return 4.0 * std::exp(-t * t / 32.0);
}

// 1 - (3/sqrt(11)) C sqrt(log n)/sqrt(n): the mean-norm lower bound in the
// sigma = 1/2 normalization (edge at 1).
inline double mean_norm_bound(double n, double c_entry) {
  if (!(n >= 2.0)) throw std::invalid_argument("mean_norm_bound needs n >= 2");
  return 1.0 - (3.0 / std::sqrt(11.0)) * c_entry *
                   std::sqrt(std::log(n)) / std::sqrt(n);
}

// One evaluation of the preliminary lower-bound chain at finite n. All
// quantities live in the sigma = 1/2 normalization (the matrix is rescaled
// by 1/(2 sigma), putting the semicircle edge at 1); the probability
// statements are scale-invariant, so sigma only needs to be positive.
struct BoundChainReport {
  double n = 0, sigma = 0, delta = 0, epsilon = 0;
  double s = 0;                          // s_rule(n, epsilon)
  double below_edge_mass = 0;            // n (1 - n^{-6/11+delta})^{2s}
  double far_tail_mass = 0;              // n^2 exp(-2 n^{3 epsilon/4})
  double window_coefficient = 0;         // n e^2
  double moment_lower_bound = 0;         // n / (2 s^{3/2})
  double window_probability_lower = 0;   // (moment lb - masses) / coefficient
  double target_probability = 0;         // n^{-9/11+delta}
  bool consistent = false;
  // The window coefficient's exact form is n (e^2 + o(1)); the o(1) is
  // evaluated as zero here, which this flag records.
  bool o1_dropped = true;
};

inline BoundChainReport preliminary_bound_chain(double n, double delta,
                                                double epsilon, double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("preliminary_bound_chain needs sigma > 0");
  if (!(n >= 2.0))
    throw std::invalid_argument("preliminary_bound_chain needs n >= 2");
  if (!(delta > 0.0 && delta < 6.0 / 11.0 && epsilon < delta &&
        epsilon > 2.0 * delta / 3.0))
    throw std::invalid_argument(
        "preliminary_bound_chain needs 0 < 2 delta/3 < epsilon < delta < "
        "6/11, got delta = " +
        format_double(delta) + ", epsilon = " + format_double(epsilon));
  BoundChainReport r;
  r.n = n;
  r.sigma = sigma;
  r.delta = delta;
  r.epsilon = epsilon;
  r.s = s_rule_real(n, epsilon);
  const double x_below = std::pow(n, -6.0 / 11.0 + delta);
  r.below_edge_mass = n * std::exp(2.0 * r.s * std::log1p(-x_below));
  r.far_tail_mass = n * n * std::exp(-2.0 * std::pow(n, 0.75 * epsilon));
  r.window_coefficient = n * std::exp(2.0);
  r.moment_lower_bound = n / (2.0 * std::pow(r.s, 1.5));
  r.window_probability_lower =
      (r.moment_lower_bound - r.below_edge_mass - r.far_tail_mass) /
      r.window_coefficient;
  r.target_probability = std::pow(n, -9.0 / 11.0 + delta);
  r.consistent = r.window_probability_lower > 0.0 &&
                 r.window_probability_lower >= r.target_probability;
  return r;
}

struct ChainScan {
  std::vector<BoundChainReport> grid;
  bool found = false;
  double threshold_n = 0.0;  // smallest scanned n beyond which all consistent
  bool monotone = true;      // no consistent -> inconsistent flip on the grid
};

// Scans a geometric n grid and reports the consistency threshold. The chain
// turns consistent only at astronomically large n (the below-edge mass decays
// like exp(-2 n^{delta-epsilon})), hence the default ceiling of 1e30.
inline ChainScan scan_chain(double delta, double epsilon, double sigma,
                            double n_lo = 10.0, double n_hi = 1e30,
                            int points_per_decade = 4) {
  if (!(n_lo >= 2.0) || !(n_hi > n_lo))
    throw std::invalid_argument("scan_chain needs 2 <= n_lo < n_hi");
  if (points_per_decade < 1)
    throw std::invalid_argument("scan_chain needs >= 1 point per decade");
  ChainScan scan;
  const double step = std::pow(10.0, 1.0 / points_per_decade);
  for (double n = n_lo; n <= n_hi * (1.0 + 1e-12); n *= step)
    scan.grid.push_back(preliminary_bound_chain(n, delta, epsilon, sigma));
  int first_stable = -1;
  for (int i = static_cast<int>(scan.grid.size()) - 1; i >= 0; --i) {
    if (!scan.grid[static_cast<std::size_t>(i)].consistent) break;
    first_stable = i;
  }
  if (first_stable >= 0) {
    scan.found = true;
    scan.threshold_n = scan.grid[static_cast<std::size_t>(first_stable)].n;
  }
  bool seen = false;
  for (const BoundChainReport& r : scan.grid) {
    if (r.consistent) seen = true;
    else if (seen) scan.monotone = false;
  }
  return scan;
}

}  // namespace wignerlab

#endif
