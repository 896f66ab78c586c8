#ifndef WIGNERLAB_DISTRIBUTION_HPP
#define WIGNERLAB_DISTRIBUTION_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wignerlab/format.hpp"
#include "wignerlab/rng.hpp"

// Bounded centered entry laws. The two-point family (value a with probability
// p, value b with probability 1-p, tuned so the mean is 0 and the variance is
// sigma^2) covers both the skewed case (p != 1/2, third moment nonzero) and
// the symmetric baseline. All raw moments are available in closed form, which
// keeps the exact path-sum engines rational-friendly.

namespace wignerlab {

// Stored raw moments m_1..m_K; large enough for every union edge multiplicity
// the exact engines or the audit can produce at desk scale.
inline constexpr int kStoredMoments = 64;

struct EntryDistribution {
  std::string name;
  double bound = 0.0;            // C with |entry| <= C almost surely
  std::vector<double> moments;   // moments[k-1] = m_k, m_1 = 0, m_2 = sigma^2
  // Sampler parameters (two-point family). closed_form marks laws whose m_k
  // can be produced for any k; table-only laws reject k beyond the table.
  double a = 0.0, b = 0.0, p = 0.0;
  bool closed_form = false;
  bool has_sampler = false;
};

inline double moment_of(const EntryDistribution& d, int k) {
  if (k < 1) throw std::invalid_argument("moment order must be >= 1");
  if (k <= static_cast<int>(d.moments.size())) return d.moments[k - 1];
  if (d.closed_form)
    return d.p * std::pow(d.a, k) + (1.0 - d.p) * std::pow(d.b, k);
  throw std::out_of_range("moment of order " + std::to_string(k) +
                          " unavailable for " + d.name + " (stored up to " +
                          std::to_string(d.moments.size()) + ")");
}

inline double sample_entry(const EntryDistribution& d, std::uint64_t word) {
  if (!d.has_sampler)
    throw std::logic_error("distribution " + d.name + " has no sampler");
  return to_unit(word) < d.p ? d.a : d.b;
}

namespace detail {

inline void fill_two_point_moments(EntryDistribution& d, bool symmetric) {
  d.moments.resize(kStoredMoments);
  d.moments[0] = 0.0;  // centered by construction
  const double q = 1.0 - d.p;
  double ak = d.a, bk = d.b;
  for (int k = 2; k <= kStoredMoments; ++k) {
    ak *= d.a;
    bk *= d.b;
    d.moments[k - 1] = (symmetric && k % 2 == 1) ? 0.0 : d.p * ak + q * bk;
  }
}

}  // namespace detail

// Two-point law: a = sigma*sqrt((1-p)/p) w.p. p, b = -sigma*sqrt(p/(1-p))
// w.p. 1-p. Third moment sigma^3*(1-2p)/sqrt(p(1-p)).
inline EntryDistribution make_two_point(double p, double sigma) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("two-point law needs 0 < p < 1, got p = " +
                                format_double(p));
  if (!(sigma > 0.0))
    throw std::invalid_argument("two-point law needs sigma > 0, got sigma = " +
                                format_double(sigma));
  EntryDistribution d;
  const double q = 1.0 - p;
  d.name = "two_point(p=" + format_double(p) +
           ",sigma=" + format_double(sigma) + ")";
  d.a = sigma * std::sqrt(q / p);
  d.b = -sigma * std::sqrt(p / q);
  d.p = p;
  d.bound = std::max(d.a, -d.b);
  d.closed_form = true;
  d.has_sampler = true;
  detail::fill_two_point_moments(d, false);
  d.moments[1] = sigma * sigma;  // exact, not via sqrt round-trip
  return d;
}

// Symmetric +-sigma law. Odd moments are pinned to exact zero instead of
// being left to cancellation.
inline EntryDistribution make_rademacher(double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("rademacher law needs sigma > 0, got sigma = " +
                                format_double(sigma));
  EntryDistribution d;
  d.name = "rademacher(sigma=" + format_double(sigma) + ")";
  d.a = sigma;
  d.b = -sigma;
  d.p = 0.5;
  d.bound = sigma;
  d.closed_form = true;
  d.has_sampler = true;
  detail::fill_two_point_moments(d, true);
  d.moments[1] = sigma * sigma;
  return d;
}

// Moment-table-only law for tests of the moment engines; cannot be sampled
// and has no closed form beyond its table.
inline EntryDistribution make_from_moments(std::string name, double bound,
                                           std::vector<double> moments) {
  if (moments.size() < 2 || moments[0] != 0.0 || !(moments[1] > 0.0))
    throw std::invalid_argument(
        "moment table must start with m_1 = 0 and m_2 > 0");
  EntryDistribution d;
  d.name = std::move(name);
  d.bound = bound;
  d.moments = std::move(moments);
  return d;
}

}  // namespace wignerlab

#endif
