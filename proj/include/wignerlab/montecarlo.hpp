#ifndef WIGNERLAB_MONTECARLO_HPP
#define WIGNERLAB_MONTECARLO_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wignerlab/bounds.hpp"
#include "wignerlab/estimate.hpp"
#include "wignerlab/matrix.hpp"
#include "wignerlab/spectra.hpp"

// Monte Carlo over independent matrix samples. Trial k always uses the seed
// derived from (master seed, k) and every per-trial value is written into a
// slot addressed by k, so the worker count influences neither the values nor
// the aggregation order: aggregation is a single sequential pass over the
// slots afterwards.

namespace wignerlab {

struct FailureQuotaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrialValues {
  std::vector<double> values;  // NaN where the trial failed
  long long failures = 0;
};

// Runs trial_fn(k) for k in [0, trials), on the requested number of workers.
// Exceptions inside a trial are recorded as failures; the run aborts when
// more than 0.1% of trials fail.
inline TrialValues run_trials(long long trials, int threads,
                              const std::function<double(long long)>& trial_fn) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (threads < 1) throw std::invalid_argument("need at least one worker");
  TrialValues out;
  out.values.assign(static_cast<std::size_t>(trials),
                    std::numeric_limits<double>::quiet_NaN());
  std::atomic<long long> next{0};
  std::atomic<long long> failures{0};
  auto worker = [&]() {
    for (;;) {
      const long long k = next.fetch_add(1);
      if (k >= trials) return;
      try {
        out.values[static_cast<std::size_t>(k)] = trial_fn(k);
      } catch (const std::exception&) {
        failures.fetch_add(1);
      }
    }
  };
  const int workers = static_cast<int>(
      std::min<long long>(threads, trials));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  out.failures = failures.load();
  if (1000 * out.failures > trials)
    throw FailureQuotaError(
        "aborting: " + std::to_string(out.failures) + " of " +
        std::to_string(trials) +
        " trials failed in the eigensolver (quota is 0.1%)");
  return out;
}

enum class Observable { trace_power, spectral_norm };

inline std::uint64_t trial_seed(std::uint64_t master, long long k) {
  return derive_seed(master, static_cast<std::uint64_t>(k));
}

// Per-trial values of the observable on fresh matrix samples.
inline TrialValues sample_observable(Observable obs,
                                     const EntryDistribution& d, int n, int s,
                                     long long trials, std::uint64_t seed,
                                     int threads) {
  if (obs == Observable::trace_power && s < 1)
    throw std::invalid_argument("trace_power observable needs s >= 1");
  return run_trials(trials, threads, [&, n, s, seed](long long k) {
    const MatrixSample m = sample_matrix(d, n, trial_seed(seed, k));
    const Spectrum spec = eigenvalues(m);
    return obs == Observable::trace_power ? trace_power(spec, 2 * s)
                                          : spectral_norm(spec);
  });
}

inline Accumulator accumulate(const std::vector<double>& values) {
  Accumulator acc;
  for (double x : values)
    if (!std::isnan(x)) acc.add(x);
  return acc;
}

inline MomentEstimate mc_estimate(Observable obs, const EntryDistribution& d,
                                  int n, int s, long long trials,
                                  std::uint64_t seed, int threads = 1) {
  if (trials < 2) throw std::invalid_argument("mc_estimate needs >= 2 trials");
  const TrialValues tv = sample_observable(obs, d, n, s, trials, seed, threads);
  const Accumulator acc = accumulate(tv.values);
  MomentEstimate est;
  est.observable = obs == Observable::trace_power
                       ? "trace_power(" + std::to_string(2 * s) + ")"
                       : "spectral_norm";
  est.n = n;
  est.s = s;
  est.distribution = d.name;
  est.seed = seed;
  est.trials = acc.count;
  est.mean = acc.mean();
  est.variance = acc.variance();
  est.std_error = acc.std_error();
  est.failures = tv.failures;
  return est;
}

struct LLNResult {
  std::vector<double> delta;  // per-trial relative deviations from reference
  double threshold = 0.0;     // n^{-1/22}
  double exceed_fraction = 0.0;
};

// Per-trial delta = trace/reference_mean - 1 against an independently
// estimated reference mean; the reference must resolve the threshold.
inline LLNResult lln_check(const EntryDistribution& d, int n, int s,
                           long long trials, std::uint64_t seed,
                           const MomentEstimate& reference, int threads = 1) {
  if (trials < 1) throw std::invalid_argument("lln_check needs >= 1 trial");
  const double threshold = std::pow(static_cast<double>(n), -1.0 / 22.0);
  if (!(reference.mean != 0.0))
    throw std::invalid_argument("lln_check: reference mean is zero");
  const double relative_stderr =
      std::abs(reference.std_error / reference.mean);
  if (relative_stderr > threshold / 10.0)
    throw std::invalid_argument(
        "lln_check: reference too noisy (relative stderr " +
        format_double(relative_stderr) + " exceeds threshold/10 = " +
        format_double(threshold / 10.0) + ")");
  const TrialValues tv = sample_observable(Observable::trace_power, d, n, s,
                                           trials, seed, threads);
  LLNResult res;
  res.threshold = threshold;
  long long exceed = 0, used = 0;
  res.delta.reserve(tv.values.size());
  for (double x : tv.values) {
    if (std::isnan(x)) continue;
    const double delta = x / reference.mean - 1.0;
    res.delta.push_back(delta);
    ++used;
    if (std::abs(delta) >= threshold) ++exceed;
  }
  if (used == 0) throw std::runtime_error("lln_check: no usable trials");
  res.exceed_fraction =
      static_cast<double>(exceed) / static_cast<double>(used);
  return res;
}

struct TailRow {
  double t = 0.0;
  double empirical = 0.0;
  double bound = 0.0;
};

// Empirical tail of |norm - mean| over C t n^{-1/2} against the closed-form
// concentration bound, one row per t. C is the distribution's entry bound;
// the mean is the sample mean of the same values.
inline std::vector<TailRow> concentration_check(
    const std::vector<double>& values, const EntryDistribution& d, int n,
    const std::vector<double>& t_grid) {
  const Accumulator acc = accumulate(values);
  if (acc.count < 1)
    throw std::invalid_argument("concentration_check needs >= 1 usable value");
  const double mean = acc.mean();
  const double scale = d.bound / std::sqrt(static_cast<double>(n));
  std::vector<TailRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    long long hits = 0;
    for (double x : values)
      if (!std::isnan(x) && std::abs(x - mean) > t * scale) ++hits;
    TailRow row;
    row.t = t;
    row.empirical = static_cast<double>(hits) / static_cast<double>(acc.count);
    row.bound = concentration_bound(t);
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<TailRow> concentration_check(const EntryDistribution& d,
                                                int n, long long trials,
                                                const std::vector<double>& t_grid,
                                                std::uint64_t seed,
                                                int threads = 1) {
  if (trials < 1)
    throw std::invalid_argument("concentration_check needs >= 1 trial");
  const TrialValues tv = sample_observable(Observable::spectral_norm, d, n, 0,
                                           trials, seed, threads);
  return concentration_check(tv.values, d, n, t_grid);
}

// MC variance of Tr A^{2s} over sqrt(s) (2 sigma)^{4s}; at sigma = 1/2 the
// denominator is just sqrt(s).
inline double variance_ratio(const EntryDistribution& d, int n, int s,
                             long long trials, std::uint64_t seed,
                             int threads = 1) {
  const MomentEstimate est =
      mc_estimate(Observable::trace_power, d, n, s, trials, seed, threads);
  const double sigma = std::sqrt(moment_of(d, 2));
  return est.variance /
         (std::sqrt(static_cast<double>(s)) * std::pow(2.0 * sigma, 4 * s));
}

struct ScalingFit {
  std::vector<std::pair<double, double>> points;
  double exponent = 0.0;   // alpha in y ~ x^{-alpha}
  double intercept = 0.0;  // log-space intercept
  double residual = 0.0;   // max |log y - fitted|
};

// Least squares in log-log coordinates; exponent is the negated slope.
inline ScalingFit fit_scaling(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("fit_scaling needs at least 3 points");
  for (const auto& [x, y] : points)
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument(
          "fit_scaling needs positive coordinates, got (" + format_double(x) +
          ", " + format_double(y) + ")");
  const double count = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  // denom = count^2 * Var(log x); rounding keeps it a few ulps from zero
  // when the abscissae coincide, so compare against the term magnitude.
  const double denom = count * sxx - sx * sx;
  if (!(denom > 1e-12 * count * sxx))
    throw std::invalid_argument("fit_scaling: degenerate abscissae");
  ScalingFit fit;
  fit.points = points;
  const double slope = (count * sxy - sx * sy) / denom;
  fit.intercept = (sy - slope * sx) / count;
  fit.exponent = -slope;
  for (const auto& [x, y] : points)
    fit.residual = std::max(
        fit.residual,
        std::abs(std::log(y) - (fit.intercept + slope * std::log(x))));
  return fit;
}

}  // namespace wignerlab

#endif
