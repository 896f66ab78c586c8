#ifndef WIGNERLAB_EXPERIMENTS_HPP
#define WIGNERLAB_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wignerlab/bounds.hpp"
#include "wignerlab/config.hpp"
#include "wignerlab/csv.hpp"
#include "wignerlab/dyck.hpp"
#include "wignerlab/gluing.hpp"
#include "wignerlab/montecarlo.hpp"
#include "wignerlab/paths.hpp"
#include "wignerlab/svg.hpp"
#include "wignerlab/version.hpp"

// Experiment kinds: each maps one parsed config to a list of result rows,
// a JSON summary, and (for two kinds) SVG plots. Everything downstream of
// the master seed is deterministic, so a rerun of the same config
// reproduces every output byte.

namespace wignerlab {

struct RunArtifacts {
  std::vector<ResultRow> rows;
  nlohmann::ordered_json summary;
  // (file name, content) pairs written next to results.csv.
  std::vector<std::pair<std::string, std::string>> plots;
};

namespace detail {

struct SampleStats {
  long long count = 0;
  double mean = 0.0;
  double se_mean = 0.0;
  double var = 0.0;     // unbiased
  double se_var = 0.0;  // from the fourth central moment
};

// Two-pass moments of the usable (non-NaN) trial values. The variance of
// the unbiased sample variance is (m4 - s^4 (T-3)/(T-1)) / T, estimated
// with sample central moments.
inline SampleStats sample_stats(const std::vector<double>& values) {
  SampleStats st;
  double sum = 0.0;
  for (double x : values)
    if (!std::isnan(x)) {
      sum += x;
      ++st.count;
    }
  if (st.count < 2)
    throw std::runtime_error("need at least 2 usable trials, got " +
                             std::to_string(st.count));
  const double t = static_cast<double>(st.count);
  st.mean = sum / t;
  double m2 = 0.0, m4 = 0.0;
  for (double x : values) {
    if (std::isnan(x)) continue;
    const double d = x - st.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  st.var = m2 / (t - 1.0);
  m4 /= t;
  st.se_mean = std::sqrt(st.var / t);
  st.se_var =
      std::sqrt(std::max(0.0, (m4 - (t - 3.0) / (t - 1.0) * st.var * st.var) / t));
  return st;
}

inline double fraction_stderr(double fraction, long long trials) {
  return std::sqrt(std::max(0.0, fraction * (1.0 - fraction)) /
                   static_cast<double>(trials));
}

class RowSink {
 public:
  RowSink(std::string experiment, std::string run_id)
      : experiment_(std::move(experiment)),
        run_id_(std::move(run_id)),
        version_(version_string()) {}

  void push(const std::string& params, const std::string& observable,
            double value, std::optional<double> std_error = std::nullopt,
            long long trials = 0) {
    ResultRow r;
    r.experiment = experiment_;
    r.params = params;
    r.observable = observable;
    r.value = value;
    r.std_error = std_error;
    r.trials = trials;
    r.run_id = run_id_;
    r.version = version_;
    rows.push_back(std::move(r));
  }

  std::vector<ResultRow> rows;

 private:
  std::string experiment_, run_id_, version_;
};

inline ParamList base_params(const ExperimentConfig& c) {
  ParamList p;
  if (c.dist) {
    p.add("dist", *c.dist);
    if (c.p) p.add("p", *c.p);
    p.add("sigma", *c.sigma);
  }
  return p;
}

// Reads one key back out of a params column ("a=1;b=2" style).
inline std::optional<std::string> param_value(const std::string& params,
                                              const std::string& key) {
  std::size_t pos = 0;
  while (pos <= params.size()) {
    std::size_t end = params.find(';', pos);
    if (end == std::string::npos) end = params.size();
    const std::string item = params.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq != std::string::npos && item.substr(0, eq) == key)
      return item.substr(eq + 1);
    pos = end + 1;
  }
  return std::nullopt;
}

inline int as_int(long long v, const char* what) {
  if (v < 1 || v > 1000000)
    throw std::invalid_argument(std::string(what) + " out of range: " +
                                std::to_string(v));
  return static_cast<int>(v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// exact-vs-mc: exact trace moment and exact variance against MC estimates,
// with z-scores. Exact routes are budget-guarded; meant for oracle scales.

inline void run_exact_vs_mc(const ExperimentConfig& c, int threads,
                            detail::RowSink& sink) {
  const EntryDistribution d = config_distribution(c);
  const int n = detail::as_int(*c.n, "n");
  const int s = detail::as_int(*c.s, "s");
  const std::string params = detail::base_params(c)
                                 .add("n", static_cast<long long>(n))
                                 .add("s", static_cast<long long>(s))
                                 .str();

  const double exact_m = exact_trace_moment(n, s, d);
  const TrialValues tv = sample_observable(Observable::trace_power, d, n, s,
                                           *c.trials, *c.seed, threads);
  const detail::SampleStats st = detail::sample_stats(tv.values);

  sink.push(params, "exact_trace_moment", exact_m);
  sink.push(params, "mc_trace_moment", st.mean, st.se_mean, st.count);
  sink.push(params, "z_trace_moment", (st.mean - exact_m) / st.se_mean);

  const double var_full = exact_variance(n, s, d, VarianceSum::full);
  const double var_corr =
      exact_variance(n, s, d, VarianceSum::correlated_only);
  sink.push(params, "exact_variance_full", var_full);
  sink.push(params, "exact_variance_correlated", var_corr);
  sink.push(params, "exact_variance_gap", std::abs(var_full - var_corr));
  sink.push(params, "mc_variance", st.var, st.se_var, st.count);
  sink.push(params, "z_variance", (st.var - var_full) / st.se_var);
}

// ---------------------------------------------------------------------------
// moments: one MC trace moment at (n, s) or (n, s_rule(n, epsilon)), with the
// closed-form edge asymptote and the Catalan (semicircle) reference.

inline void run_moments(const ExperimentConfig& c, int threads,
                        detail::RowSink& sink) {
  const EntryDistribution d = config_distribution(c);
  const int n = detail::as_int(*c.n, "n");
  const long long s_big =
      c.s ? *c.s : s_rule(static_cast<long long>(n), *c.epsilon);
  const int s = detail::as_int(s_big, "s");
  ParamList pl = detail::base_params(c);
  pl.add("n", static_cast<long long>(n)).add("s", static_cast<long long>(s));
  if (c.epsilon) pl.add("epsilon", *c.epsilon);
  const std::string params = pl.str();

  if (c.epsilon)
    sink.push(params, "s_rule", static_cast<double>(s));

  const MomentEstimate est = mc_estimate(Observable::trace_power, d, n, s,
                                         *c.trials, *c.seed, threads);
  sink.push(params, "mc_trace_moment", est.mean, est.std_error, est.trials);
  sink.push(params, "mc_trace_moment_per_n", est.mean / n, est.std_error / n,
            est.trials);

  const double sigma = std::sqrt(moment_of(d, 2));
  const double asym = asymptotic_moment(n, s, sigma);
  sink.push(params, "asymptotic_moment", asym);
  sink.push(params, "moment_ratio_asymptotic", est.mean / asym,
            est.std_error / asym, est.trials);

  if (s <= kMaxCatalanIndex) {
    const double catalan_ref =
        static_cast<double>(catalan_exact(s)) * std::pow(sigma, 2 * s);
    sink.push(params, "catalan_reference", catalan_ref);
    sink.push(params, "moment_per_n_ratio_catalan",
              est.mean / n / catalan_ref, est.std_error / n / catalan_ref,
              est.trials);
  }
}

// ---------------------------------------------------------------------------
// variance: Var(Tr A^{2s}) over an n grid with s = s_rule(n, epsilon),
// reported raw and as the ratio to sqrt(s) (2 sigma)^{4s}.

inline void run_variance(const ExperimentConfig& c, int threads,
                         detail::RowSink& sink) {
  const EntryDistribution d = config_distribution(c);
  const double sigma = std::sqrt(moment_of(d, 2));
  for (long long n_big : *c.n_grid) {
    const int n = detail::as_int(n_big, "n");
    const int s = detail::as_int(s_rule(n_big, *c.epsilon), "s");
    const std::string params = detail::base_params(c)
                                   .add("n", n_big)
                                   .add("s", static_cast<long long>(s))
                                   .add("epsilon", *c.epsilon)
                                   .str();
    const std::uint64_t seed_n =
        derive_seed(*c.seed, static_cast<std::uint64_t>(n_big));
    const TrialValues tv = sample_observable(Observable::trace_power, d, n, s,
                                             *c.trials, seed_n, threads);
    const detail::SampleStats st = detail::sample_stats(tv.values);
    const double denom =
        std::sqrt(static_cast<double>(s)) * std::pow(2.0 * sigma, 4 * s);
    sink.push(params, "s_rule", static_cast<double>(s));
    sink.push(params, "mc_mean", st.mean, st.se_mean, st.count);
    sink.push(params, "mc_variance", st.var, st.se_var, st.count);
    sink.push(params, "variance_ratio", st.var / denom, st.se_var / denom,
              st.count);
    sink.push(params, "variance_bound_reference", variance_bound(s, sigma, 1.0));
    sink.push(params, "relative_variance", st.var / (st.mean * st.mean),
              st.se_var / (st.mean * st.mean), st.count);
    sink.push(params, "chebyshev_reference", chebyshev_ratio(n, s, 1.0));
  }
}

// ---------------------------------------------------------------------------
// lln: relative deviations of Tr A^{2s} from an independent reference mean;
// exceed fraction against the n^{-1/22} threshold, per grid point.

inline void run_lln(const ExperimentConfig& c, int threads,
                    detail::RowSink& sink) {
  const EntryDistribution d = config_distribution(c);
  for (long long n_big : *c.n_grid) {
    const int n = detail::as_int(n_big, "n");
    const int s = detail::as_int(s_rule(n_big, *c.epsilon), "s");
    const std::string params = detail::base_params(c)
                                   .add("n", n_big)
                                   .add("s", static_cast<long long>(s))
                                   .add("epsilon", *c.epsilon)
                                   .str();
    const std::uint64_t seed_n =
        derive_seed(*c.seed, static_cast<std::uint64_t>(n_big));
    const std::uint64_t seed_ref = derive_seed(seed_n, 0x726566ULL);
    const MomentEstimate ref = mc_estimate(Observable::trace_power, d, n, s,
                                           *c.ref_trials, seed_ref, threads);
    const LLNResult res = lln_check(d, n, s, *c.trials, seed_n, ref, threads);
    const long long used = static_cast<long long>(res.delta.size());
    sink.push(params, "s_rule", static_cast<double>(s));
    sink.push(params, "threshold", res.threshold);
    sink.push(params, "reference_mean", ref.mean, ref.std_error, ref.trials);
    sink.push(params, "exceed_fraction", res.exceed_fraction,
              detail::fraction_stderr(res.exceed_fraction, used), used);
  }
}

// ---------------------------------------------------------------------------
// concentration: spectral-norm deviation tails against 4 exp(-t^2/32).

inline void run_concentration(const ExperimentConfig& c, int threads,
                              detail::RowSink& sink) {
  const EntryDistribution d = config_distribution(c);
  const int n = detail::as_int(*c.n, "n");
  const std::string params =
      detail::base_params(c).add("n", static_cast<long long>(n)).str();
  const TrialValues tv = sample_observable(Observable::spectral_norm, d, n, 0,
                                           *c.trials, *c.seed, threads);
  const Accumulator acc = accumulate(tv.values);
  const std::vector<TailRow> table =
      concentration_check(tv.values, d, n, *c.t_grid);
  sink.push(params, "mean_norm", acc.mean(), acc.std_error(), acc.count);
  for (const TailRow& row : table) {
    const std::string tp = detail::base_params(c)
                               .add("n", static_cast<long long>(n))
                               .add("t", row.t)
                               .str();
    sink.push(tp, "empirical_tail", row.empirical,
              detail::fraction_stderr(row.empirical, acc.count), acc.count);
    sink.push(tp, "concentration_bound", row.bound);
  }
}

// ---------------------------------------------------------------------------
// scaling: mean spectral norm over an n grid; fits the decay exponent of
// 2 sigma - E||A|| in log-log coordinates.

inline void run_scaling(const ExperimentConfig& c, int threads,
                        detail::RowSink& sink) {
  const EntryDistribution d = config_distribution(c);
  const double sigma = std::sqrt(moment_of(d, 2));
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < c.n_grid->size(); ++i) {
    const long long n_big = (*c.n_grid)[i];
    const int n = detail::as_int(n_big, "n");
    const long long trials = c.trials ? *c.trials : (*c.trials_grid)[i];
    const std::string params = detail::base_params(c).add("n", n_big).str();
    const std::uint64_t seed_n =
        derive_seed(*c.seed, static_cast<std::uint64_t>(n_big));
    const MomentEstimate est = mc_estimate(Observable::spectral_norm, d, n, 0,
                                           trials, seed_n, threads);
    const double gap = 2.0 * sigma - est.mean;
    sink.push(params, "mean_norm", est.mean, est.std_error, est.trials);
    sink.push(params, "edge_gap", gap, est.std_error, est.trials);
    if (gap > 0.0) points.emplace_back(static_cast<double>(n_big), gap);
  }
  if (points.size() < 3)
    throw std::runtime_error(
        "scaling fit needs >= 3 grid points with positive edge gap, got " +
        std::to_string(points.size()));
  const ScalingFit fit = fit_scaling(points);
  const std::string params = detail::base_params(c).str();
  sink.push(params, "scaling_exponent", fit.exponent);
  sink.push(params, "scaling_intercept", fit.intercept);
  sink.push(params, "scaling_residual", fit.residual);
}

// ---------------------------------------------------------------------------
// glue-audit: exhaustive correlated-pair scan at (n, s); checks every glue
// output and the preimage bound, then exercises the P3 augmentation on every
// length 4s-2 closed path satisfying its precondition. At s = 2 the
// single-joint case cannot arise from actual pairs (the odd-multiplicity
// edges of a closed walk form an even subgraph, which a lone non-loop single
// edge violates), so the audit drives the augmentation over the full
// precondition domain instead and records the multiplicity histogram as
// evidence.

inline void run_glue_audit(const ExperimentConfig& c, int,
                           detail::RowSink& sink) {
  const int n = detail::as_int(*c.n, "n");
  const int s = detail::as_int(*c.s, "s");
  const std::string params = ParamList()
                                 .add("n", static_cast<long long>(n))
                                 .add("s", static_cast<long long>(s))
                                 .str();
  const double pair_count = std::pow(static_cast<double>(n), 4 * s);
  if (pair_count > kEnumerationBudget)
    throw BudgetError("glue audit over n^{4s} = " + format_double(pair_count) +
                      " ordered pairs exceeds the budget of " +
                      format_double(kEnumerationBudget));

  const std::vector<ClosedPath> paths = all_closed_paths(n, 2 * s);
  long long correlated = 0;
  long long closure_violations = 0, length_violations = 0;
  long long drop_violations = 0;
  using PairKey = std::pair<std::vector<int>, std::vector<int>>;
  std::map<std::vector<int>, std::vector<PairKey>> preimage_map;
  std::map<int, long long> joint_multiplicity_histogram;

  for (const ClosedPath& p1 : paths) {
    const EdgeMultiset m1 = edge_multiset(p1);
    for (const ClosedPath& p2 : paths) {
      const PathPair pair = classify_pair(p1, p2);
      if (!pair.correlated) continue;
      ++correlated;
      GlueResult glued;
      try {
        glued = glue_detailed(pair);
      } catch (const std::exception&) {
        ++closure_violations;  // ClosedPath construction rejected the output
        continue;
      }
      if (glued.path.length() != 4 * s - 2) ++length_violations;
      const EdgeMultiset mg = edge_multiset(glued.path);
      const int union_mult = multiplicity_of(m1, glued.joint) +
                             multiplicity_of(edge_multiset(p2), glued.joint);
      const int glued_mult = multiplicity_of(mg, glued.joint);
      if (union_mult - glued_mult != 2) ++drop_violations;
      ++joint_multiplicity_histogram[glued_mult];
      preimage_map[glued.path.v].emplace_back(p1.v, p2.v);
    }
  }

  long long max_preimage = 0;
  const std::vector<int>* max_output = nullptr;
  for (const auto& [key, pairs] : preimage_map) {
    const long long count = static_cast<long long>(pairs.size());
    if (count > max_preimage) {
      max_preimage = count;
      max_output = &key;
    }
  }

  // Cross-check the standalone preimage search against the exhaustive map on
  // the busiest output plus the first and last in path order. A nonzero gap
  // means glue is nondeterministic or the search misses pairs; membership of
  // every pair in its own preimage set follows from a zero gap because the
  // map was built from the pairs themselves.
  long long function_gap = 0, function_checks = 0;
  if (!preimage_map.empty()) {
    std::vector<const std::vector<int>*> picks = {
        &preimage_map.begin()->first, &preimage_map.rbegin()->first};
    if (max_output) picks.push_back(max_output);
    std::sort(picks.begin(), picks.end());
    picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
    for (const std::vector<int>* key : picks) {
      ++function_checks;
      std::vector<PairKey> via_search;
      for (const PathPair& pair : preimages(ClosedPath(n, *key), s, n))
        via_search.emplace_back(pair.p1.v, pair.p2.v);
      std::vector<PairKey> via_map = preimage_map.at(*key);
      std::sort(via_search.begin(), via_search.end());
      std::sort(via_map.begin(), via_map.end());
      if (via_search != via_map) ++function_gap;
    }
  }

  sink.push(params, "path_count", static_cast<double>(paths.size()));
  sink.push(params, "correlated_pairs", static_cast<double>(correlated));
  sink.push(params, "glued_outputs", static_cast<double>(preimage_map.size()));
  sink.push(params, "closure_violations",
            static_cast<double>(closure_violations));
  sink.push(params, "length_violations",
            static_cast<double>(length_violations));
  sink.push(params, "multiplicity_drop_violations",
            static_cast<double>(drop_violations));
  sink.push(params, "max_preimage_count", static_cast<double>(max_preimage));
  sink.push(params, "preimage_bound", 8.0 * s * s);
  sink.push(params, "preimage_function_checks",
            static_cast<double>(function_checks));
  sink.push(params, "preimage_membership_violations",
            static_cast<double>(function_gap));
  for (const auto& [mult, count] : joint_multiplicity_histogram) {
    const std::string mp =
        ParamList()
            .add("n", static_cast<long long>(n))
            .add("s", static_cast<long long>(s))
            .add("joint_multiplicity", static_cast<long long>(mult))
            .str();
    sink.push(mp, "joint_multiplicity_count", static_cast<double>(count));
  }

  // P3 augmentation over every closed path of length 4s-2 with exactly one
  // single edge, inserting after the surviving occurrence.
  long long candidates = 0, insertions = 0, augment_violations = 0;
  for (const ClosedPath& p : all_closed_paths(n, 4 * s - 2)) {
    const EdgeMultiset ms = edge_multiset(p);
    Edge joint{0, 0};
    int singles = 0;
    for (const auto& [e, count] : ms)
      if (count == 1) {
        ++singles;
        joint = e;
      }
    if (singles != 1) continue;
    ++candidates;
    const int len = p.length();
    int occurrence = -1;
    for (int k = 0; k < len; ++k)
      if (make_edge(p.v[k], p.v[(k + 1) % len]) == joint) {
        occurrence = k;
        break;
      }
    for (int t = occurrence + 1; t <= len; ++t) {
      const int here = p.v[t % len];
      if (here != joint.first && here != joint.second) continue;
      ++insertions;
      try {
        const ClosedPath p3 = augment_glued(p, joint, t);
        bool ok = p3.length() == 4 * s;
        ok = ok && multiplicity_of(edge_multiset(p3), joint) == 3;
        std::vector<int> occ;
        for (int k = 0; k < p3.length(); ++k)
          if (make_edge(p3.v[k], p3.v[(k + 1) % p3.length()]) == joint)
            occ.push_back(k);
        ok = ok && occ.size() == 3 && occ[2] - occ[1] == 1;
        if (!ok) ++augment_violations;
      } catch (const std::exception&) {
        ++augment_violations;
      }
    }
  }
  sink.push(params, "augment_candidates", static_cast<double>(candidates));
  sink.push(params, "augment_insertions", static_cast<double>(insertions));
  sink.push(params, "augment_violations",
            static_cast<double>(augment_violations));
}

// ---------------------------------------------------------------------------
// dyck: mean marked-moment count over uniform Dyck paths of semilength 2s
// with window 2s, fitted as a power of s.

inline void run_dyck(const ExperimentConfig& c, int, detail::RowSink& sink) {
  std::vector<std::pair<double, double>> points;
  for (long long s_big : *c.s_grid) {
    const int s = detail::as_int(s_big, "s");
    const std::string params = ParamList().add("s", s_big).str();
    const std::uint64_t seed_s =
        derive_seed(*c.seed, static_cast<std::uint64_t>(s_big));
    Accumulator acc;
    for (long long k = 0; k < *c.trials; ++k) {
      const DyckProfile profile =
          uniform_dyck_path(2 * s, 2 * s, derive_seed(seed_s, k));
      acc.add(static_cast<double>(marked_moment_count(profile)));
    }
    sink.push(params, "mean_marked_count", acc.mean(),
              acc.count > 1 ? std::optional<double>(acc.std_error())
                            : std::nullopt,
              acc.count);
    points.emplace_back(static_cast<double>(s_big), acc.mean());
  }
  if (points.size() >= 3) {
    const ScalingFit fit = fit_scaling(points);
    sink.push("", "marked_count_exponent", -fit.exponent);
    sink.push("", "marked_fit_residual", fit.residual);
  }
}

// ---------------------------------------------------------------------------
// bound-chain: the finite-n inequality chain, scanned over a geometric grid
// until consistency stabilizes.

inline void run_bound_chain(const ExperimentConfig& c, int,
                            detail::RowSink& sink) {
  const ChainScan scan = scan_chain(*c.delta, *c.epsilon, *c.sigma);
  const std::string params = ParamList()
                                 .add("sigma", *c.sigma)
                                 .add("delta", *c.delta)
                                 .add("epsilon", *c.epsilon)
                                 .str();
  for (const BoundChainReport& r : scan.grid) {
    const std::string np = ParamList()
                               .add("sigma", *c.sigma)
                               .add("delta", *c.delta)
                               .add("epsilon", *c.epsilon)
                               .add("n", r.n)
                               .str();
    sink.push(np, "chain_consistent", r.consistent ? 1.0 : 0.0);
  }
  // Full term breakdown at representative n.
  for (double n : {1e3, 1e6, 1e12, 1e22, 1e30}) {
    const BoundChainReport r =
        preliminary_bound_chain(n, *c.delta, *c.epsilon, *c.sigma);
    const std::string np = ParamList()
                               .add("sigma", *c.sigma)
                               .add("delta", *c.delta)
                               .add("epsilon", *c.epsilon)
                               .add("n", n)
                               .str();
    sink.push(np, "s_rule", r.s);
    sink.push(np, "below_edge_mass", r.below_edge_mass);
    sink.push(np, "far_tail_mass", r.far_tail_mass);
    sink.push(np, "window_coefficient", r.window_coefficient);
    sink.push(np, "moment_lower_bound", r.moment_lower_bound);
    sink.push(np, "window_probability_lower", r.window_probability_lower);
    sink.push(np, "target_probability", r.target_probability);
  }
  sink.push(params, "threshold_found", scan.found ? 1.0 : 0.0);
  sink.push(params, "threshold_n", scan.threshold_n);
  sink.push(params, "scan_monotone", scan.monotone ? 1.0 : 0.0);
  sink.push(params, "o1_dropped", 1.0);
}

// ---------------------------------------------------------------------------
// Plots.

inline std::string make_scaling_plot(const std::vector<ResultRow>& rows) {
  PlotSeries data;
  data.label = "2 sigma - mean norm";
  data.line = false;
  for (const ResultRow& r : rows) {
    if (r.observable != "edge_gap" || !(r.value > 0.0)) continue;
    const std::optional<std::string> n = detail::param_value(r.params, "n");
    if (!n) continue;
    data.points.emplace_back(parse_double(*n), r.value);
  }
  if (data.points.size() < 2)
    throw std::runtime_error(
        "scaling plot needs >= 2 positive edge_gap rows with an n parameter");

  SvgPlot plot("Spectral-norm gap scaling", "n", "2 sigma - mean norm", true,
               true);
  const auto [x0, y0] = data.points.front();
  PlotGuide g1;
  g1.slope = -6.0 / 11.0;
  g1.x0 = x0;
  g1.y0 = y0;
  g1.slope_text = "-6/11";
  g1.label = "slope -6/11";
  PlotGuide g2;
  g2.slope = -2.0 / 3.0;
  g2.x0 = x0;
  g2.y0 = y0;
  g2.slope_text = "-2/3";
  g2.label = "slope -2/3";
  g2.color = "#b08000";
  plot.add_guide(g1);
  plot.add_guide(g2);

  if (data.points.size() >= 3) {
    const ScalingFit fit = fit_scaling(data.points);
    PlotSeries fitted;
    fitted.label = "fit: n^-" + detail::px(fit.exponent);
    fitted.color = "#d1242f";
    fitted.markers = false;
    for (const auto& [x, y] : data.points)
      fitted.points.emplace_back(
          x, std::exp(fit.intercept - fit.exponent * std::log(x)));
    plot.add(fitted);
  }
  plot.add(data);
  return plot.render();
}

inline std::string make_concentration_plot(const std::vector<ResultRow>& rows) {
  PlotSeries empirical, bound;
  empirical.label = "empirical tail";
  empirical.line = false;
  bound.label = "4 exp(-t^2/32)";
  bound.color = "#d1242f";
  bound.markers = false;
  for (const ResultRow& r : rows) {
    const std::optional<std::string> t = detail::param_value(r.params, "t");
    if (!t) continue;
    if (r.observable == "empirical_tail")
      empirical.points.emplace_back(parse_double(*t), r.value);
    else if (r.observable == "concentration_bound")
      bound.points.emplace_back(parse_double(*t), r.value);
  }
  if (empirical.points.empty() || bound.points.empty())
    throw std::runtime_error(
        "concentration plot needs empirical_tail and concentration_bound "
        "rows with a t parameter");
  SvgPlot plot("Spectral-norm concentration", "t", "tail probability", false,
               false);
  plot.add(bound);
  plot.add(empirical);
  return plot.render();
}

// ---------------------------------------------------------------------------

inline RunArtifacts run_experiment(const ExperimentConfig& c,
                                   int threads = 1) {
  validate_config(c);
  const std::string canonical = canonical_config(c);
  const std::string run_id = run_fingerprint(canonical);
  detail::RowSink sink(c.kind, run_id);

  if (c.kind == "exact-vs-mc") run_exact_vs_mc(c, threads, sink);
  else if (c.kind == "moments") run_moments(c, threads, sink);
  else if (c.kind == "variance") run_variance(c, threads, sink);
  else if (c.kind == "lln") run_lln(c, threads, sink);
  else if (c.kind == "concentration") run_concentration(c, threads, sink);
  else if (c.kind == "scaling") run_scaling(c, threads, sink);
  else if (c.kind == "glue-audit") run_glue_audit(c, threads, sink);
  else if (c.kind == "dyck") run_dyck(c, threads, sink);
  else if (c.kind == "bound-chain") run_bound_chain(c, threads, sink);
  else throw ConfigError(0, "unknown experiment kind '" + c.kind + "'");

  RunArtifacts out;
  out.rows = sink.rows;

  nlohmann::ordered_json summary;
  summary["kind"] = c.kind;
  summary["run_id"] = run_id;
  summary["version"] = version_string();
  nlohmann::ordered_json config_echo = nlohmann::ordered_json::object();
  std::istringstream lines(canonical);
  std::string line;
  while (std::getline(lines, line)) {
    const std::size_t eq = line.find(" = ");
    if (eq != std::string::npos)
      config_echo[line.substr(0, eq)] = line.substr(eq + 3);
  }
  summary["config"] = config_echo;
  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (const ResultRow& r : out.rows) {
    nlohmann::ordered_json row;
    row["observable"] = r.observable;
    row["params"] = r.params;
    row["value"] = r.value;
    if (r.std_error) row["stderr"] = *r.std_error;
    else row["stderr"] = nullptr;
    row["trials"] = r.trials;
    results.push_back(std::move(row));
  }
  summary["results"] = std::move(results);
  out.summary = std::move(summary);

  if (c.kind == "scaling")
    out.plots.emplace_back("scaling.svg", make_scaling_plot(out.rows));
  else if (c.kind == "concentration")
    out.plots.emplace_back("concentration.svg",
                           make_concentration_plot(out.rows));
  return out;
}

}  // namespace wignerlab

#endif
