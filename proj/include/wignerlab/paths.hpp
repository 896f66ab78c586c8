#ifndef WIGNERLAB_PATHS_HPP
#define WIGNERLAB_PATHS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wignerlab/distribution.hpp"

// Closed paths on the complete graph over {1..n} (loops allowed) and the
// exact sums built on them: E Tr A^{2s} as a sum of per-path expectations and
// Var Tr A^{2s} as a sum over ordered path pairs. Expectations factor over
// the edge multiset because entries above the diagonal are independent.

namespace wignerlab {

// Hard cap on literal enumeration sizes; exceeding it is an error, never a
// silent truncation.
inline constexpr double kEnumerationBudget = 1e8;

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClosedPath {
  int n = 0;               // ambient vertex count
  std::vector<int> v;      // 1-based labels; implicit closing step back to v[0]

  ClosedPath() = default;
  ClosedPath(int n_, std::vector<int> v_) : n(n_), v(std::move(v_)) {
    if (n < 1) throw std::invalid_argument("closed path: vertex count < 1");
    if (v.size() < 2 || v.size() % 2 != 0)
      throw std::invalid_argument(
          "closed path: length must be even and >= 2, got " +
          std::to_string(v.size()));
    for (int x : v)
      if (x < 1 || x > n)
        throw std::invalid_argument("closed path: vertex " +
                                    std::to_string(x) + " outside [1, " +
                                    std::to_string(n) + "]");
  }

  int length() const { return static_cast<int>(v.size()); }

  // Directed steps, including the closing one.
  std::vector<std::pair<int, int>> steps() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
      out.emplace_back(v[k], v[(k + 1) % v.size()]);
    return out;
  }
};

// Unordered edge, normalized to first <= second. Loops are legitimate edges.
using Edge = std::pair<int, int>;

inline Edge make_edge(int u, int w) {
  return u <= w ? Edge{u, w} : Edge{w, u};
}

// Edge multiset as a sorted (edge, count) list; path lengths are tiny, so a
// flat vector beats any hash structure.
using EdgeMultiset = std::vector<std::pair<Edge, int>>;

inline EdgeMultiset edge_multiset(const ClosedPath& p) {
  std::vector<Edge> edges;
  edges.reserve(p.v.size());
  for (std::size_t k = 0; k < p.v.size(); ++k)
    edges.push_back(make_edge(p.v[k], p.v[(k + 1) % p.v.size()]));
  std::sort(edges.begin(), edges.end());
  EdgeMultiset ms;
  for (const Edge& e : edges) {
    if (!ms.empty() && ms.back().first == e)
      ++ms.back().second;
    else
      ms.emplace_back(e, 1);
  }
  return ms;
}

inline EdgeMultiset merge(const EdgeMultiset& x, const EdgeMultiset& y) {
  EdgeMultiset out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first))
      out.push_back(x[i++]);
    else if (i == x.size() || y[j].first < x[i].first)
      out.push_back(y[j++]);
    else {
      out.emplace_back(x[i].first, x[i].second + y[j].second);
      ++i, ++j;
    }
  }
  return out;
}

inline bool multiset_contains(const EdgeMultiset& ms, const Edge& e) {
  auto it = std::lower_bound(
      ms.begin(), ms.end(), e,
      [](const std::pair<Edge, int>& a, const Edge& b) { return a.first < b; });
  return it != ms.end() && it->first == e;
}

inline int multiplicity_of(const EdgeMultiset& ms, const Edge& e) {
  auto it = std::lower_bound(
      ms.begin(), ms.end(), e,
      [](const std::pair<Edge, int>& a, const Edge& b) { return a.first < b; });
  return (it != ms.end() && it->first == e) ? it->second : 0;
}

inline double expectation_of_multiset(const EdgeMultiset& ms,
                                      const EntryDistribution& d) {
  double prod = 1.0;
  for (const auto& [e, count] : ms) {
    prod *= moment_of(d, count);
    if (prod == 0.0) return 0.0;
  }
  return prod;
}

// E prod a_e over the path's edges; no 1/sqrt(n) scaling here (callers own
// the n^{-s} factor). Vanishes whenever some edge appears exactly once.
inline double path_expectation(const ClosedPath& p,
                               const EntryDistribution& d) {
  return expectation_of_multiset(edge_multiset(p), d);
}

// Streams all n^{two_s} vertex sequences in lexicographic order.
class PathStream {
 public:
  PathStream(int n, int two_s, double budget = kEnumerationBudget)
      : n_(n), two_s_(two_s) {
    if (n < 1 || two_s < 2 || two_s % 2 != 0)
      throw std::invalid_argument("path stream needs n >= 1, even length >= 2");
    const double count = std::pow(static_cast<double>(n), two_s);
    if (count > budget)
      throw BudgetError("enumerating n^{2s} = " + format_double(count) +
                        " closed paths (n = " + std::to_string(n) +
                        ", 2s = " + std::to_string(two_s) +
                        ") exceeds the budget of " + format_double(budget));
    total_ = static_cast<std::uint64_t>(count + 0.5);
    digits_.assign(two_s, 1);
  }

  std::uint64_t total() const { return total_; }

  bool next(ClosedPath& out) {
    if (done_) return false;
    out = ClosedPath(n_, digits_);
    // lexicographic odometer over {1..n}^{2s}
    int k = two_s_ - 1;
    while (k >= 0 && digits_[k] == n_) digits_[k--] = 1;
    if (k < 0)
      done_ = true;
    else
      ++digits_[k];
    return true;
  }

 private:
  int n_, two_s_;
  std::uint64_t total_ = 0;
  std::vector<int> digits_;
  bool done_ = false;
};

inline std::vector<ClosedPath> all_closed_paths(
    int n, int two_s, double budget = kEnumerationBudget) {
  PathStream stream(n, two_s, budget);
  std::vector<ClosedPath> out;
  out.reserve(stream.total());
  ClosedPath p;
  while (stream.next(p)) out.push_back(p);
  return out;
}

namespace detail {

// Enumerates restricted growth strings r[0..L-1] (r[0] = 0, each next value
// at most one above the running maximum): the canonical relabelings of vertex
// sequences by first appearance. Bell(L) strings in total.
template <typename Fn>
void for_each_pattern(int length, Fn&& fn) {
  std::vector<int> r(length, 0);
  auto rec = [&](auto&& self, int k, int mx) -> void {
    if (k == length) {
      fn(r, mx + 1);
      return;
    }
    for (int val = 0; val <= mx + 1; ++val) {
      r[k] = val;
      self(self, k + 1, std::max(mx, val));
    }
  };
  rec(rec, 1, 0);
}

inline double falling_factorial(int n, int v) {
  double prod = 1.0;
  for (int i = 0; i < v; ++i) prod *= static_cast<double>(n - i);
  return prod;
}

inline EdgeMultiset pattern_multiset(const std::vector<int>& r) {
  std::vector<Edge> edges;
  edges.reserve(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) {
    int u = r[k] + 1, w = r[(k + 1) % r.size()] + 1;
    edges.push_back(make_edge(u, w));
  }
  std::sort(edges.begin(), edges.end());
  EdgeMultiset ms;
  for (const Edge& e : edges) {
    if (!ms.empty() && ms.back().first == e)
      ++ms.back().second;
    else
      ms.emplace_back(e, 1);
  }
  return ms;
}

}  // namespace detail

// Pattern enumeration is capped by Bell(2s): 12 steps mean 4,213,597 patterns.
inline constexpr int kMaxPatternLength = 12;

// n^{-s} * sum over all closed paths of path_expectation. The sum is grouped
// by canonical pattern: paths sharing a pattern share their expectation, and
// a pattern on v distinct labels is realized by n(n-1)...(n-v+1) paths. This
// replaces the n^{2s}-term sum by a Bell(2s)-term one; values agree with the
// literal sum to floating reassociation.
inline double exact_trace_moment(int n, int s, const EntryDistribution& d) {
  if (n < 1 || s < 1)
    throw std::invalid_argument("exact_trace_moment needs n >= 1, s >= 1");
  const int length = 2 * s;
  if (length > kMaxPatternLength)
    throw BudgetError(
        "exact trace moment at 2s = " + std::to_string(length) +
        " needs more than Bell(" + std::to_string(kMaxPatternLength) +
        ") = 4213597 patterns; raise kMaxPatternLength only with a budget");
  double total = 0.0;
  detail::for_each_pattern(length, [&](const std::vector<int>& r, int v) {
    if (v > n) return;
    const double e = expectation_of_multiset(detail::pattern_multiset(r), d);
    if (e != 0.0) total += e * detail::falling_factorial(n, v);
  });
  return total * std::pow(static_cast<double>(n), -s);
}

// Literal path-by-path evaluation of the same sum; the cross-check route.
inline double exact_trace_moment_enumerated(
    int n, int s, const EntryDistribution& d,
    double budget = kEnumerationBudget) {
  PathStream stream(n, 2 * s, budget);
  double total = 0.0;
  ClosedPath p;
  while (stream.next(p)) total += path_expectation(p, d);
  return total * std::pow(static_cast<double>(n), -s);
}

enum class VarianceSum {
  full,             // all ordered pairs
  correlated_only,  // pairs sharing an edge with all union multiplicities >= 2
};

// Whether the ordered pair is correlated: (i) at least one common edge and
// (ii) every edge of the union appears at least twice in the union.
inline bool correlated_multisets(const EdgeMultiset& m1,
                                 const EdgeMultiset& m2) {
  bool shared = false;
  for (const auto& [e, count] : m1)
    if (multiset_contains(m2, e)) {
      shared = true;
      break;
    }
  if (!shared) return false;
  for (const auto& [e, count] : m1)
    if (count + multiplicity_of(m2, e) < 2) return false;
  for (const auto& [e, count] : m2)
    if (count + multiplicity_of(m1, e) < 2) return false;
  return true;
}

// n^{-2s} * sum over ordered pairs (P1, P2) of
// E[prod over union] - E[P1] E[P2]. Restricting to correlated pairs drops
// only terms that are exactly zero (independence plus centering), so both
// modes must agree.
inline double exact_variance(int n, int s, const EntryDistribution& d,
                             VarianceSum mode = VarianceSum::correlated_only) {
  if (n < 1 || s < 1)
    throw std::invalid_argument("exact_variance needs n >= 1, s >= 1");
  const double pair_count = std::pow(static_cast<double>(n), 4 * s);
  if (pair_count > kEnumerationBudget)
    throw BudgetError("variance sum over n^{4s} = " +
                      format_double(pair_count) +
                      " ordered path pairs exceeds the budget of " +
                      format_double(kEnumerationBudget));
  const std::vector<ClosedPath> paths = all_closed_paths(n, 2 * s);
  std::vector<EdgeMultiset> multisets;
  std::vector<double> expectations;
  multisets.reserve(paths.size());
  expectations.reserve(paths.size());
  for (const ClosedPath& p : paths) {
    multisets.push_back(edge_multiset(p));
    expectations.push_back(expectation_of_multiset(multisets.back(), d));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = 0; j < paths.size(); ++j) {
      if (mode == VarianceSum::correlated_only &&
          !correlated_multisets(multisets[i], multisets[j]))
        continue;
      const double joint =
          expectation_of_multiset(merge(multisets[i], multisets[j]), d);
      total += joint - expectations[i] * expectations[j];
    }
  }
  return total * std::pow(static_cast<double>(n), -2 * s);
}

}  // namespace wignerlab

#endif
