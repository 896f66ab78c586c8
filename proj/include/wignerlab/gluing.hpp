#ifndef WIGNERLAB_GLUING_HPP
#define WIGNERLAB_GLUING_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wignerlab/paths.hpp"

// The gluing map: an ordered correlated pair (P1, P2) of closed paths of
// length 2s merges into one closed path of length 4s-2 by rerouting P1's
// first traversal of the joint edge through all of P2's other edges. The
// joint edge loses exactly two traversals; everything else is preserved.

namespace wignerlab {

struct PathPair {
  ClosedPath p1, p2;
  bool correlated = false;
  bool has_joint = false;
  Edge joint{0, 0};    // valid iff has_joint
  int joint_pos1 = -1; // step index of the joint edge's first traversal in p1
};

// Fills the correlated flag and the joint edge: the first edge along p1 that
// also belongs to p2. Correlation additionally needs every union edge to
// appear at least twice in the union.
inline PathPair classify_pair(const ClosedPath& p1, const ClosedPath& p2) {
  if (p1.length() != p2.length())
    throw std::invalid_argument("classify_pair: lengths differ (" +
                                std::to_string(p1.length()) + " vs " +
                                std::to_string(p2.length()) + ")");
  if (p1.n != p2.n)
    throw std::invalid_argument("classify_pair: ambient vertex counts differ");
  PathPair pair;
  pair.p1 = p1;
  pair.p2 = p2;
  const EdgeMultiset m1 = edge_multiset(p1);
  const EdgeMultiset m2 = edge_multiset(p2);
  for (int k = 0; k < p1.length(); ++k) {
    const Edge e = make_edge(p1.v[k], p1.v[(k + 1) % p1.length()]);
    if (multiset_contains(m2, e)) {
      pair.has_joint = true;
      pair.joint = e;
      pair.joint_pos1 = k;
      break;
    }
  }
  pair.correlated = pair.has_joint && correlated_multisets(m1, m2);
  return pair;
}

struct GlueResult {
  ClosedPath path;
  Edge joint{0, 0};
  int switch_time = -1;       // arrival at the joint edge's departure endpoint
  int switch_back_time = -1;  // arrival at its other endpoint, 2s-1 steps later
};

// Builds P1 v P2. Walk p1 to its first traversal of the joint edge; at the
// departure endpoint switch to p2 and take its 2s-1 non-joint steps (in p2's
// own direction when the two traversals of the joint edge are opposed,
// against it when they coincide), landing at the arrival endpoint; finish p1.
// The anchor in p2 is the joint edge's first occurrence along p2.
inline GlueResult glue_detailed(const PathPair& pair) {
  if (!pair.correlated)
    throw std::invalid_argument("glue: pair is not correlated");
  const int len = pair.p1.length();  // 2s
  const int k = pair.joint_pos1;
  const int left = pair.p1.v[k];
  const int right = pair.p1.v[(k + 1) % len];

  int j = -1;  // first occurrence of the joint edge along p2
  for (int step = 0; step < len; ++step) {
    if (make_edge(pair.p2.v[step], pair.p2.v[(step + 1) % len]) == pair.joint) {
      j = step;
      break;
    }
  }
  if (j < 0) throw std::logic_error("glue: joint edge missing from p2");

  std::vector<int> out;
  out.reserve(2 * len - 2);
  for (int t = 0; t <= k; ++t) out.push_back(pair.p1.v[t]);

  const bool same_direction =
      pair.p2.v[j] == left && pair.p2.v[(j + 1) % len] == right;
  if (same_direction) {
    // against p2: from p2.v[j] backwards, 2s-1 steps, ending at p2.v[j+1]
    for (int t = 1; t < len; ++t)
      out.push_back(pair.p2.v[((j - t) % len + len) % len]);
  } else {
    // along p2: from p2.v[j+1] forwards, 2s-1 steps, ending at p2.v[j]
    for (int t = 1; t < len; ++t)
      out.push_back(pair.p2.v[(j + 1 + t) % len]);
  }

  for (int t = k + 2; t < len; ++t) out.push_back(pair.p1.v[t]);

  GlueResult res;
  res.path = ClosedPath(pair.p1.n, std::move(out));
  res.joint = pair.joint;
  res.switch_time = k;
  res.switch_back_time = k + len - 1;
  return res;
}

inline ClosedPath glue(const PathPair& pair) {
  return glue_detailed(pair).path;
}

// All correlated ordered pairs of length-2s paths over {1..universe} whose
// glue equals the given path. Exhaustive; the combinatorial bound on the
// result is 8s^2.
inline std::vector<PathPair> preimages(const ClosedPath& glued, int s,
                                       int universe,
                                       double budget = kEnumerationBudget) {
  if (s < 1) throw std::invalid_argument("preimages: s must be >= 1");
  const double single = std::pow(static_cast<double>(universe), 2 * s);
  if (single * single > budget)
    throw BudgetError("preimage search over n^{4s} = " +
                      format_double(single * single) +
                      " ordered pairs exceeds the budget of " +
                      format_double(budget));
  const std::vector<ClosedPath> paths = all_closed_paths(universe, 2 * s);
  std::vector<PathPair> found;
  for (const ClosedPath& p1 : paths) {
    for (const ClosedPath& p2 : paths) {
      PathPair pair = classify_pair(p1, p2);
      if (!pair.correlated) continue;
      if (glue(pair).v == glued.v) found.push_back(std::move(pair));
    }
  }
  return found;
}

// P3: re-inserts two successive traversals of the joint edge at the recorded
// switch-back moment t, lifting a length 4s-2 path with a single joint edge
// to a length 4s path where that edge appears three times.
inline ClosedPath augment_glued(const ClosedPath& glued, const Edge& joint,
                                int t) {
  const EdgeMultiset ms = edge_multiset(glued);
  if (multiplicity_of(ms, joint) != 1)
    throw std::invalid_argument(
        "augment_glued: joint edge must appear exactly once in the glued path");
  for (const auto& [e, count] : ms)
    if (count == 1 && !(e == joint))
      throw std::invalid_argument(
          "augment_glued: glued path has a single edge other than the joint");
  const int len = glued.length();
  if (t < 0 || t > len)
    throw std::invalid_argument("augment_glued: time " + std::to_string(t) +
                                " outside [0, " + std::to_string(len) + "]");
  const int here = glued.v[t % len];
  if (here != joint.first && here != joint.second)
    throw std::invalid_argument(
        "augment_glued: path is not at an endpoint of the joint edge at time " +
        std::to_string(t));
  const int other = (here == joint.first) ? joint.second : joint.first;

  std::vector<int> out;
  out.reserve(len + 2);
  if (t == len) {
    // Insertion at the closing moment: ... -> v[0] -> other -> (v[0]).
    out = glued.v;
    out.push_back(glued.v[0]);
    out.push_back(other);
  } else {
    for (int i = 0; i <= t; ++i) out.push_back(glued.v[i]);
    out.push_back(other);
    out.push_back(glued.v[t]);
    for (int i = t + 1; i < len; ++i) out.push_back(glued.v[i]);
  }
  return ClosedPath(glued.n, std::move(out));
}

struct PathStatistics {
  int odd_edge_count = 0;           // edges of odd multiplicity (2l)
  int max_vertex_multiplicity = 0;  // nu: occurrences of the busiest vertex
  int single_edge_count = 0;        // edges of multiplicity exactly 1
  bool is_even_path = false;
};

inline PathStatistics path_statistics(const ClosedPath& p) {
  PathStatistics st;
  for (const auto& [e, count] : edge_multiset(p)) {
    if (count % 2 != 0) ++st.odd_edge_count;
    if (count == 1) ++st.single_edge_count;
  }
  st.is_even_path = st.odd_edge_count == 0;
  std::map<int, int> occurrences;
  for (int x : p.v) ++occurrences[x];
  for (const auto& [vertex, count] : occurrences)
    st.max_vertex_multiplicity = std::max(st.max_vertex_multiplicity, count);
  return st;
}

}  // namespace wignerlab

#endif
