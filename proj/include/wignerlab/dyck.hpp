#ifndef WIGNERLAB_DYCK_HPP
#define WIGNERLAB_DYCK_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "wignerlab/paths.hpp"
#include "wignerlab/rng.hpp"

// Dyck-path side of the combinatorics: uniform sampling via the cycle lemma,
// the marked-moment statistic (how many times of a trajectory see no dip
// below their level within a window), and exact Catalan numbers.

namespace wignerlab {

struct DyckProfile {
  std::vector<int> x;  // trajectory x(0..L), x(0) = 0, steps +-1
  int window = 0;      // marked-moment window length

  DyckProfile() = default;
  DyckProfile(std::vector<int> x_, int window_)
      : x(std::move(x_)), window(window_) {
    if (x.empty() || x.front() != 0)
      throw std::invalid_argument("trajectory must start at x(0) = 0");
    for (std::size_t t = 1; t < x.size(); ++t)
      if (x[t] - x[t - 1] != 1 && x[t] - x[t - 1] != -1)
        throw std::invalid_argument("trajectory steps must be +-1");
    if (window < 0) throw std::invalid_argument("window must be >= 0");
  }

  int steps() const { return static_cast<int>(x.size()) - 1; }
};

// Uniform Dyck path of the given semilength: shuffle m up-steps and m+1
// down-steps, rotate to start right after the first minimum of the prefix
// sums, drop the final down-step (cycle lemma: exactly one rotation of each
// sequence is nonnegative until the last step, so the result is uniform).
inline DyckProfile uniform_dyck_path(int semilength, int window,
                                     std::uint64_t seed) {
  if (semilength < 1)
    throw std::invalid_argument("semilength must be >= 1");
  const int total = 2 * semilength + 1;
  std::vector<int> steps(total, -1);
  std::fill(steps.begin(), steps.begin() + semilength, 1);
  SplitMix rng(seed);
  for (int i = total - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(i + 1));
    std::swap(steps[i], steps[j]);
  }
  int sum = 0, lowest = 0, first_min = 0;
  for (int i = 0; i < total; ++i) {
    sum += steps[i];
    if (sum < lowest) {
      lowest = sum;
      first_min = i + 1;
    }
  }
  std::vector<int> x;
  x.reserve(2 * semilength + 1);
  x.push_back(0);
  for (int i = 0; i < total - 1; ++i)
    x.push_back(x.back() + steps[(first_min + i) % total]);
  return DyckProfile(std::move(x), window);
}

// Number of times t in [0, L] such that the trajectory never descends below
// x(t) during (t, t + window], the window truncated at the path end (an empty
// window qualifies). Sliding-window minima via a monotone deque, O(L).
inline long long marked_moment_count(const DyckProfile& profile) {
  const int L = profile.steps();
  const int w = profile.window;
  long long count = 0;
  std::deque<int> q;  // indices into x, values increasing
  for (int t = L; t >= 0; --t) {
    while (!q.empty() && q.front() > t + w) q.pop_front();
    const bool ok = q.empty() || profile.x[q.front()] >= profile.x[t];
    if (ok) ++count;
    if (t > 0) {
      while (!q.empty() && profile.x[q.back()] >= profile.x[t]) q.pop_back();
      q.push_back(t);
    }
  }
  return count;
}

// Exact Catalan numbers via the integer recurrence
// C_{k+1} = C_k (4k+2)/(k+2); C_68 still fits in 128 bits.
inline constexpr int kMaxCatalanIndex = 68;

inline unsigned __int128 catalan_exact(int s) {
  if (s < 0 || s > kMaxCatalanIndex)
    throw std::invalid_argument("catalan_exact supports 0 <= s <= " +
                                std::to_string(kMaxCatalanIndex));
  unsigned __int128 c = 1;
  for (int k = 0; k < s; ++k) c = c * (4 * k + 2) / (k + 2);
  return c;
}

inline std::string catalan_string(int s) {
  unsigned __int128 c = catalan_exact(s);
  if (c == 0) return "0";
  std::string out;
  while (c > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(c % 10)));
    c /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Catalan numbers the slow way: backtracking enumeration of every Dyck path.
// The independent oracle for the recurrence and for semicircle moments.
inline std::uint64_t count_dyck_paths_enumerated(int semilength) {
  if (semilength < 0) throw std::invalid_argument("semilength must be >= 0");
  if (semilength > 14)
    throw BudgetError(
        "enumerating Dyck paths of semilength " + std::to_string(semilength) +
        " visits too many prefixes; the oracle is capped at 14");
  if (semilength == 0) return 1;
  std::uint64_t count = 0;
  const int total = 2 * semilength;
  auto rec = [&](auto&& self, int position, int height) -> void {
    if (position == total) {
      ++count;  // pruning below guarantees height == 0 here
      return;
    }
    if (height + 1 <= total - position - 1)
      self(self, position + 1, height + 1);
    if (height > 0) self(self, position + 1, height - 1);
  };
  rec(rec, 0, 0);
  return count;
}

}  // namespace wignerlab

#endif
