#ifndef WIGNERLAB_ESTIMATE_HPP
#define WIGNERLAB_ESTIMATE_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wignerlab {

// (count, sum, sum of squares) accumulator. Merging two accumulators with
// disjoint trial ranges gives the same moments as one pass over the union,
// up to floating reassociation.
struct Accumulator {
  long long count = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sumsq += x * x;
  }

  void merge(const Accumulator& other) {
    count += other.count;
    sum += other.sum;
    sumsq += other.sumsq;
  }

  double mean() const {
    if (count < 1) throw std::logic_error("mean of empty accumulator");
    return sum / static_cast<double>(count);
  }

  // Unbiased sample variance.
  double variance() const {
    if (count < 2) throw std::logic_error("variance needs at least 2 samples");
    const double m = mean();
    const double ss = sumsq - static_cast<double>(count) * m * m;
    return std::max(0.0, ss / static_cast<double>(count - 1));
  }

  double std_error() const {
    return std::sqrt(variance() / static_cast<double>(count));
  }
};

struct MomentEstimate {
  std::string observable;
  int n = 0;
  int s = 0;
  std::string distribution;
  std::uint64_t seed = 0;
  long long trials = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  long long failures = 0;
};

}  // namespace wignerlab

#endif
