#ifndef WIGNERLAB_MATRIX_HPP
#define WIGNERLAB_MATRIX_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wignerlab/distribution.hpp"
#include "wignerlab/rng.hpp"

namespace wignerlab {

// Dense symmetric matrix, row-major full storage. Desk scale (n <= ~4000)
// makes packed storage a pointless optimization.
struct SymMatrix {
  int n = 0;
  std::vector<double> a;  // n*n

  SymMatrix() = default;
  explicit SymMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_) {
    if (n_ < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  }

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const {
    return a[static_cast<std::size_t>(i) * n + j];
  }
};

// One realization of the scaled random matrix: entries (i, j) hold a_ij/sqrt(n)
// where the a_ij, i <= j, are i.i.d. draws from the distribution.
struct MatrixSample {
  int n = 0;
  std::uint64_t seed = 0;
  EntryDistribution distribution;
  SymMatrix entries;
};

inline MatrixSample sample_matrix(const EntryDistribution& d, int n,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  MatrixSample m;
  m.n = n;
  m.seed = seed;
  m.distribution = d;
  m.entries = SymMatrix(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double x =
          sample_entry(d, entry_word(seed, static_cast<std::uint32_t>(i),
                                     static_cast<std::uint32_t>(j))) *
          scale;
      m.entries.at(i, j) = x;
      m.entries.at(j, i) = x;
    }
  }
  return m;
}

}  // namespace wignerlab

#endif
