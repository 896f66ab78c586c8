#ifndef WIGNERLAB_RNG_HPP
#define WIGNERLAB_RNG_HPP

#include <cstdint>

// Stateless seeding. Every random quantity in the library is addressed, not
// drawn from a shared stream: trial k of an experiment, entry (i,j) of a
// matrix, step k of a shuffle each obtain their word by pure mixing of
// (seed, address). Any part of a run can therefore be regenerated in
// isolation, and worker count cannot change results.

namespace wignerlab {

// splitmix64 output function (bijective finalizer).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent child seed from (seed, tag).
inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::uint64_t tag) {
  return mix64(seed ^ mix64(tag ^ 0xd1b54a32d192ed03ULL));
}

// Word for the (i, j) entry of the matrix with the given seed, i <= j.
inline constexpr std::uint64_t entry_word(std::uint64_t matrix_seed,
                                          std::uint32_t i, std::uint32_t j) {
  return derive_seed(matrix_seed,
                     (static_cast<std::uint64_t>(i) << 32) | j);
}

// Maps a word to [0, 1) with 53 random bits.
inline constexpr double to_unit(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Sequential splitmix64 stream for shuffles.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  double next_unit() { return to_unit(next()); }

  // Uniform value in [0, n). The multiply-shift map has bias < n/2^64,
  // irrelevant at the array sizes shuffled here.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace wignerlab

#endif
