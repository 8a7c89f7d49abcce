#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dpp {

// Deterministic random source. A run owns one root seed; independent named
// substreams (encoder, init, sampling, batching) are derived from it so that
// consuming draws in one stream never shifts another. Uniform and normal
// variates are generated by hand (not via std::*_distribution) so sequences
// are bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Derived generator for a named stream. Depends only on the root seed and
  // the label, never on how much this generator has been consumed.
  Rng stream(std::string_view label) const;

  std::uint64_t next_u64();
  double uniform();                  // [0, 1)
  double uniform(double a, double b);
  double normal();                   // standard normal, Box-Muller
  std::uint64_t uniform_index(std::uint64_t n);  // [0, n), unbiased

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

  // Random subset of {0,...,n-1} of size k, in permutation order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 gen_;
  std::uint64_t root_seed_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace dpp
