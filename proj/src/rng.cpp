#include "dpp/rng.hpp"

#include <cmath>
#include <numbers>

namespace dpp {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::mt19937_64 make_engine(std::uint64_t seed) {
  // Warm the 64-bit Mersenne twister from a splitmix sequence; a raw seed of
  // small Hamming weight would otherwise produce correlated early output.
  std::uint64_t s = seed;
  std::seed_seq seq{static_cast<unsigned>(splitmix64(s) >> 32),
                    static_cast<unsigned>(splitmix64(s)),
                    static_cast<unsigned>(splitmix64(s) >> 32),
                    static_cast<unsigned>(splitmix64(s))};
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : gen_(make_engine(seed)), root_seed_(seed) {}

Rng Rng::stream(std::string_view label) const {
  std::uint64_t s = root_seed_ ^ fnv1a(label);
  return Rng(splitmix64(s));
}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
  // 53 random bits into [0,1); exact dyadic rationals, identical everywhere.
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = 1.0 - uniform();  // (0,1], keeps the log finite
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(t);
  has_cached_normal_ = true;
  return r * std::cos(t);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection sampling removes modulo bias entirely.
  std::uint64_t x, r;
  do {
    x = next_u64();
    r = x % n;
  } while (x - r > std::uint64_t(-1) - (n - 1));
  return r;
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  shuffle(idx);
  if (k < n) idx.resize(k);
  return idx;
}

}  // namespace dpp
