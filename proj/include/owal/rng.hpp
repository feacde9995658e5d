#pragma once

#include <cstdint>
#include <string_view>

namespace owal {

// Deterministic, platform-independent randomness. All stochastic behaviour in
// the library flows through this generator so that runs are reproducible
// bit-for-bit regardless of standard-library distribution internals.

constexpr std::uint64_t splitmix_finalize(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_str(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix_finalize(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

constexpr std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(a, b), c);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix_finalize(seed)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Box-Muller; one draw per call, two uniforms consumed.
  double normal(double mean, double sigma);

  // Knuth's product method; adequate for the small means used here.
  int poisson(double mean);

  // Beta(a, b) for small integer a, b via the order-statistic identity:
  // the a-th smallest of a+b-1 iid uniforms.
  double beta_int(int a, int b);

 private:
  std::uint64_t state_;
};

}  // namespace owal
