#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace levylab {

// splitmix64 finalizer; used both as a stream mixer and to expand seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic child-stream derivation: master seed + stream tags.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t h = splitmix64(master ^ 0x8f3ab5c9d02e417bull);
  h = splitmix64(h ^ splitmix64(a));
  h = splitmix64(h ^ splitmix64(b ^ 0x6c62272e07bb0142ull));
  return h;
}

// All randomness in the library flows through this generator.
//
// Engine: std::mt19937_64 seeded with the 64-bit seed directly. Uniforms use
// the top 53 bits mapped to the open interval (0,1); normals use Box-Muller.
// Given the same seed, draws are identical on any IEEE-754 platform with the
// same libm (runs are bit-reproducible per platform).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return gen_(); }

  // Uniform on the open interval (0,1); safe to pass to log().
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53;
  }

  double exponential() { return -std::log(uniform()); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  Rng derive(std::uint64_t a, std::uint64_t b = 0) const {
    return Rng(derive_seed(seed_, a, b));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levylab
