#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace hawkesdp {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Child seed for a (master seed, index path) pair. Replicates and sweep grid
// cells each derive their own stream so runs are reproducible and can execute
// in any order or in parallel.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = master;
  std::uint64_t out = splitmix64(s);
  for (std::uint64_t x : path) {
    s ^= x + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    out = splitmix64(s);
  }
  return out;
}

// Seeded random source, passed explicitly to every stochastic operation.
// Gaussian and exponential variates are generated from 53-bit uniforms with
// fixed formulas so streams do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on (0, 1]; never returns 0, so logs are safe.
  double uniform() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.
  double normal() {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace hawkesdp
