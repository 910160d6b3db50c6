#pragma once

#include <cstdint>
#include <span>

namespace bbopt {

// Deterministic random stream used by every attack.
//
// Generator: xoshiro256** (Blackman & Vigna), state seeded from the 64-bit
// seed by four successive splitmix64 outputs. Derived draws:
//   uniform()      (next() >> 11) * 2^-53, in [0, 1)
//   uniform_int(n) unbiased rejection on next() (threshold 2^64 mod n)
//   normal()       Box-Muller on two uniforms, cosine branch only (one
//                  normal per pair of uniforms, no caching)
//   sign()         +1 if the top bit of next() is set, else -1
// These definitions are fixed so traces can be reproduced bit-for-bit by
// other implementations (modulo libm rounding in log/cos for normal()).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next();
  double uniform();
  std::uint64_t uniform_int(std::uint64_t n);
  double normal();
  int sign();

  void fill_normal(std::span<double> out);

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace bbopt
