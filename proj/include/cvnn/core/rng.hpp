#pragma once

#include <cstdint>
#include <initializer_list>

#include "cvnn/core/tensor.hpp"

namespace cvnn {

// xoshiro256** seeded through splitmix64. Integer output is identical on
// every platform; normals use the Marsaglia polar method.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream keyed by (seed, path...). Used wherever work is
  // split across observations or trials so that parallel execution does not
  // change results.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();
  double uniform();  // [0, 1) with 53 random bits
  double uniform(double lo, double hi);
  double log_uniform(double lo, double hi);
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

// Independent re, im ~ N(0, sigma^2 / 2), so E|z|^2 = sigma^2.
ComplexTensor sample_circular_gaussian(Rng& rng, const Shape& shape, double sigma);

// Real entries ~ N(0, sigma^2), zero imaginary parts.
ComplexTensor sample_real_gaussian(Rng& rng, const Shape& shape, double sigma);

}  // namespace cvnn
