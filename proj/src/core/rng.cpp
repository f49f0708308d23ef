#include "cvnn/core/rng.hpp"

#include <cmath>

#include "cvnn/core/errors.hpp"

namespace cvnn {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

Rng Rng::stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = seed;
  std::uint64_t key = splitmix64(state);
  for (std::uint64_t id : path) {
    std::uint64_t mixed = key ^ (id + 0x632BE59BD9B4E019ull);
    key = splitmix64(mixed);
  }
  return Rng(key);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

ComplexTensor sample_circular_gaussian(Rng& rng, const Shape& shape, double sigma) {
  if (!(sigma >= 0.0)) throw ArgumentError("sample_circular_gaussian: sigma must be >= 0");
  ComplexTensor out(shape);
  const double s = sigma / std::sqrt(2.0);
  for (CScalar& z : out.data()) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = CScalar(s * re, s * im);
  }
  return out;
}

ComplexTensor sample_real_gaussian(Rng& rng, const Shape& shape, double sigma) {
  if (!(sigma >= 0.0)) throw ArgumentError("sample_real_gaussian: sigma must be >= 0");
  ComplexTensor out(shape);
  for (CScalar& z : out.data()) z = CScalar(sigma * rng.normal(), 0.0);
  return out;
}

}  // namespace cvnn
