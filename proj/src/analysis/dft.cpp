#include "cvnn/analysis/dft.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include "cvnn/core/errors.hpp"
#include "cvnn/kernels/gemm.hpp"

namespace cvnn::analysis {

std::vector<double> Spectrum::magnitude() const {
  std::vector<double> m(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) m[k] = std::abs(bins[k]);
  return m;
}

namespace {

// exp(sign * i 2 pi m / N) for m in [0, N); indexing by (k t) mod N keeps the
// twiddle argument exact.
std::vector<CScalar> twiddles(std::size_t n, double sign) {
  std::vector<CScalar> w(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    w[m] = CScalar(std::cos(a), sign * std::sin(a));
  }
  return w;
}

inline CScalar bin(const ComplexTensor& x, const std::vector<CScalar>& w, std::size_t k) {
  const std::size_t n = x.size();
  CScalar acc{};
  std::size_t idx = 0;  // (k * t) mod n
  for (std::size_t t = 0; t < n; ++t) {
    kernels::cmac(acc, x[t], w[idx]);
    idx += k;
    if (idx >= n) idx -= n;
  }
  return acc;
}

void require_nonempty(const ComplexTensor& x) {
  if (x.size() == 0) throw ArgumentError("dft: empty input");
}

}  // namespace

Spectrum dft(const ComplexTensor& x) {
  require_nonempty(x);
  const std::size_t n = x.size();
  const auto w = twiddles(n, -1.0);
  ComplexTensor out(Shape{n});
  const auto bins = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < bins; ++k) out[static_cast<std::size_t>(k)] = bin(x, w, static_cast<std::size_t>(k));
  return {std::move(out)};
}

ComplexTensor idft(const Spectrum& spectrum) {
  require_nonempty(spectrum.bins);
  const std::size_t n = spectrum.size();
  const auto w = twiddles(n, 1.0);
  ComplexTensor out(Shape{n});
  for (std::size_t t = 0; t < n; ++t) out[t] = bin(spectrum.bins, w, t) / static_cast<double>(n);
  return out;
}

namespace reference {

Spectrum dft(const ComplexTensor& x) {
  require_nonempty(x);
  const std::size_t n = x.size();
  const auto w = twiddles(n, -1.0);
  ComplexTensor out(Shape{n});
  for (std::size_t k = 0; k < n; ++k) out[k] = bin(x, w, k);
  return {std::move(out)};
}

}  // namespace reference

}  // namespace cvnn::analysis
