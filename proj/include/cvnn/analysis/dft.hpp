#pragma once

#include <vector>

#include "cvnn/core/tensor.hpp"

namespace cvnn::analysis {

/// Bin 0 is DC, bins 1..N/2 positive frequencies, N/2+1..N-1 negative.
struct Spectrum {
  ComplexTensor bins;

  std::size_t size() const { return bins.size(); }
  std::vector<double> magnitude() const;
};

// X[k] = sum_t x[t] exp(-i 2 pi k t / N), direct O(N^2) evaluation,
// parallel over k.
Spectrum dft(const ComplexTensor& x);

// x[t] = (1/N) sum_k X[k] exp(i 2 pi k t / N).
ComplexTensor idft(const Spectrum& spectrum);

namespace reference {

// Single-threaded direct DFT; agrees bitwise with analysis::dft.
Spectrum dft(const ComplexTensor& x);

}  // namespace reference

}  // namespace cvnn::analysis
