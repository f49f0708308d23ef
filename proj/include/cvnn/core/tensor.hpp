#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cvnn {

using CScalar = std::complex<double>;
using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);
std::size_t shape_size(const Shape& shape);

/// Dense row-major array of complex doubles.
///
/// The shape is fixed at construction; element values are mutable so that
/// parameters can be updated in place. Rank 0 holds a single scalar, rank 1 a
/// vector and rank 2 a matrix (rows x cols). A rank-1 tensor behaves as a
/// column wherever a matrix is expected.
class ComplexTensor {
 public:
  ComplexTensor() = default;
  explicit ComplexTensor(Shape shape);
  ComplexTensor(Shape shape, std::vector<CScalar> data);

  static ComplexTensor scalar(CScalar value);
  static ComplexTensor vector(std::vector<CScalar> values);
  static ComplexTensor matrix(std::size_t rows, std::size_t cols,
                              std::vector<CScalar> values);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  // Matrix view: rank 1 is n x 1, rank 0 is 1 x 1.
  std::size_t rows() const noexcept;
  std::size_t cols() const noexcept;

  std::span<CScalar> data() noexcept { return data_; }
  std::span<const CScalar> data() const noexcept { return data_; }

  CScalar& operator[](std::size_t i) { return data_[i]; }
  const CScalar& operator[](std::size_t i) const { return data_[i]; }
  CScalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  const CScalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  ComplexTensor reshaped(Shape shape) const;

  // Exact elementwise comparison (bitwise for finite values).
  friend bool operator==(const ComplexTensor& a, const ComplexTensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_{0};
  std::vector<CScalar> data_;
};

struct Polar {
  double magnitude;
  double phase;  // in (-pi, pi]
};

// abs_arg(0) = (0, 0).
Polar abs_arg(CScalar z);

ComplexTensor conj(const ComplexTensor& t);
ComplexTensor real_part(const ComplexTensor& t);
ComplexTensor add(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor sub(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor hadamard(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor scale(const ComplexTensor& t, CScalar s);

// Standard matrix product. b may be rank 1 (treated as a column), in which
// case the result is rank 1.
ComplexTensor matmul(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor transpose(const ComplexTensor& t);

bool all_finite(const ComplexTensor& t);
double max_abs(const ComplexTensor& t);
double max_abs_imag(const ComplexTensor& t);
double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b);
double sum_abs2(const ComplexTensor& t);

}  // namespace cvnn
