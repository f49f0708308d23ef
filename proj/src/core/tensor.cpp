#include "cvnn/core/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cvnn/core/errors.hpp"
#include "cvnn/kernels/gemm.hpp"

namespace cvnn {

std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

ComplexTensor::ComplexTensor(Shape shape)
    : shape_(std::move(shape)), data_(shape_size(shape_)) {}

ComplexTensor::ComplexTensor(Shape shape, std::vector<CScalar> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != shape_size(shape_)) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string(shape_));
  }
}

ComplexTensor ComplexTensor::scalar(CScalar value) { return ComplexTensor(Shape{}, {value}); }

ComplexTensor ComplexTensor::vector(std::vector<CScalar> values) {
  const std::size_t n = values.size();
  return ComplexTensor(Shape{n}, std::move(values));
}

ComplexTensor ComplexTensor::matrix(std::size_t rows, std::size_t cols,
                                    std::vector<CScalar> values) {
  return ComplexTensor(Shape{rows, cols}, std::move(values));
}

std::size_t ComplexTensor::rows() const noexcept {
  return shape_.empty() ? 1 : shape_[0];
}

std::size_t ComplexTensor::cols() const noexcept {
  if (shape_.size() < 2) return 1;
  std::size_t c = 1;
  for (std::size_t i = 1; i < shape_.size(); ++i) c *= shape_[i];
  return c;
}

ComplexTensor ComplexTensor::reshaped(Shape shape) const {
  if (shape_size(shape) != data_.size()) {
    throw DimensionError("cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
  }
  return ComplexTensor(std::move(shape), data_);
}

Polar abs_arg(CScalar z) {
  if (z == CScalar{}) return {0.0, 0.0};
  double phase = std::atan2(z.imag(), z.real());
  if (phase == -std::numbers::pi) phase = std::numbers::pi;
  return {std::hypot(z.real(), z.imag()), phase};
}

namespace {

void require_same_shape(const ComplexTensor& a, const ComplexTensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) +
                         " vs " + shape_string(b.shape()));
  }
}

template <class F>
ComplexTensor map(const ComplexTensor& t, F f) {
  ComplexTensor out(t.shape());
  auto src = t.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = f(src[i]);
  return out;
}

template <class F>
ComplexTensor zip(const ComplexTensor& a, const ComplexTensor& b, const char* op, F f) {
  require_same_shape(a, b, op);
  ComplexTensor out(a.shape());
  auto x = a.data();
  auto y = b.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) dst[i] = f(x[i], y[i]);
  return out;
}

}  // namespace

ComplexTensor conj(const ComplexTensor& t) {
  return map(t, [](CScalar z) { return std::conj(z); });
}

ComplexTensor real_part(const ComplexTensor& t) {
  return map(t, [](CScalar z) { return CScalar(z.real(), 0.0); });
}

ComplexTensor add(const ComplexTensor& a, const ComplexTensor& b) {
  return zip(a, b, "add", [](CScalar x, CScalar y) { return x + y; });
}

ComplexTensor sub(const ComplexTensor& a, const ComplexTensor& b) {
  return zip(a, b, "sub", [](CScalar x, CScalar y) { return x - y; });
}

ComplexTensor hadamard(const ComplexTensor& a, const ComplexTensor& b) {
  return zip(a, b, "hadamard", [](CScalar x, CScalar y) { return kernels::cmul(x, y); });
}

ComplexTensor scale(const ComplexTensor& t, CScalar s) {
  return map(t, [s](CScalar z) { return kernels::cmul(z, s); });
}

ComplexTensor matmul(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.rank() != 2 || (b.rank() != 1 && b.rank() != 2) || a.cols() != b.rows()) {
    throw DimensionError("matmul: incompatible shapes " + shape_string(a.shape()) + " and " +
                         shape_string(b.shape()));
  }
  Shape out_shape = b.rank() == 1 ? Shape{a.rows()} : Shape{a.rows(), b.cols()};
  ComplexTensor out(std::move(out_shape));
  kernels::gemm(kernels::Op::None, {a.data(), a.rows(), a.cols()}, kernels::Op::None,
                {b.data(), b.rows(), b.cols()}, out.data());
  return out;
}

ComplexTensor transpose(const ComplexTensor& t) {
  if (t.rank() != 2) throw DimensionError("transpose: expected a matrix, got " + shape_string(t.shape()));
  ComplexTensor out(Shape{t.cols(), t.rows()});
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) out(c, r) = t(r, c);
  return out;
}

bool all_finite(const ComplexTensor& t) {
  return std::all_of(t.data().begin(), t.data().end(), [](CScalar z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

double max_abs(const ComplexTensor& t) {
  double m = 0.0;
  for (CScalar z : t.data()) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_imag(const ComplexTensor& t) {
  double m = 0.0;
  for (CScalar z : t.data()) m = std::max(m, std::abs(z.imag()));
  return m;
}

double max_abs_diff(const ComplexTensor& a, const ComplexTensor& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sum_abs2(const ComplexTensor& t) {
  double s = 0.0;
  for (CScalar z : t.data()) s += z.real() * z.real() + z.imag() * z.imag();
  return s;
}

}  // namespace cvnn
