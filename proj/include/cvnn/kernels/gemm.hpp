#pragma once

#include <cstddef>
#include <span>

#include "cvnn/core/tensor.hpp"

namespace cvnn::kernels {

enum class Op { None, ConjTrans };

// Dense operand: row-major storage of a rows x cols matrix.
struct MatrixRef {
  std::span<const CScalar> data;
  std::size_t rows;
  std::size_t cols;
};

// c = op(a) * op(b), overwriting c (rows(op(a)) x cols(op(b))).
// Every output element is accumulated over the inner index in ascending
// order, so the OpenMP kernel and the serial reference agree bitwise.
void gemm(Op op_a, MatrixRef a, Op op_b, MatrixRef b, std::span<CScalar> c);

// acc += a * b with explicit real arithmetic (avoids the slow C99 Annex G
// path std::complex takes for operator*).
inline void cmac(CScalar& acc, CScalar a, CScalar b) {
  const double re = a.real() * b.real() - a.imag() * b.imag();
  const double im = a.real() * b.imag() + a.imag() * b.real();
  acc = CScalar(acc.real() + re, acc.imag() + im);
}

inline CScalar cmul(CScalar a, CScalar b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

namespace reference {

// Naive triple loop, single-threaded.
void gemm(Op op_a, MatrixRef a, Op op_b, MatrixRef b, std::span<CScalar> c);

}  // namespace reference

}  // namespace cvnn::kernels
