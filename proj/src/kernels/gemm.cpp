#include "cvnn/kernels/gemm.hpp"

#include <algorithm>
#include <cstdint>

#include "cvnn/core/errors.hpp"

namespace cvnn::kernels {

namespace {

struct Dims {
  std::size_t m, n, k;
};

Dims check(Op op_a, const MatrixRef& a, Op op_b, const MatrixRef& b, std::size_t c_size) {
  const std::size_t m = op_a == Op::None ? a.rows : a.cols;
  const std::size_t ka = op_a == Op::None ? a.cols : a.rows;
  const std::size_t kb = op_b == Op::None ? b.rows : b.cols;
  const std::size_t n = op_b == Op::None ? b.cols : b.rows;
  if (ka != kb || a.data.size() != a.rows * a.cols || b.data.size() != b.rows * b.cols ||
      c_size != m * n) {
    throw DimensionError("gemm: incompatible operands " + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols) + " and " + std::to_string(b.rows) + "x" +
                         std::to_string(b.cols));
  }
  return {m, n, ka};
}

inline CScalar load(Op op, const MatrixRef& x, std::size_t r, std::size_t c) {
  // Element (r, c) of op(x).
  return op == Op::None ? x.data[r * x.cols + c] : std::conj(x.data[c * x.cols + r]);
}

}  // namespace

void gemm(Op op_a, MatrixRef a, Op op_b, MatrixRef b, std::span<CScalar> c) {
  const auto [m, n, k] = check(op_a, a, op_b, b, c.size());
  const auto rows = static_cast<std::int64_t>(m);
  CScalar* out = c.data();

  if (op_b == Op::ConjTrans) {
    // Rows of op(a) against rows of b: both contiguous when op_a is None.
#pragma omp parallel for schedule(static)
    for (std::int64_t ii = 0; ii < rows; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      for (std::size_t j = 0; j < n; ++j) {
        const CScalar* brow = b.data.data() + j * b.cols;
        CScalar acc{};
        for (std::size_t p = 0; p < k; ++p) cmac(acc, load(op_a, a, i, p), std::conj(brow[p]));
        out[i * n + j] = acc;
      }
    }
    return;
  }

#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    CScalar* crow = out + i * n;
    std::fill(crow, crow + n, CScalar{});
    for (std::size_t p = 0; p < k; ++p) {
      const CScalar aip = load(op_a, a, i, p);
      const CScalar* brow = b.data.data() + p * b.cols;
      for (std::size_t j = 0; j < n; ++j) cmac(crow[j], aip, brow[j]);
    }
  }
}

namespace reference {

void gemm(Op op_a, MatrixRef a, Op op_b, MatrixRef b, std::span<CScalar> c) {
  const auto [m, n, k] = check(op_a, a, op_b, b, c.size());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      CScalar acc{};
      for (std::size_t p = 0; p < k; ++p) cmac(acc, load(op_a, a, i, p), load(op_b, b, p, j));
      c[i * n + j] = acc;
    }
  }
}

}  // namespace reference

}  // namespace cvnn::kernels
