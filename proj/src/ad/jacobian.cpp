#include "cvnn/ad/jacobian.hpp"

#include <algorithm>
#include <string>

#include "cvnn/core/errors.hpp"

namespace cvnn::ad {

JacobianPair::JacobianPair(ComplexTensor j_, ComplexTensor jc_)
    : j(std::move(j_)), jc(std::move(jc_)) {
  if (j.shape() != jc.shape() || j.rank() != 2) {
    throw DimensionError("JacobianPair: J " + shape_string(j.shape()) + " and Jc " +
                         shape_string(jc.shape()) + " must be matrices of equal shape");
  }
}

JacobianPair JacobianPair::holomorphic(ComplexTensor j) {
  ComplexTensor zero(j.shape());
  return JacobianPair(std::move(j), std::move(zero));
}

JacobianPair compose_pairs(const JacobianPair& outer, const JacobianPair& inner) {
  if (outer.cols() != inner.rows()) {
    throw DimensionError("compose_pairs: outer " + shape_string(outer.j.shape()) +
                         " cannot follow inner " + shape_string(inner.j.shape()));
  }
  ComplexTensor j = add(matmul(outer.j, inner.j), matmul(outer.jc, conj(inner.jc)));
  ComplexTensor jc = add(matmul(outer.j, inner.jc), matmul(outer.jc, conj(inner.j)));
  return JacobianPair(std::move(j), std::move(jc));
}

namespace {

ComplexTensor probe(const TensorFn& f, const ComplexTensor& z, std::size_t element,
                    const char* direction) {
  auto describe = [&] {
    return std::string("at element ") + std::to_string(element) + " along " + direction;
  };
  ComplexTensor out;
  try {
    out = f(z);
  } catch (const NumericError& e) {
    throw NumericError(std::string("finite-difference probe failed ") + describe() + ": " +
                       e.what());
  }
  if (!all_finite(out)) {
    throw NumericError("non-finite function value during finite-difference probe " +
                       describe());
  }
  return out;
}

}  // namespace

JacobianPair wirtinger_pair_numeric(const TensorFn& f, const ComplexTensor& z0, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("wirtinger_pair_numeric: eps must be positive");
  const std::size_t n = z0.size();
  const std::size_t m = probe(f, z0, 0, "none").size();
  ComplexTensor j(Shape{m, n});
  ComplexTensor jc(Shape{m, n});
  const CScalar half_i(0.0, 0.5);
  for (std::size_t col = 0; col < n; ++col) {
    ComplexTensor z = z0;
    const CScalar base = z0[col];
    z[col] = base + CScalar(eps, 0.0);
    const ComplexTensor fxp = probe(f, z, col, "+re");
    z[col] = base - CScalar(eps, 0.0);
    const ComplexTensor fxm = probe(f, z, col, "-re");
    z[col] = base + CScalar(0.0, eps);
    const ComplexTensor fyp = probe(f, z, col, "+im");
    z[col] = base - CScalar(0.0, eps);
    const ComplexTensor fym = probe(f, z, col, "-im");
    for (std::size_t row = 0; row < m; ++row) {
      const CScalar dx = (fxp[row] - fxm[row]) / (2.0 * eps);
      const CScalar dy = (fyp[row] - fym[row]) / (2.0 * eps);
      j(row, col) = 0.5 * dx - half_i * dy;
      jc(row, col) = 0.5 * dx + half_i * dy;
    }
  }
  return JacobianPair(std::move(j), std::move(jc));
}

bool is_holomorphic_numeric(const TensorFn& f, const std::vector<ComplexTensor>& probes,
                            double tol) {
  if (probes.empty()) throw ArgumentError("is_holomorphic_numeric: no probe points");
  bool holomorphic = true;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    JacobianPair pair = [&] {
      try {
        return wirtinger_pair_numeric(f, probes[i]);
      } catch (const NumericError& e) {
        throw NumericError("evaluation failed at probe " + std::to_string(i) + ": " + e.what());
      }
    }();
    if (max_abs(pair.jc) >= tol) holomorphic = false;
  }
  return holomorphic;
}

double pair_relative_error(const JacobianPair& analytic, const JacobianPair& oracle,
                           double floor) {
  const double diff = std::max(max_abs_diff(analytic.j, oracle.j),
                               max_abs_diff(analytic.jc, oracle.jc));
  const double scale = std::max({max_abs(oracle.j), max_abs(oracle.jc), floor});
  return diff / scale;
}

}  // namespace cvnn::ad
