#pragma once

#include <functional>
#include <vector>

#include "cvnn/core/tensor.hpp"

namespace cvnn::ad {

using TensorFn = std::function<ComplexTensor(const ComplexTensor&)>;

/// The two Wirtinger Jacobians of a map F: C^n -> C^m, both m x n.
///
/// j  = dF/dz  (z-bar held constant)
/// jc = dF/dz-bar (z held constant)
///
/// A holomorphic map has jc identically zero; use holomorphic() so the zero
/// is constructed rather than computed.
struct JacobianPair {
  ComplexTensor j;
  ComplexTensor jc;

  JacobianPair(ComplexTensor j_, ComplexTensor jc_);
  static JacobianPair holomorphic(ComplexTensor j);

  std::size_t rows() const { return j.rows(); }
  std::size_t cols() const { return j.cols(); }
};

// Chain rule for Wirtinger Jacobians of outer o inner:
//   J  = J_o J_i  + Jc_o conj(Jc_i)
//   Jc = J_o Jc_i + Jc_o conj(J_i)
JacobianPair compose_pairs(const JacobianPair& outer, const JacobianPair& inner);

inline constexpr double kDefaultFdStep = 1e-6;

// Central differences along re and im of every input element, combined as
// df/dz = (df/dx - i df/dy) / 2 and df/dz-bar = (df/dx + i df/dy) / 2.
// This is the independent oracle every analytic derivative is checked against.
JacobianPair wirtinger_pair_numeric(const TensorFn& f, const ComplexTensor& z0,
                                    double eps = kDefaultFdStep);

// True iff max|Jc| < tol at every probe.
bool is_holomorphic_numeric(const TensorFn& f, const std::vector<ComplexTensor>& probes,
                            double tol);

// Normwise relative error max|a - b| / max(max|b|, floor) over both Jacobians.
double pair_relative_error(const JacobianPair& analytic, const JacobianPair& oracle,
                           double floor = 1e-8);

}  // namespace cvnn::ad
