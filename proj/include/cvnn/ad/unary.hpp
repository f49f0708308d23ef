#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cvnn/ad/jacobian.hpp"
#include "cvnn/core/tensor.hpp"

namespace cvnn::ad {

struct WirtingerDerivs {
  CScalar j;   // df/dz
  CScalar jc;  // df/dz-bar
};

/// Elementwise map f: C -> C usable as a graph node.
///
/// For rules flagged holomorphic, derivs().jc is never read; the node's
/// conjugate Jacobian is the zero matrix by construction.
struct UnaryRule {
  std::string name;
  bool holomorphic = false;
  std::function<CScalar(CScalar)> value;
  std::function<WirtingerDerivs(CScalar)> derivs;
  // Optional: true where the function must not be evaluated.
  std::function<bool(CScalar)> singular;
};

const UnaryRule& conj_rule();
const UnaryRule& real_rule();
const UnaryRule& abs2_rule();    // z z-bar
const UnaryRule& square_rule();  // z^2

// Apply a rule elementwise (used by finite-difference oracles and tests).
ComplexTensor apply(const UnaryRule& rule, const ComplexTensor& z);

// Diagonal Jacobian pair of the rule at z.
JacobianPair rule_pair(const UnaryRule& rule, const ComplexTensor& z);

}  // namespace cvnn::ad
