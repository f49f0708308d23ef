#include "cvnn/ad/unary.hpp"

#include "cvnn/core/errors.hpp"

namespace cvnn::ad {

const UnaryRule& conj_rule() {
  static const UnaryRule rule{
      "conj", false, [](CScalar z) { return std::conj(z); },
      [](CScalar) { return WirtingerDerivs{0.0, 1.0}; }, {}};
  return rule;
}

const UnaryRule& real_rule() {
  static const UnaryRule rule{
      "real", false, [](CScalar z) { return CScalar(z.real(), 0.0); },
      [](CScalar) { return WirtingerDerivs{0.5, 0.5}; }, {}};
  return rule;
}

const UnaryRule& abs2_rule() {
  static const UnaryRule rule{
      "abs2", false,
      [](CScalar z) { return CScalar(z.real() * z.real() + z.imag() * z.imag(), 0.0); },
      [](CScalar z) { return WirtingerDerivs{std::conj(z), z}; }, {}};
  return rule;
}

const UnaryRule& square_rule() {
  static const UnaryRule rule{
      "square", true, [](CScalar z) { return z * z; },
      [](CScalar z) { return WirtingerDerivs{2.0 * z, 0.0}; }, {}};
  return rule;
}

ComplexTensor apply(const UnaryRule& rule, const ComplexTensor& z) {
  ComplexTensor out(z.shape());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (rule.singular && rule.singular(z[i])) {
      throw SingularityError(rule.name + ": singular at element " + std::to_string(i));
    }
    out[i] = rule.value(z[i]);
  }
  return out;
}

JacobianPair rule_pair(const UnaryRule& rule, const ComplexTensor& z) {
  const std::size_t n = z.size();
  ComplexTensor j(Shape{n, n});
  ComplexTensor jc(Shape{n, n});
  for (std::size_t i = 0; i < n; ++i) {
    const WirtingerDerivs d = rule.derivs(z[i]);
    j(i, i) = d.j;
    if (!rule.holomorphic) jc(i, i) = d.jc;
  }
  return JacobianPair(std::move(j), std::move(jc));
}

}  // namespace cvnn::ad
