#include "cvnn/nn/activation.hpp"

#include <cmath>

namespace cvnn::nn {

namespace {

bool near_tanh_pole(CScalar z) {
  // |cosh(x + iy)|^2 = sinh^2 x + cos^2 y
  const double sh = std::sinh(z.real());
  const double c = std::cos(z.imag());
  return sh * sh + c * c < kCoshSingularity * kCoshSingularity;
}

ad::UnaryRule make_ctanh() {
  return {"ctanh", true, [](CScalar z) { return std::tanh(z); },
          [](CScalar z) {
            const CScalar t = std::tanh(z);
            return ad::WirtingerDerivs{1.0 - t * t, 0.0};
          },
          near_tanh_pole};
}

ad::UnaryRule make_split_magnitude() {
  return {"split_magnitude", false, [](CScalar z) { return z / (1.0 + std::abs(z)); },
          [](CScalar z) {
            if (z == CScalar{}) return ad::WirtingerDerivs{1.0, 0.0};
            const double r = std::abs(z);
            const double d = (1.0 + r) * (1.0 + r);
            return ad::WirtingerDerivs{1.0 / (1.0 + r) - r / (2.0 * d), -(z * z) / (2.0 * r * d)};
          },
          {}};
}

ad::UnaryRule make_linear() {
  return {"linear", true, [](CScalar z) { return z; },
          [](CScalar) { return ad::WirtingerDerivs{1.0, 0.0}; }, {}};
}

ad::UnaryRule make_real_tanh() {
  return {"real_tanh", false, [](CScalar z) { return CScalar(std::tanh(z.real()), 0.0); },
          [](CScalar z) {
            const double t = std::tanh(z.real());
            const double half = 0.5 * (1.0 - t * t);
            return ad::WirtingerDerivs{half, half};
          },
          {}};
}

}  // namespace

const ad::UnaryRule& activation_rule(ActivationKind kind) {
  static const ad::UnaryRule rules[] = {make_ctanh(), make_split_magnitude(), make_linear(),
                                        make_real_tanh()};
  return rules[static_cast<int>(kind)];
}

std::string_view activation_name(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::ComplexTanh: return "ctanh";
    case ActivationKind::SplitMagnitude: return "split-magnitude";
    case ActivationKind::Linear: return "linear";
    case ActivationKind::RealTanh: return "real-tanh";
  }
  return "?";
}

std::optional<ActivationKind> parse_activation(std::string_view name) {
  for (auto k : {ActivationKind::ComplexTanh, ActivationKind::SplitMagnitude,
                 ActivationKind::Linear, ActivationKind::RealTanh}) {
    if (activation_name(k) == name) return k;
  }
  return std::nullopt;
}

ComplexTensor ctanh(const ComplexTensor& z) {
  return ad::apply(activation_rule(ActivationKind::ComplexTanh), z);
}

ComplexTensor split_magnitude(const ComplexTensor& z) {
  return ad::apply(activation_rule(ActivationKind::SplitMagnitude), z);
}

}  // namespace cvnn::nn
