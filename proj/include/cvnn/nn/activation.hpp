#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "cvnn/ad/unary.hpp"

namespace cvnn::nn {

enum class ActivationKind : std::uint8_t {
  ComplexTanh = 0,     // holomorphic, poles at i*pi/2*(2k+1)
  SplitMagnitude = 1,  // z / (1 + |z|), bounded, not holomorphic
  Linear = 2,
  RealTanh = 3,        // tanh(Re z); real models only
};

const ad::UnaryRule& activation_rule(ActivationKind kind);
std::string_view activation_name(ActivationKind kind);
std::optional<ActivationKind> parse_activation(std::string_view name);

// |cosh(z)| below which complex tanh is treated as singular.
inline constexpr double kCoshSingularity = 1e-30;

ComplexTensor ctanh(const ComplexTensor& z);
ComplexTensor split_magnitude(const ComplexTensor& z);

}  // namespace cvnn::nn
