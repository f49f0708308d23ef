#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "cvnn/ad/graph.hpp"
#include "cvnn/core/rng.hpp"
#include "cvnn/core/tensor.hpp"
#include "cvnn/nn/activation.hpp"

namespace cvnn::nn {

enum class Field : std::uint8_t { Complex = 0, Real = 1 };

std::string_view field_name(Field field);
std::optional<Field> parse_field(std::string_view name);

struct ModelDims {
  std::size_t input = 0;
  std::size_t hidden = 0;
  std::size_t output = 0;

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

// Frames fed to the recurrent layer before the prediction is read out.
inline constexpr std::size_t kInputSteps = 3;

/// One recurrent hidden layer with a linear readout:
///
///   h_t = act(W_in x_t + b_in + W_rec h_{t-1} + b_rec),  h_0 = 0
///   y   = W_out h_3 + b_out
///
/// b_in and b_rec are redundant but both trainable, which gives 3h^2 + 3h
/// parameters for d_in = d_out = h. A real model is the same structure with
/// every imaginary part held at zero and activation RealTanh.
struct RecurrentModel {
  Field field = Field::Complex;
  ActivationKind hidden_activation = ActivationKind::ComplexTanh;
  ComplexTensor w_in, b_in, w_rec, b_rec, w_out, b_out;

  static RecurrentModel zeros(Field field, ModelDims dims, ActivationKind activation);

  ModelDims dims() const;
  std::size_t parameter_count() const;

  // Declaration order: w_in, b_in, w_rec, b_rec, w_out, b_out.
  std::array<ComplexTensor*, 6> parameters();
  std::array<const ComplexTensor*, 6> parameters() const;

  // Throws ArgumentError if shapes are inconsistent or a real model carries an
  // imaginary part or a complex activation.
  void validate() const;
};

// Weights ~ sigma = init_scale / sqrt(fan_in) (circular complex Gaussian, or
// real Gaussian for real models); biases zero.
RecurrentModel init_model(Field field, ModelDims dims, ActivationKind activation,
                          double init_scale, Rng& rng);

// Degrees of freedom used to normalize the squared error: two per complex
// element, one per real element.
double n_dof(Field field, std::size_t elements);

double mse_loss(const ComplexTensor& pred, const ComplexTensor& target, Field field);

// Eager evaluation. x / h may be vectors or d x batch matrices. h_prev empty
// means the zero state.
ComplexTensor rnn_step(const RecurrentModel& model, const ComplexTensor* h_prev,
                       const ComplexTensor& x);
ComplexTensor predict_frame(const RecurrentModel& model, std::span<const ComplexTensor> frames);

struct ModelVars {
  ad::Var w_in, b_in, w_rec, b_rec, w_out, b_out;
  std::array<ad::Var, 6> all() const { return {w_in, b_in, w_rec, b_rec, w_out, b_out}; }
};

ModelVars bind(ad::Graph& graph, const RecurrentModel& model);
ad::Var rnn_step(ad::Graph& graph, const RecurrentModel& model, const ModelVars& vars,
                 std::optional<ad::Var> h_prev, ad::Var x);
ad::Var predict_frame(ad::Graph& graph, const RecurrentModel& model, const ModelVars& vars,
                      std::span<const ad::Var> frames);

}  // namespace cvnn::nn
