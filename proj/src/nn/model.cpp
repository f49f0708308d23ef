#include "cvnn/nn/model.hpp"

#include <cmath>

#include "cvnn/core/errors.hpp"

namespace cvnn::nn {

std::string_view field_name(Field field) { return field == Field::Complex ? "complex" : "real"; }

std::optional<Field> parse_field(std::string_view name) {
  if (name == "complex") return Field::Complex;
  if (name == "real") return Field::Real;
  return std::nullopt;
}

RecurrentModel RecurrentModel::zeros(Field field, ModelDims dims, ActivationKind activation) {
  RecurrentModel m;
  m.field = field;
  m.hidden_activation = activation;
  m.w_in = ComplexTensor(Shape{dims.hidden, dims.input});
  m.b_in = ComplexTensor(Shape{dims.hidden});
  m.w_rec = ComplexTensor(Shape{dims.hidden, dims.hidden});
  m.b_rec = ComplexTensor(Shape{dims.hidden});
  m.w_out = ComplexTensor(Shape{dims.output, dims.hidden});
  m.b_out = ComplexTensor(Shape{dims.output});
  m.validate();
  return m;
}

ModelDims RecurrentModel::dims() const { return {w_in.cols(), w_in.rows(), w_out.rows()}; }

std::size_t RecurrentModel::parameter_count() const {
  std::size_t n = 0;
  for (const ComplexTensor* p : parameters()) n += p->size();
  return n;
}

std::array<ComplexTensor*, 6> RecurrentModel::parameters() {
  return {&w_in, &b_in, &w_rec, &b_rec, &w_out, &b_out};
}

std::array<const ComplexTensor*, 6> RecurrentModel::parameters() const {
  return {&w_in, &b_in, &w_rec, &b_rec, &w_out, &b_out};
}

void RecurrentModel::validate() const {
  const ModelDims d = dims();
  auto expect = [](const ComplexTensor& t, const Shape& s, const char* name) {
    if (t.shape() != s) {
      throw ArgumentError(std::string("model parameter ") + name + " has shape " +
                          shape_string(t.shape()) + ", expected " + shape_string(s));
    }
  };
  expect(w_in, {d.hidden, d.input}, "w_in");
  expect(b_in, {d.hidden}, "b_in");
  expect(w_rec, {d.hidden, d.hidden}, "w_rec");
  expect(b_rec, {d.hidden}, "b_rec");
  expect(w_out, {d.output, d.hidden}, "w_out");
  expect(b_out, {d.output}, "b_out");
  if (field == Field::Real) {
    if (hidden_activation != ActivationKind::RealTanh) {
      throw ArgumentError("real model requires the real-tanh hidden activation");
    }
    for (const ComplexTensor* p : parameters()) {
      if (max_abs_imag(*p) != 0.0) throw ArgumentError("real model has a nonzero imaginary part");
    }
  } else if (hidden_activation == ActivationKind::RealTanh) {
    throw ArgumentError("real-tanh is reserved for real models");
  }
}

RecurrentModel init_model(Field field, ModelDims dims, ActivationKind activation,
                          double init_scale, Rng& rng) {
  if (!(init_scale > 0.0)) throw ArgumentError("init_model: init_scale must be positive");
  RecurrentModel m = RecurrentModel::zeros(field, dims, activation);
  auto draw = [&](std::size_t rows, std::size_t fan_in) {
    const double sigma = init_scale / std::sqrt(static_cast<double>(fan_in));
    return field == Field::Complex ? sample_circular_gaussian(rng, {rows, fan_in}, sigma)
                                   : sample_real_gaussian(rng, {rows, fan_in}, sigma);
  };
  m.w_in = draw(dims.hidden, dims.input);
  m.w_rec = draw(dims.hidden, dims.hidden);
  m.w_out = draw(dims.output, dims.hidden);
  return m;
}

double n_dof(Field field, std::size_t elements) {
  return static_cast<double>(field == Field::Complex ? 2 * elements : elements);
}

double mse_loss(const ComplexTensor& pred, const ComplexTensor& target, Field field) {
  if (pred.shape() != target.shape()) {
    throw DimensionError("mse_loss: prediction " + shape_string(pred.shape()) + " vs target " +
                         shape_string(target.shape()));
  }
  return sum_abs2(sub(pred, target)) / n_dof(field, pred.size());
}

namespace {

void add_bias_inplace(ComplexTensor& x, const ComplexTensor& bias) {
  const std::size_t cols = x.cols();
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (std::size_t c = 0; c < cols; ++c) x[r * cols + c] += bias[r];
}

}  // namespace

// Operation order mirrors the graph version so both agree bitwise.
ComplexTensor rnn_step(const RecurrentModel& model, const ComplexTensor* h_prev,
                       const ComplexTensor& x) {
  ComplexTensor pre = matmul(model.w_in, x);
  add_bias_inplace(pre, model.b_in);
  if (h_prev) {
    ComplexTensor rec = matmul(model.w_rec, *h_prev);
    add_bias_inplace(rec, model.b_rec);
    pre = add(pre, rec);
  } else {
    add_bias_inplace(pre, model.b_rec);
  }
  return ad::apply(activation_rule(model.hidden_activation), pre);
}

ComplexTensor predict_frame(const RecurrentModel& model, std::span<const ComplexTensor> frames) {
  if (frames.size() != kInputSteps) {
    throw ArgumentError("predict_frame: expected " + std::to_string(kInputSteps) +
                        " input frames, got " + std::to_string(frames.size()));
  }
  ComplexTensor h = rnn_step(model, nullptr, frames[0]);
  for (std::size_t t = 1; t < frames.size(); ++t) h = rnn_step(model, &h, frames[t]);
  ComplexTensor y = matmul(model.w_out, h);
  add_bias_inplace(y, model.b_out);
  return y;
}

ModelVars bind(ad::Graph& graph, const RecurrentModel& model) {
  return {graph.leaf(model.w_in, "w_in"),   graph.leaf(model.b_in, "b_in"),
          graph.leaf(model.w_rec, "w_rec"), graph.leaf(model.b_rec, "b_rec"),
          graph.leaf(model.w_out, "w_out"), graph.leaf(model.b_out, "b_out")};
}

ad::Var rnn_step(ad::Graph& graph, const RecurrentModel& model, const ModelVars& vars,
                 std::optional<ad::Var> h_prev, ad::Var x) {
  ad::Var pre = graph.add_bias(graph.matmul(vars.w_in, x), vars.b_in);
  if (h_prev) {
    pre = graph.add(pre, graph.add_bias(graph.matmul(vars.w_rec, *h_prev), vars.b_rec));
  } else {
    pre = graph.add_bias(pre, vars.b_rec);
  }
  return graph.unary(pre, activation_rule(model.hidden_activation));
}

ad::Var predict_frame(ad::Graph& graph, const RecurrentModel& model, const ModelVars& vars,
                      std::span<const ad::Var> frames) {
  if (frames.size() != kInputSteps) {
    throw ArgumentError("predict_frame: expected " + std::to_string(kInputSteps) +
                        " input frames, got " + std::to_string(frames.size()));
  }
  ad::Var h = rnn_step(graph, model, vars, std::nullopt, frames[0]);
  for (std::size_t t = 1; t < frames.size(); ++t) h = rnn_step(graph, model, vars, h, frames[t]);
  return graph.add_bias(graph.matmul(vars.w_out, h), vars.b_out);
}

}  // namespace cvnn::nn
