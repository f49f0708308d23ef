#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvnn/ad/jacobian.hpp"
#include "cvnn/ad/unary.hpp"
#include "cvnn/core/tensor.hpp"

namespace cvnn::ad {

enum class OpKind : std::uint8_t { Leaf, MatMul, Add, AddBias, Mul, Unary, Sum, Mse };

const char* op_name(OpKind kind);

struct Var {
  std::size_t id;
};

struct GraphNode {
  OpKind kind = OpKind::Leaf;
  std::array<std::size_t, 2> inputs{};
  std::size_t arity = 0;
  ComplexTensor value;
  bool holomorphic = true;
  bool requires_grad = false;
  const UnaryRule* rule = nullptr;  // Unary only
  double n_dof = 1.0;               // Mse only
  std::string label;
};

/// Conjugate cogradients dL/dz-bar keyed by node.
///
/// The loss root itself holds dL/dL = 1. Because L is real, the cogradient
/// dL/dz is conj(dL/dz-bar) and is not stored.
class CogradientStore {
 public:
  explicit CogradientStore(std::size_t nodes) : grads_(nodes) {}

  bool contains(Var v) const { return v.id < grads_.size() && grads_[v.id].has_value(); }
  const ComplexTensor& at(Var v) const;
  ComplexTensor cogradient(Var v) const { return conj(at(v)); }

  void set(std::size_t id, ComplexTensor g) { grads_[id] = std::move(g); }

 private:
  std::vector<std::optional<ComplexTensor>> grads_;
};

/// Define-by-run tape over complex tensors. Node values are computed when the
/// node is added; ids are therefore a topological order.
///
/// backward() propagates a single channel, the conjugate cogradient. For an
/// upstream delta = dL/dw-bar at a node w = F(z) it accumulates
///     dL/dz-bar += conj(delta) Jc + delta conj(J)
/// and holomorphic nodes skip the first term. No Jacobian is materialized.
class Graph {
 public:
  Var leaf(ComplexTensor value, std::string label = {});
  Var constant(ComplexTensor value, std::string label = {});

  Var matmul(Var w, Var x);
  Var add(Var a, Var b);
  Var add_bias(Var x, Var bias);  // bias [m] broadcast over the columns of x
  Var mul(Var a, Var b);
  // The rule must outlive the graph.
  Var unary(Var x, const UnaryRule& rule);
  Var sum(Var x);
  // sum |pred - target|^2 / n_dof, a real scalar.
  Var mse(Var pred, Var target, double n_dof);

  const ComplexTensor& value(Var v) const { return nodes_.at(v.id).value; }
  const GraphNode& node(Var v) const { return nodes_.at(v.id); }
  std::size_t size() const { return nodes_.size(); }

  CogradientStore backward(Var root) const;

  struct TwoChannelResult {
    CogradientStore conj_cogradients;  // dL/dz-bar
    CogradientStore cogradients;       // dL/dz
    double max_symmetry_error;         // max relative |dL/dz - conj(dL/dz-bar)|
  };

  // Reference path: propagates dL/dz and dL/dz-bar independently with the
  // general (four-term) rule. Throws ContractError if the two channels stop
  // being conjugate to within rtol at any node.
  TwoChannelResult backward_two_channel(Var root, double rtol = 1e-10) const;

  // Materialized Jacobian pair of node v with respect to its input slot.
  // Outputs and inputs are flattened row-major. Testing only.
  JacobianPair local_pair(Var v, std::size_t input) const;

 private:
  Var push(GraphNode node);
  void check_root(Var root) const;
  // acc_i += p Jc + q conj(J) for each input i that requires a gradient.
  // p may be null for holomorphic nodes.
  void pullback(const GraphNode& node, const ComplexTensor* p, const ComplexTensor& q,
                std::vector<std::optional<ComplexTensor>>& acc) const;

  std::vector<GraphNode> nodes_;
};

// Jacobian pair of `of` with respect to leaf `wrt`, built by composing the
// materialized local pairs along the graph. Testing only.
JacobianPair materialized_pair(const Graph& graph, Var of, Var wrt);

}  // namespace cvnn::ad
