#include "cvnn/ad/graph.hpp"

#include <algorithm>
#include <cmath>

#include "cvnn/core/errors.hpp"
#include "cvnn/kernels/gemm.hpp"

namespace cvnn::ad {

const char* op_name(OpKind kind) {
  switch (kind) {
    case OpKind::Leaf: return "leaf";
    case OpKind::MatMul: return "matmul";
    case OpKind::Add: return "add";
    case OpKind::AddBias: return "add_bias";
    case OpKind::Mul: return "mul";
    case OpKind::Unary: return "unary";
    case OpKind::Sum: return "sum";
    case OpKind::Mse: return "mse";
  }
  return "?";
}

const ComplexTensor& CogradientStore::at(Var v) const {
  if (!contains(v)) throw ArgumentError("no cogradient stored for node " + std::to_string(v.id));
  return *grads_[v.id];
}

namespace {

std::string describe(const GraphNode& n, std::size_t id) {
  std::string s = std::string(op_name(n.kind)) + " node #" + std::to_string(id);
  if (n.kind == OpKind::Unary && n.rule) s += " (" + n.rule->name + ")";
  if (!n.label.empty()) s += " '" + n.label + "'";
  return s;
}

void accumulate(std::optional<ComplexTensor>& slot, ComplexTensor g) {
  if (!slot) {
    slot = std::move(g);
    return;
  }
  auto dst = slot->data();
  auto src = g.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

kernels::MatrixRef as_matrix(const ComplexTensor& t) { return {t.data(), t.rows(), t.cols()}; }

}  // namespace

Var Graph::push(GraphNode node) {
  for (std::size_t i = 0; i < node.arity; ++i) {
    node.requires_grad = node.requires_grad || nodes_[node.inputs[i]].requires_grad;
  }
  nodes_.push_back(std::move(node));
  return Var{nodes_.size() - 1};
}

Var Graph::leaf(ComplexTensor value, std::string label) {
  GraphNode n;
  n.value = std::move(value);
  n.requires_grad = true;
  n.label = std::move(label);
  return push(std::move(n));
}

Var Graph::constant(ComplexTensor value, std::string label) {
  GraphNode n;
  n.value = std::move(value);
  n.label = std::move(label);
  return push(std::move(n));
}

Var Graph::matmul(Var w, Var x) {
  GraphNode n;
  n.kind = OpKind::MatMul;
  n.inputs = {w.id, x.id};
  n.arity = 2;
  n.value = cvnn::matmul(value(w), value(x));
  return push(std::move(n));
}

Var Graph::add(Var a, Var b) {
  GraphNode n;
  n.kind = OpKind::Add;
  n.inputs = {a.id, b.id};
  n.arity = 2;
  n.value = cvnn::add(value(a), value(b));
  return push(std::move(n));
}

Var Graph::add_bias(Var x, Var bias) {
  const ComplexTensor& xv = value(x);
  const ComplexTensor& bv = value(bias);
  if (bv.rank() != 1 || xv.rank() < 1 || xv.rank() > 2 || xv.rows() != bv.size()) {
    throw DimensionError("add_bias: cannot broadcast " + shape_string(bv.shape()) + " over " +
                         shape_string(xv.shape()));
  }
  GraphNode n;
  n.kind = OpKind::AddBias;
  n.inputs = {x.id, bias.id};
  n.arity = 2;
  n.value = xv;
  const std::size_t cols = xv.cols();
  for (std::size_t r = 0; r < xv.rows(); ++r)
    for (std::size_t c = 0; c < cols; ++c) n.value[r * cols + c] += bv[r];
  return push(std::move(n));
}

Var Graph::mul(Var a, Var b) {
  GraphNode n;
  n.kind = OpKind::Mul;
  n.inputs = {a.id, b.id};
  n.arity = 2;
  n.value = hadamard(value(a), value(b));
  return push(std::move(n));
}

Var Graph::unary(Var x, const UnaryRule& rule) {
  GraphNode n;
  n.kind = OpKind::Unary;
  n.inputs = {x.id, 0};
  n.arity = 1;
  n.rule = &rule;
  n.holomorphic = rule.holomorphic;
  const ComplexTensor& z = value(x);
  n.value = ComplexTensor(z.shape());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (rule.singular && rule.singular(z[i])) {
      throw SingularityError(rule.name + ": singular input at element " + std::to_string(i) +
                             " of node #" + std::to_string(nodes_.size()) + " (z = " +
                             std::to_string(z[i].real()) + (z[i].imag() < 0 ? "" : "+") +
                             std::to_string(z[i].imag()) + "i)");
    }
    n.value[i] = rule.value(z[i]);
  }
  return push(std::move(n));
}

Var Graph::sum(Var x) {
  GraphNode n;
  n.kind = OpKind::Sum;
  n.inputs = {x.id, 0};
  n.arity = 1;
  CScalar s{};
  for (CScalar z : value(x).data()) s += z;
  n.value = ComplexTensor::scalar(s);
  return push(std::move(n));
}

Var Graph::mse(Var pred, Var target, double n_dof) {
  const ComplexTensor& p = value(pred);
  const ComplexTensor& t = value(target);
  if (p.shape() != t.shape()) {
    throw DimensionError("mse: prediction " + shape_string(p.shape()) + " vs target " +
                         shape_string(t.shape()));
  }
  if (!(n_dof > 0.0)) throw ArgumentError("mse: n_dof must be positive");
  GraphNode n;
  n.kind = OpKind::Mse;
  n.inputs = {pred.id, target.id};
  n.arity = 2;
  n.holomorphic = false;
  n.n_dof = n_dof;
  n.value = ComplexTensor::scalar(sum_abs2(sub(p, t)) / n_dof);
  return push(std::move(n));
}

void Graph::check_root(Var root) const {
  const ComplexTensor& v = value(root);
  if (v.size() != 1) {
    throw ContractError("backward: loss root must be a scalar, got " + shape_string(v.shape()));
  }
  const CScalar l = v[0];
  if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) {
    throw NumericError("backward: loss root is not finite");
  }
  if (std::abs(l.imag()) >= 1e-12 * std::max(1.0, std::abs(l.real()))) {
    throw ContractError("backward: loss root is not real (imaginary part " +
                        std::to_string(l.imag()) + ")");
  }
}

void Graph::pullback(const GraphNode& node, const ComplexTensor* p, const ComplexTensor& q,
                     std::vector<std::optional<ComplexTensor>>& acc) const {
  auto wants = [&](std::size_t slot) { return nodes_[node.inputs[slot]].requires_grad; };
  auto give = [&](std::size_t slot, ComplexTensor g) {
    accumulate(acc[node.inputs[slot]], std::move(g));
  };
  const ComplexTensor& in0 = nodes_[node.inputs[0]].value;

  switch (node.kind) {
    case OpKind::Leaf:
      return;
    case OpKind::MatMul: {
      const ComplexTensor& x = nodes_[node.inputs[1]].value;
      if (wants(0)) {
        ComplexTensor g(in0.shape());
        kernels::gemm(kernels::Op::None, as_matrix(q), kernels::Op::ConjTrans, as_matrix(x),
                      g.data());
        give(0, std::move(g));
      }
      if (wants(1)) {
        ComplexTensor g(x.shape());
        kernels::gemm(kernels::Op::ConjTrans, as_matrix(in0), kernels::Op::None, as_matrix(q),
                      g.data());
        give(1, std::move(g));
      }
      return;
    }
    case OpKind::Add:
      if (wants(0)) give(0, q);
      if (wants(1)) give(1, q);
      return;
    case OpKind::AddBias: {
      if (wants(0)) give(0, q);
      if (wants(1)) {
        ComplexTensor g(nodes_[node.inputs[1]].value.shape());
        const std::size_t cols = q.cols();
        for (std::size_t r = 0; r < q.rows(); ++r)
          for (std::size_t c = 0; c < cols; ++c) g[r] += q[r * cols + c];
        give(1, std::move(g));
      }
      return;
    }
    case OpKind::Mul: {
      const ComplexTensor& b = nodes_[node.inputs[1]].value;
      if (wants(0)) give(0, hadamard(q, conj(b)));
      if (wants(1)) give(1, hadamard(q, conj(in0)));
      return;
    }
    case OpKind::Unary: {
      if (!wants(0)) return;
      const UnaryRule& rule = *node.rule;
      ComplexTensor g(in0.shape());
      for (std::size_t i = 0; i < g.size(); ++i) {
        const WirtingerDerivs d = rule.derivs(in0[i]);
        CScalar v = kernels::cmul(q[i], std::conj(d.j));
        if (!rule.holomorphic) v += kernels::cmul((*p)[i], d.jc);
        g[i] = v;
      }
      give(0, std::move(g));
      return;
    }
    case OpKind::Sum: {
      if (!wants(0)) return;
      ComplexTensor g(in0.shape());
      std::fill(g.data().begin(), g.data().end(), q[0]);
      give(0, std::move(g));
      return;
    }
    case OpKind::Mse: {
      // J = conj(e)/N and Jc = e/N for the prediction, negated for the target.
      const ComplexTensor e = sub(in0, nodes_[node.inputs[1]].value);
      const CScalar s = ((p ? (*p)[0] : CScalar{}) + q[0]) / node.n_dof;
      if (wants(0)) give(0, scale(e, s));
      if (wants(1)) give(1, scale(e, -s));
      return;
    }
  }
}

CogradientStore Graph::backward(Var root) const {
  check_root(root);
  std::vector<std::optional<ComplexTensor>> delta(root.id + 1);
  // The real root enters through Re(w), whose conjugate cogradient is 1/2.
  delta[root.id] = ComplexTensor(value(root).shape(), {CScalar(0.5, 0.0)});

  for (std::size_t id = root.id + 1; id-- > 0;) {
    if (!delta[id]) continue;
    const GraphNode& node = nodes_[id];
    if (!all_finite(*delta[id])) {
      throw NumericError("backward: non-finite cogradient at " + describe(node, id));
    }
    if (node.arity == 0) continue;
    if (node.holomorphic) {
      pullback(node, nullptr, *delta[id], delta);
    } else {
      const ComplexTensor p = conj(*delta[id]);
      pullback(node, &p, *delta[id], delta);
    }
  }

  CogradientStore store(nodes_.size());
  for (std::size_t id = 0; id <= root.id; ++id) {
    if (delta[id] && nodes_[id].requires_grad) store.set(id, std::move(*delta[id]));
  }
  store.set(root.id, ComplexTensor(value(root).shape(), {CScalar(1.0, 0.0)}));
  return store;
}

Graph::TwoChannelResult Graph::backward_two_channel(Var root, double rtol) const {
  check_root(root);
  const std::size_t n = root.id + 1;
  std::vector<std::optional<ComplexTensor>> a(n);  // dL/dw
  std::vector<std::optional<ComplexTensor>> b(n);  // dL/dw-bar
  a[root.id] = ComplexTensor(value(root).shape(), {CScalar(0.5, 0.0)});
  b[root.id] = a[root.id];
  double worst = 0.0;

  for (std::size_t id = n; id-- > 0;) {
    if (!b[id]) continue;
    const GraphNode& node = nodes_[id];
    const double scale_ref = std::max(max_abs(*b[id]), 1e-300);
    const double err = max_abs_diff(*a[id], conj(*b[id])) / scale_ref;
    worst = std::max(worst, err);
    if (err > rtol) {
      throw ContractError("backward_two_channel: dL/dz != conj(dL/dz-bar) at " +
                          describe(node, id) + " (relative error " + std::to_string(err) + ")");
    }
    if (node.arity == 0) continue;
    // dL/dz-bar_in = a Jc + b conj(J)
    pullback(node, &*a[id], *b[id], b);
    // dL/dz_in = a J + b conj(Jc) = conj(conj(b) Jc + conj(a) conj(J))
    std::vector<std::optional<ComplexTensor>> scratch(n);
    const ComplexTensor conj_b = conj(*b[id]);
    pullback(node, &conj_b, conj(*a[id]), scratch);
    for (std::size_t i = 0; i < n; ++i) {
      if (scratch[i]) accumulate(a[i], conj(*scratch[i]));
    }
  }

  TwoChannelResult result{CogradientStore(nodes_.size()), CogradientStore(nodes_.size()), worst};
  for (std::size_t id = 0; id < n; ++id) {
    if (!b[id] || !nodes_[id].requires_grad) continue;
    result.conj_cogradients.set(id, std::move(*b[id]));
    result.cogradients.set(id, std::move(*a[id]));
  }
  result.conj_cogradients.set(root.id, ComplexTensor(value(root).shape(), {CScalar(1.0, 0.0)}));
  result.cogradients.set(root.id, ComplexTensor(value(root).shape(), {CScalar(1.0, 0.0)}));
  return result;
}

JacobianPair Graph::local_pair(Var v, std::size_t input) const {
  const GraphNode& node = nodes_.at(v.id);
  if (input >= node.arity) throw ArgumentError("local_pair: input slot out of range");
  const ComplexTensor& out = node.value;
  const ComplexTensor& in = nodes_[node.inputs[input]].value;
  const std::size_t m = out.size();
  const std::size_t n = in.size();
  ComplexTensor j(Shape{m, n});
  ComplexTensor jc(Shape{m, n});

  switch (node.kind) {
    case OpKind::Leaf:
      break;
    case OpKind::MatMul: {
      const ComplexTensor& w = nodes_[node.inputs[0]].value;
      const ComplexTensor& x = nodes_[node.inputs[1]].value;
      const std::size_t rows = w.rows(), inner = w.cols(), batch = x.cols();
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < batch; ++c)
          for (std::size_t p = 0; p < inner; ++p) {
            if (input == 0) j(i * batch + c, i * inner + p) = x[p * batch + c];
            else j(i * batch + c, p * batch + c) = w[i * inner + p];
          }
      break;
    }
    case OpKind::Add:
      for (std::size_t i = 0; i < m; ++i) j(i, i) = 1.0;
      break;
    case OpKind::AddBias: {
      const std::size_t cols = out.cols();
      for (std::size_t i = 0; i < m; ++i) j(i, input == 0 ? i : i / cols) = 1.0;
      break;
    }
    case OpKind::Mul: {
      const ComplexTensor& other = nodes_[node.inputs[1 - input]].value;
      for (std::size_t i = 0; i < m; ++i) j(i, i) = other[i];
      break;
    }
    case OpKind::Unary:
      return rule_pair(*node.rule, in);
    case OpKind::Sum:
      for (std::size_t i = 0; i < n; ++i) j(0, i) = 1.0;
      break;
    case OpKind::Mse: {
      const ComplexTensor e = sub(nodes_[node.inputs[0]].value, nodes_[node.inputs[1]].value);
      const double sign = input == 0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        j(0, i) = sign * std::conj(e[i]) / node.n_dof;
        jc(0, i) = sign * e[i] / node.n_dof;
      }
      break;
    }
  }
  return JacobianPair(std::move(j), std::move(jc));
}

JacobianPair materialized_pair(const Graph& graph, Var of, Var wrt) {
  const std::size_t n = graph.value(wrt).size();
  std::vector<std::optional<JacobianPair>> pairs(of.id + 1);
  if (wrt.id <= of.id) {
    ComplexTensor eye(Shape{n, n});
    for (std::size_t i = 0; i < n; ++i) eye(i, i) = 1.0;
    pairs[wrt.id] = JacobianPair::holomorphic(std::move(eye));
  }
  for (std::size_t id = wrt.id + 1; id <= of.id; ++id) {
    const GraphNode& node = graph.node(Var{id});
    for (std::size_t slot = 0; slot < node.arity; ++slot) {
      const auto& upstream = pairs[node.inputs[slot]];
      if (!upstream) continue;
      JacobianPair contribution = compose_pairs(graph.local_pair(Var{id}, slot), *upstream);
      if (!pairs[id]) {
        pairs[id] = std::move(contribution);
      } else {
        pairs[id] = JacobianPair(add(pairs[id]->j, contribution.j),
                                 add(pairs[id]->jc, contribution.jc));
      }
    }
  }
  if (pairs[of.id]) return *pairs[of.id];
  const std::size_t m = graph.value(of).size();
  return JacobianPair(ComplexTensor(Shape{m, n}), ComplexTensor(Shape{m, n}));
}

}  // namespace cvnn::ad
