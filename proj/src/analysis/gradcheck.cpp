#include "cvnn/analysis/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <span>

#include "cvnn/ad/graph.hpp"
#include "cvnn/ad/jacobian.hpp"
#include "cvnn/core/rng.hpp"
#include "cvnn/nn/activation.hpp"
#include "cvnn/nn/model.hpp"

namespace cvnn::analysis {

bool GradcheckReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
}

std::string GradcheckReport::to_text() const {
  std::string out;
  char line[160];
  for (const GradcheckEntry& e : entries) {
    std::snprintf(line, sizeof line, "%s %-32s max_rel_err=%.3e probes=%zu\n",
                  e.pass ? "PASS" : "FAIL", e.name.c_str(), e.max_rel_error, e.probes);
    out += line;
  }
  return out;
}

std::vector<const ad::UnaryRule*> registered_rules() {
  using nn::ActivationKind;
  return {&nn::activation_rule(ActivationKind::ComplexTanh),
          &nn::activation_rule(ActivationKind::SplitMagnitude),
          &nn::activation_rule(ActivationKind::Linear),
          &nn::activation_rule(ActivationKind::RealTanh),
          &ad::conj_rule(),
          &ad::real_rule(),
          &ad::abs2_rule(),
          &ad::square_rule()};
}

namespace {

using LossBuilder = std::function<ad::Var(ad::Graph&, std::span<const ad::Var>)>;

// Uniform in the unit disk: keeps complex tanh well away from its poles.
ComplexTensor disk_sample(Rng& rng, const Shape& shape, double radius = 1.0) {
  ComplexTensor out(shape);
  for (CScalar& z : out.data()) {
    const double r = radius * std::sqrt(rng.uniform());
    const double a = 2.0 * std::numbers::pi * rng.uniform();
    z = std::polar(r, a);
  }
  return out;
}

// Max normwise relative error between backward()'s conjugate cogradient and
// the oracle's dL/dz-bar, over every input.
double cogradient_error(const std::vector<ComplexTensor>& inputs, const LossBuilder& build) {
  auto evaluate = [&](std::size_t replaced, const ComplexTensor* value,
                      std::vector<ad::Var>& leaves, ad::Graph& g) {
    leaves.clear();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      leaves.push_back(g.leaf(i == replaced && value ? *value : inputs[i]));
    }
    return build(g, leaves);
  };

  ad::Graph graph;
  std::vector<ad::Var> leaves;
  const ad::Var loss = evaluate(inputs.size(), nullptr, leaves, graph);
  const ad::CogradientStore store = graph.backward(loss);

  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto f = [&](const ComplexTensor& theta) {
      ad::Graph g;
      std::vector<ad::Var> l;
      const ad::Var root = evaluate(i, &theta, l, g);
      return ComplexTensor::scalar(g.value(root)[0]);
    };
    const ad::JacobianPair oracle = ad::wirtinger_pair_numeric(f, inputs[i]);
    const ComplexTensor& analytic = store.at(leaves[i]);
    double diff = 0.0;
    double scale = 1e-8;
    for (std::size_t k = 0; k < analytic.size(); ++k) {
      diff = std::max(diff, std::abs(analytic[k] - oracle.jc(0, k)));
      scale = std::max(scale, std::abs(oracle.jc(0, k)));
    }
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

GradcheckEntry run(const std::string& name, std::size_t probes, double rtol,
                   const std::function<double(std::size_t)>& probe) {
  GradcheckEntry e{name, probes, 0.0, true};
  for (std::size_t p = 0; p < probes; ++p) {
    double err;
    try {
      err = probe(p);
    } catch (const std::exception&) {
      err = std::numeric_limits<double>::infinity();
    }
    e.max_rel_error = std::max(e.max_rel_error, err);
  }
  e.pass = e.max_rel_error <= rtol;
  return e;
}

ad::Var mse_against(ad::Graph& g, ad::Var pred, const ComplexTensor& target) {
  return g.mse(pred, g.constant(target), 2.0 * static_cast<double>(target.size()));
}

}  // namespace

GradcheckReport gradcheck_suite(const GradcheckOptions& options) {
  const std::vector<const ad::UnaryRule*> rules =
      options.rules.empty() ? registered_rules() : options.rules;
  const std::uint64_t seed = options.seed;
  const double rtol = options.rtol;
  const std::size_t probes = options.probes;
  GradcheckReport report;

  for (std::size_t r = 0; r < rules.size(); ++r) {
    const ad::UnaryRule& rule = *rules[r];
    report.entries.push_back(run(rule.name, probes, rtol, [&](std::size_t p) {
      Rng rng = Rng::stream(seed, {1, r, p});
      const ComplexTensor z = disk_sample(rng, {1});
      const ad::JacobianPair oracle =
          ad::wirtinger_pair_numeric([&](const ComplexTensor& x) { return ad::apply(rule, x); }, z);
      return ad::pair_relative_error(ad::rule_pair(rule, z), oracle);
    }));
    report.entries.push_back(run(rule.name + "/backward", probes, rtol, [&](std::size_t p) {
      Rng rng = Rng::stream(seed, {2, r, p});
      const ComplexTensor target = disk_sample(rng, {3});
      return cogradient_error({disk_sample(rng, {3})}, [&](ad::Graph& g, auto v) {
        return mse_against(g, g.unary(v[0], rule), target);
      });
    }));
  }

  report.entries.push_back(run("mse", probes, rtol, [&](std::size_t p) {
    Rng rng = Rng::stream(seed, {3, p});
    return cogradient_error({disk_sample(rng, {4, 2}), disk_sample(rng, {4, 2})},
                            [](ad::Graph& g, auto v) { return g.mse(v[0], v[1], 16.0); });
  }));

  report.entries.push_back(run("dense", probes, rtol, [&](std::size_t p) {
    Rng rng = Rng::stream(seed, {4, p});
    const ComplexTensor target = disk_sample(rng, {3, 2});
    return cogradient_error(
        {disk_sample(rng, {3, 4}), disk_sample(rng, {4, 2}), disk_sample(rng, {3})},
        [&](ad::Graph& g, auto v) {
          return mse_against(g, g.add_bias(g.matmul(v[0], v[1]), v[2]), target);
        });
  }));

  report.entries.push_back(run("recurrent", probes, rtol, [&](std::size_t p) {
    Rng rng = Rng::stream(seed, {5, p});
    const ComplexTensor target = disk_sample(rng, {3, 2});
    const auto& act = nn::activation_rule(nn::ActivationKind::ComplexTanh);
    // w_in, x, b_in, w_rec, h_prev, b_rec
    return cogradient_error(
        {disk_sample(rng, {3, 4}, 0.5), disk_sample(rng, {4, 2}), disk_sample(rng, {3}, 0.3),
         disk_sample(rng, {3, 3}, 0.5), disk_sample(rng, {3, 2}), disk_sample(rng, {3}, 0.3)},
        [&](ad::Graph& g, auto v) {
          const ad::Var in = g.add_bias(g.matmul(v[0], v[1]), v[2]);
          const ad::Var rec = g.add_bias(g.matmul(v[3], v[4]), v[5]);
          return mse_against(g, g.unary(g.add(in, rec), act), target);
        });
  }));

  struct TinyModel {
    const char* name;
    nn::Field field;
    nn::ActivationKind activation;
  };
  const TinyModel tiny[] = {
      {"bptt/complex-ctanh", nn::Field::Complex, nn::ActivationKind::ComplexTanh},
      {"bptt/complex-split-magnitude", nn::Field::Complex, nn::ActivationKind::SplitMagnitude},
      {"bptt/real", nn::Field::Real, nn::ActivationKind::RealTanh},
  };
  for (std::size_t m = 0; m < std::size(tiny); ++m) {
    report.entries.push_back(run(tiny[m].name, probes, rtol, [&](std::size_t p) {
      Rng rng = Rng::stream(seed, {6, m, p});
      const nn::ModelDims dims{4, 3, 4};
      nn::RecurrentModel model = nn::init_model(tiny[m].field, dims, tiny[m].activation, 0.8, rng);
      for (ComplexTensor* b : {&model.b_in, &model.b_rec, &model.b_out}) {
        *b = tiny[m].field == nn::Field::Complex ? sample_circular_gaussian(rng, b->shape(), 0.2)
                                                 : sample_real_gaussian(rng, b->shape(), 0.2);
      }
      auto draw = [&](const Shape& s) {
        return tiny[m].field == nn::Field::Complex ? disk_sample(rng, s)
                                                   : sample_real_gaussian(rng, s, 0.5);
      };
      const std::array<ComplexTensor, 3> frames{draw({4, 2}), draw({4, 2}), draw({4, 2})};
      const ComplexTensor target = draw({4, 2});
      std::vector<ComplexTensor> params;
      for (const ComplexTensor* t : model.parameters()) params.push_back(*t);
      return cogradient_error(params, [&](ad::Graph& g, std::span<const ad::Var> v) {
        const nn::ModelVars vars{v[0], v[1], v[2], v[3], v[4], v[5]};
        std::array<ad::Var, 3> inputs;
        for (std::size_t t = 0; t < 3; ++t) inputs[t] = g.constant(frames[t]);
        const ad::Var pred = nn::predict_frame(g, model, vars, inputs);
        return g.mse(pred, g.constant(target), nn::n_dof(model.field, target.size()));
      });
    }));
  }
  return report;
}

}  // namespace cvnn::analysis
