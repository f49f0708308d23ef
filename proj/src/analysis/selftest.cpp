#include "cvnn/analysis/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>

#include "cvnn/ad/graph.hpp"
#include "cvnn/ad/jacobian.hpp"
#include "cvnn/analysis/dft.hpp"
#include "cvnn/analysis/gradcheck.hpp"
#include "cvnn/core/rng.hpp"
#include "cvnn/data/dataset.hpp"
#include "cvnn/nn/checkpoint.hpp"
#include "cvnn/nn/model.hpp"

namespace cvnn::analysis {

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

SelftestCheck guarded(std::string name, const std::function<SelftestCheck()>& body) {
  try {
    SelftestCheck c = body();
    c.name = std::move(name);
    return c;
  } catch (const std::exception& e) {
    return {std::move(name), false, e.what()};
  }
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::uint64_t seed) {
  std::vector<SelftestCheck> checks;

  checks.push_back(guarded("gradcheck", [&] {
    GradcheckOptions options;
    options.seed = seed;
    const GradcheckReport report = gradcheck_suite(options);
    double worst = 0.0;
    for (const auto& e : report.entries) worst = std::max(worst, e.max_rel_error);
    return SelftestCheck{{}, report.all_pass(), "max_rel_err=" + sci(worst)};
  }));

  checks.push_back(guarded("holomorphy", [&] {
    Rng rng = Rng::stream(seed, {1});
    std::vector<ComplexTensor> probes;
    for (int i = 0; i < 20; ++i) probes.push_back(sample_circular_gaussian(rng, {1}, 0.8));
    bool ok = true;
    for (const ad::UnaryRule* rule : registered_rules()) {
      const bool numeric = ad::is_holomorphic_numeric(
          [rule](const ComplexTensor& z) { return ad::apply(*rule, z); }, probes, 1e-8);
      if (numeric != rule->holomorphic) ok = false;
    }
    return SelftestCheck{{}, ok, ok ? "flags agree" : "flag mismatch"};
  }));

  checks.push_back(guarded("conjugate-of-abs2", [&] {
    const ComplexTensor z = ComplexTensor::vector({{0.3, -1.2}, {2.0, 0.5}});
    ad::Graph g;
    const ad::Var x = g.leaf(z);
    const ad::Var loss = g.sum(g.unary(x, ad::abs2_rule()));
    const double err = max_abs_diff(g.backward(loss).at(x), z);
    return SelftestCheck{{}, err == 0.0, "err=" + sci(err)};
  }));

  checks.push_back(guarded("parameter-counts", [&] {
    const auto c = nn::RecurrentModel::zeros(nn::Field::Complex, {256, 256, 256},
                                             nn::ActivationKind::ComplexTanh);
    const auto r = nn::RecurrentModel::zeros(nn::Field::Real, {512, 256, 512},
                                             nn::ActivationKind::RealTanh);
    const bool ok = c.parameter_count() == 197376 && r.parameter_count() == 328704;
    return SelftestCheck{{}, ok,
                         std::to_string(c.parameter_count()) + "/" +
                             std::to_string(r.parameter_count())};
  }));

  checks.push_back(guarded("dft-roundtrip", [&] {
    Rng rng = Rng::stream(seed, {2});
    const ComplexTensor x = sample_circular_gaussian(rng, {256}, 1.0);
    const double err = max_abs_diff(idft(dft(x)), x);
    return SelftestCheck{{}, err < 1e-12, "err=" + sci(err)};
  }));

  checks.push_back(guarded("analytic-one-sided", [&] {
    // Components on exact bins leave nothing at negative frequencies.
    data::WaveformSpec spec;
    spec.analytic = true;
    spec.components = {{8.0 / 1024, 1.0, 0.4}, {24.0 / 1024, 1.0 / 3, 0.9}};
    const Spectrum s = dft(data::synthesize(spec));
    const std::vector<double> mag = s.magnitude();
    double peak = 0.0;
    double negative = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
      peak = std::max(peak, mag[k]);
      if (k > mag.size() / 2) negative = std::max(negative, mag[k]);
    }
    return SelftestCheck{{}, negative < 1e-9 * peak, "ratio=" + sci(negative / peak)};
  }));

  checks.push_back(guarded("dataset-roundtrip", [&] {
    const data::DatasetBundle b =
        data::generate_dataset(data::DatasetKind::SawtoothAnalytic, seed, {3, 2, 1});
    return SelftestCheck{{}, data::decode_dataset(data::encode_dataset(b)) == b, {}};
  }));

  checks.push_back(guarded("checkpoint-roundtrip", [&] {
    Rng rng = Rng::stream(seed, {3});
    const nn::RecurrentModel m =
        nn::init_model(nn::Field::Complex, {8, 4, 8}, nn::ActivationKind::SplitMagnitude, 1.0, rng);
    const auto bytes = nn::encode_checkpoint(m);
    return SelftestCheck{{}, nn::encode_checkpoint(nn::decode_checkpoint(bytes)) == bytes, {}};
  }));

  return checks;
}

}  // namespace cvnn::analysis
