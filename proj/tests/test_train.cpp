#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cvnn/ad/graph.hpp"
#include "cvnn/core/errors.hpp"
#include "cvnn/core/rng.hpp"
#include "cvnn/data/dataset.hpp"
#include "cvnn/nn/checkpoint.hpp"
#include "cvnn/train/search.hpp"
#include "cvnn/train/sgd.hpp"
#include "cvnn/train/trainer.hpp"

using namespace cvnn;
using namespace cvnn::train;
using data::DatasetKind;
using data::Partition;

namespace {

ComplexTensor s(CScalar z) { return ComplexTensor::vector({z}); }

// Every observation is a unit analytic tone on an integer bin of the frame,
// so the target frame repeats the last input frame.
data::DatasetBundle tone_bundle(std::size_t n) {
  data::DatasetBundle b;
  b.kind = DatasetKind::SawtoothAnalytic;
  b.train = ComplexTensor({n, data::kSamples});
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i + 1) / data::kFrameLength;
    for (std::size_t t = 0; t < data::kSamples; ++t) {
      b.train(i, t) = std::polar(1.0, 2 * std::numbers::pi * f * static_cast<double>(t));
    }
  }
  b.val = b.train;
  b.test = b.train;
  return b;
}

TrainConfig small_config() {
  TrainConfig c;
  c.epochs = 4;
  c.batch_size = 10;
  c.lr0 = 0.01;
  c.init_scale = 0.5;
  c.seed = 17;
  return c;
}

}  // namespace

TEST_CASE("lr_at") {
  TrainConfig c;
  c.lr0 = 0.3;
  c.half_life = 50;
  CHECK(lr_at(c, 0) == 0.3);
  CHECK(lr_at(c, 50) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(lr_at(c, 150) == doctest::Approx(0.075).epsilon(1e-15));
  c.decay_power = 2;
  CHECK(lr_at(c, 50) == doctest::Approx(0.3 / 4).epsilon(1e-15));
}

TEST_CASE("config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.lr0 = 0;
  CHECK_NOTHROW(c.validate());
  c.lr0 = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.momentum = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.half_life = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("sgd momentum step") {
  SUBCASE("zero gradient and velocity") {
    ComplexTensor p = ComplexTensor::vector({1.0, 2.0});
    const ComplexTensor before = p;
    ComplexTensor* params[] = {&p};
    const ComplexTensor g[] = {ComplexTensor({2})};
    ComplexTensor v[] = {ComplexTensor({2})};
    CHECK(sgd_momentum_step(params, g, v, 0.1, 0.9) == StepStatus::Ok);
    CHECK(p == before);
  }
  SUBCASE("no momentum is plain gradient descent") {
    Rng rng(1);
    ComplexTensor p = sample_circular_gaussian(rng, {3, 2}, 1.0);
    const ComplexTensor start = p;
    const ComplexTensor g = sample_circular_gaussian(rng, {3, 2}, 1.0);
    ComplexTensor* params[] = {&p};
    ComplexTensor v[] = {ComplexTensor({3, 2})};
    sgd_momentum_step(params, std::span(&g, 1), v, 0.25, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(p[k] == start[k] - 0.25 * g[k]);
  }
  SUBCASE("L = w wbar descends geometrically") {
    ComplexTensor w = s(1.0);
    ComplexTensor v[] = {ComplexTensor({1})};
    ComplexTensor* params[] = {&w};
    for (int k = 1; k <= 30; ++k) {
      ad::Graph g;
      const ad::Var x = g.leaf(w);
      const ad::CogradientStore grads = g.backward(g.sum(g.unary(x, ad::abs2_rule())));
      const ComplexTensor cg = grads.at(x);
      sgd_momentum_step(params, std::span(&cg, 1), v, 0.1, 0.0);
      CHECK(w[0].real() == doctest::Approx(std::pow(0.9, k)).epsilon(1e-13));
      CHECK(w[0].imag() == 0.0);
    }
  }
  SUBCASE("momentum converges on a complex start") {
    ComplexTensor w = s({1.0, -2.0});
    ComplexTensor v[] = {ComplexTensor({1})};
    ComplexTensor* params[] = {&w};
    for (int k = 0; k < 300; ++k) {
      const ComplexTensor cg = w;  // dL/dwbar for L = w wbar
      sgd_momentum_step(params, std::span(&cg, 1), v, 0.05, 0.9);
    }
    CHECK(std::abs(w[0]) < 1e-6);
  }
  SUBCASE("non-finite update writes nothing") {
    ComplexTensor a = s(1.0), b = s(2.0);
    ComplexTensor* params[] = {&a, &b};
    const ComplexTensor g[] = {s(1.0), s(std::numeric_limits<double>::infinity())};
    ComplexTensor v[] = {ComplexTensor({1}), ComplexTensor({1})};
    CHECK(sgd_momentum_step(params, g, v, 0.1, 0.5) == StepStatus::NonFinite);
    CHECK(a[0] == CScalar(1.0));
    CHECK(b[0] == CScalar(2.0));
    CHECK(max_abs(v[0]) == 0.0);
  }
  SUBCASE("clip keeps phase") {
    ComplexTensor g = ComplexTensor::vector({{3.0, 4.0}, {0.1, 0.0}});
    clip_cogradient(g, 1.0);
    CHECK(std::abs(g[0]) == doctest::Approx(1.0));
    CHECK(std::arg(g[0]) == doctest::Approx(std::atan2(4.0, 3.0)));
    CHECK(g[1] == CScalar(0.1));
  }
}

TEST_CASE("frames and evaluation") {
  const data::DatasetBundle tones = tone_bundle(12);

  SUBCASE("identity fixture predicts perfectly") {
    auto m = nn::RecurrentModel::zeros(nn::Field::Complex, {256, 256, 256}, nn::ActivationKind::Linear);
    for (std::size_t i = 0; i < 256; ++i) {
      m.w_in(i, i) = 1.0;
      m.w_out(i, i) = 1.0;
    }
    CHECK(evaluate(m, tones, Partition::Val) < 1e-20);
  }
  SUBCASE("zero model on unit tones") {
    const auto m = nn::RecurrentModel::zeros(nn::Field::Complex, {256, 8, 256},
                                             nn::ActivationKind::ComplexTanh);
    CHECK(evaluate(m, tones, Partition::Val) == doctest::Approx(0.5).epsilon(1e-14));
    const FrameSet f = make_frames(tones.val, nn::Field::Complex, true, 0, 12);
    CHECK(zero_predictor_mse(nn::Field::Complex, f) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("order invariance") {
    Rng rng(3);
    const auto m = nn::init_model(nn::Field::Complex, {256, 8, 256}, nn::ActivationKind::ComplexTanh,
                                  1.0, rng);
    const data::DatasetBundle b = data::generate_dataset(DatasetKind::Sawtooth, 4, {1, 9, 1});
    data::DatasetBundle reversed = b;
    for (std::size_t i = 0; i < 9; ++i) {
      for (std::size_t t = 0; t < data::kSamples; ++t) reversed.val(i, t) = b.val(8 - i, t);
    }
    CHECK(evaluate(m, reversed, Partition::Val) ==
          doctest::Approx(evaluate(m, b, Partition::Val)).epsilon(1e-13));
  }
  SUBCASE("real models on analytic data see [re; im]") {
    const FrameSet f = make_frames(tones.train, nn::Field::Real, true, 2, 5);
    CHECK(f.inputs[0].shape() == Shape{512, 3});
    CHECK(max_abs_imag(f.inputs[1]) == 0.0);
    CHECK(f.target(256 + 7, 1).real() == tones.train(3, 768 + 7).imag());
    CHECK(model_dims_for(nn::Field::Real, DatasetKind::InharmonicAnalytic, 32) ==
          nn::ModelDims{512, 32, 512});
    CHECK(model_dims_for(nn::Field::Real, DatasetKind::Inharmonic, 32) ==
          nn::ModelDims{256, 32, 256});
  }
  SUBCASE("incompatible model") {
    const auto m = nn::RecurrentModel::zeros(nn::Field::Real, {256, 8, 256}, nn::ActivationKind::RealTanh);
    CHECK_THROWS_AS(evaluate(m, tones, Partition::Val), ConfigError);
    CHECK_THROWS_AS(train::train(m, tones, small_config()), ConfigError);
  }
}

TEST_CASE("training") {
  const data::DatasetBundle bundle = data::generate_dataset(DatasetKind::Sawtooth, 2, {40, 20, 5});

  SUBCASE("lr0 = 0 changes nothing") {
    TrainConfig c = small_config();
    c.lr0 = 0;
    Rng rng(5);
    const auto m = nn::init_model(nn::Field::Complex, {256, 6, 256}, nn::ActivationKind::ComplexTanh,
                                  0.5, rng);
    std::size_t steps = 0;
    const TrialResult r = train::train(m, bundle, c, [&](const nn::RecurrentModel& now, auto, auto) {
      ++steps;
      for (std::size_t i = 0; i < 6; ++i) CHECK(*now.parameters()[i] == *m.parameters()[i]);
    });
    CHECK(steps == 4 * 4);
    CHECK(r.status == TrialStatus::Completed);
    for (const EpochRecord& e : r.history) {
      CHECK(e.train_mse == r.history.front().train_mse);
      CHECK(e.val_mse == r.history.front().val_mse);
    }
  }
  SUBCASE("deterministic") {
    TrainConfig c = small_config();
    c.shuffle = true;
    const TrialResult a = run_trial(nn::Field::Complex, 6, nn::ActivationKind::SplitMagnitude, bundle, c);
    const TrialResult b = run_trial(nn::Field::Complex, 6, nn::ActivationKind::SplitMagnitude, bundle, c);
    CHECK(curves_csv(a) == curves_csv(b));
    CHECK(nn::encode_checkpoint(a.best_model) == nn::encode_checkpoint(b.best_model));
    c.seed += 1;
    CHECK(curves_csv(run_trial(nn::Field::Complex, 6, nn::ActivationKind::SplitMagnitude, bundle, c)) !=
          curves_csv(a));
  }
  SUBCASE("history and best epoch") {
    const TrialResult r = run_trial(nn::Field::Complex, 6, nn::ActivationKind::ComplexTanh, bundle,
                                    small_config());
    REQUIRE(r.history.size() == 4);
    double best = std::numeric_limits<double>::infinity();
    for (const EpochRecord& e : r.history) best = std::min(best, e.val_mse);
    CHECK(r.best_val == best);
    CHECK(r.history[r.best_epoch].val_mse == best);
    CHECK(evaluate(r.best_model, bundle, Partition::Val) == doctest::Approx(best).epsilon(1e-12));
    const std::string csv = curves_csv(r);
    CHECK(csv.rfind("epoch,lr,train_mse,val_mse\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  }
  SUBCASE("real model keeps zero imaginary parts") {
    TrainConfig c = small_config();
    c.lr0 = 0.05;
    double worst = 0;
    const TrialResult r = run_trial(nn::Field::Real, 6, nn::ActivationKind::RealTanh, bundle, c,
                                    [&](const nn::RecurrentModel& m, auto, auto) {
                                      for (const ComplexTensor* p : m.parameters()) {
                                        worst = std::max(worst, max_abs_imag(*p));
                                      }
                                    });
    CHECK(r.status == TrialStatus::Completed);
    CHECK(worst == 0.0);
  }
  SUBCASE("huge learning rate diverges without throwing") {
    TrainConfig c = small_config();
    c.lr0 = 1e6;
    c.init_scale = 3;
    c.epochs = 20;
    TrialResult r;
    CHECK_NOTHROW(r = run_trial(nn::Field::Complex, 6, nn::ActivationKind::ComplexTanh, bundle, c));
    CHECK(r.status == TrialStatus::Diverged);
    CHECK_FALSE(r.divergence_reason.empty());
    CHECK(r.history.size() < 20);
  }
  SUBCASE("learning beats the zero predictor on a learnable task") {
    const data::DatasetBundle tones = tone_bundle(8);
    TrainConfig c;
    c.epochs = 40;
    c.batch_size = 4;
    c.lr0 = 10;
    c.init_scale = 0.3;
    c.half_life = 20;
    c.seed = 1;
    const TrialResult r = run_trial(nn::Field::Complex, 16, nn::ActivationKind::ComplexTanh, tones, c);
    CHECK(r.status == TrialStatus::Completed);
    // The zero predictor scores 0.5 on unit tones.
    CHECK(r.best_val < 0.1);
  }
}

TEST_CASE("random search") {
  const data::DatasetBundle bundle = data::generate_dataset(DatasetKind::Sawtooth, 3, {20, 10, 2});
  SearchSettings settings;
  settings.hidden = 4;
  settings.base.epochs = 80;
  settings.base.batch_size = 10;

  SUBCASE("one trial") {
    CHECK(random_search({}, 1, bundle, 1, settings).size() == 1);
  }
  SUBCASE("ranked, diverged last, independent of job count") {
    SearchSpace wild;
    wild.lr0 = {1e-1, 1e7};
    const auto ranked = random_search(wild, 8, bundle, 5, settings);
    REQUIRE(ranked.size() == 8);
    bool seen_diverged = false;
    double last = -1;
    for (const SearchTrial& t : ranked) {
      if (t.result.status == TrialStatus::Diverged) {
        seen_diverged = true;
        continue;
      }
      CHECK_FALSE(seen_diverged);
      CHECK(t.result.best_val >= last);
      last = t.result.best_val;
    }
    CHECK(seen_diverged);

    settings.jobs = 3;
    CHECK(search_summary_csv(random_search(wild, 8, bundle, 5, settings)) ==
          search_summary_csv(ranked));
  }
  SUBCASE("trial configs come from their own streams") {
    const TrainConfig a = draw_trial_config({}, settings.base, 9, 4);
    const TrainConfig b = draw_trial_config({}, settings.base, 9, 4);
    const TrainConfig c = draw_trial_config({}, settings.base, 9, 5);
    CHECK(a.lr0 == b.lr0);
    CHECK(a.seed == b.seed);
    CHECK(a.lr0 != c.lr0);
    CHECK(a.lr0 >= 1e-5);
    CHECK(a.lr0 <= 1.0);
    CHECK(a.half_life >= 10);
    CHECK(a.half_life <= 1000);
    CHECK(a.init_scale >= 1e-2);
    CHECK(a.init_scale <= 10);
  }
  SUBCASE("invalid ranges") {
    SearchSpace bad;
    bad.lr0 = {1.0, 0.1};
    CHECK_THROWS_AS(random_search(bad, 2, bundle, 1, settings), ConfigError);
    bad = {};
    bad.half_life = {0.0, 1.0};
    CHECK_THROWS_AS(random_search(bad, 2, bundle, 1, settings), ConfigError);
    CHECK_THROWS_AS(random_search({}, 0, bundle, 1, settings), ConfigError);
  }
  SUBCASE("summary csv") {
    const auto ranked = random_search({}, 2, bundle, 1, settings);
    const std::string csv = search_summary_csv(ranked);
    CHECK(csv.rfind("trial_id,lr0,half_life,init_scale,best_val,status\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  }
}
