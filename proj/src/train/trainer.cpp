#include "cvnn/train/trainer.hpp"

#include <cmath>
#include <numeric>

#include "cvnn/core/csv.hpp"
#include "cvnn/core/errors.hpp"

namespace cvnn::train {

using data::kFrameLength;
using data::kSamples;

FrameSet make_frames(const ComplexTensor& rows, nn::Field field, bool analytic,
                     std::size_t begin, std::size_t end) {
  if (rows.rank() != 2 || rows.cols() != kSamples || end > rows.rows() || begin > end) {
    throw DimensionError("make_frames: bad observation range for " + shape_string(rows.shape()));
  }
  const std::size_t n = end - begin;
  const bool split = field == nn::Field::Real && analytic;
  const std::size_t d = split ? 2 * kFrameLength : kFrameLength;

  auto layout = [&](std::size_t frame) {
    ComplexTensor out(Shape{d, n});
    for (std::size_t j = 0; j < n; ++j) {
      const CScalar* src = rows.data().data() + (begin + j) * kSamples + frame * kFrameLength;
      for (std::size_t r = 0; r < kFrameLength; ++r) {
        const CScalar z = src[r];
        if (field == nn::Field::Complex) {
          out[r * n + j] = z;
        } else {
          out[r * n + j] = CScalar(z.real(), 0.0);
          if (split) out[(kFrameLength + r) * n + j] = CScalar(z.imag(), 0.0);
        }
      }
    }
    return out;
  };
  return {{layout(0), layout(1), layout(2)}, layout(3)};
}

nn::ModelDims model_dims_for(nn::Field field, data::DatasetKind kind, std::size_t hidden) {
  const std::size_t d =
      field == nn::Field::Real && data::is_analytic(kind) ? 2 * kFrameLength : kFrameLength;
  return {d, hidden, d};
}

void check_compatible(const nn::RecurrentModel& model, data::DatasetKind kind) {
  const nn::ModelDims want = model_dims_for(model.field, kind, model.dims().hidden);
  const nn::ModelDims have = model.dims();
  if (have != want) {
    throw ConfigError("model dims " + std::to_string(have.input) + "/" +
                      std::to_string(have.hidden) + "/" + std::to_string(have.output) +
                      " do not fit a " + std::string(nn::field_name(model.field)) + " model on " +
                      std::string(data::kind_name(kind)) + " data (expected " +
                      std::to_string(want.input) + "/" + std::to_string(want.hidden) + "/" +
                      std::to_string(want.output) + ")");
  }
}

double evaluate(const nn::RecurrentModel& model, const FrameSet& frames) {
  if (frames.count() == 0) return 0.0;
  const ComplexTensor pred = nn::predict_frame(model, frames.inputs);
  return nn::mse_loss(pred, frames.target, model.field);
}

double evaluate(const nn::RecurrentModel& model, const data::DatasetBundle& bundle,
                data::Partition partition) {
  check_compatible(model, bundle.kind);
  const ComplexTensor& rows = bundle.partition(partition);
  const std::size_t n = rows.rows();
  if (n == 0) return 0.0;
  constexpr std::size_t kChunk = 1000;
  double total = 0.0;
  for (std::size_t begin = 0; begin < n; begin += kChunk) {
    const std::size_t end = std::min(n, begin + kChunk);
    const FrameSet frames =
        make_frames(rows, model.field, data::is_analytic(bundle.kind), begin, end);
    total += evaluate(model, frames) * static_cast<double>(end - begin);
  }
  return total / static_cast<double>(n);
}

double zero_predictor_mse(nn::Field field, const FrameSet& frames) {
  return sum_abs2(frames.target) / nn::n_dof(field, frames.target.size());
}

std::string_view status_name(TrialStatus status) {
  return status == TrialStatus::Completed ? "completed" : "diverged";
}

namespace {

struct Batches {
  std::vector<FrameSet> sets;
};

Batches make_batches(const data::DatasetBundle& bundle, nn::Field field,
                     const std::vector<std::size_t>& order, std::size_t batch_size) {
  const ComplexTensor& rows = bundle.train;
  const bool analytic = data::is_analytic(bundle.kind);
  Batches b;
  if (order.empty()) {
    for (std::size_t begin = 0; begin < rows.rows(); begin += batch_size) {
      b.sets.push_back(make_frames(rows, field, analytic, begin,
                                   std::min(rows.rows(), begin + batch_size)));
    }
    return b;
  }
  // Shuffled: gather rows into a permuted copy first.
  ComplexTensor permuted(rows.shape());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::copy_n(rows.data().data() + order[i] * kSamples, kSamples,
                permuted.data().data() + i * kSamples);
  }
  for (std::size_t begin = 0; begin < rows.rows(); begin += batch_size) {
    b.sets.push_back(make_frames(permuted, field, analytic, begin,
                                 std::min(rows.rows(), begin + batch_size)));
  }
  return b;
}

std::vector<std::size_t> epoch_order(const TrainConfig& config, std::size_t n, std::size_t epoch) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng::stream(config.seed, {0x5348554646ull, epoch});
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

// One momentum step on a batch; returns the pre-update loss.
double batch_step(nn::RecurrentModel& model, const FrameSet& batch, const TrainConfig& config,
                  std::array<ComplexTensor, 6>& velocity, double lr) {
  ad::Graph graph;
  const nn::ModelVars vars = nn::bind(graph, model);
  std::array<ad::Var, nn::kInputSteps> frames;
  for (std::size_t t = 0; t < nn::kInputSteps; ++t) frames[t] = graph.constant(batch.inputs[t]);
  const ad::Var pred = nn::predict_frame(graph, model, vars, frames);
  const ad::Var target = graph.constant(batch.target);
  const ad::Var loss = graph.mse(pred, target, nn::n_dof(model.field, batch.target.size()));
  const double value = graph.value(loss)[0].real();
  if (!std::isfinite(value)) throw NumericError("non-finite training loss");

  const ad::CogradientStore store = graph.backward(loss);
  std::array<ComplexTensor, 6> grads;
  const auto ids = vars.all();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    grads[k] = store.at(ids[k]);
    clip_cogradient(grads[k], config.clip);
  }
  if (sgd_momentum_step(model.parameters(), grads, velocity, lr, config.momentum) !=
      StepStatus::Ok) {
    throw NumericError("non-finite parameter update");
  }
  return value;
}

}  // namespace

TrialResult train(nn::RecurrentModel model, const data::DatasetBundle& bundle,
                  const TrainConfig& config, const StepObserver& observer) {
  config.validate();
  model.validate();
  check_compatible(model, bundle.kind);
  if (bundle.train.rows() == 0) throw ConfigError("training partition is empty");

  TrialResult result;
  result.config = config;
  result.best_model = model;

  const FrameSet val = make_frames(bundle.val, model.field, data::is_analytic(bundle.kind), 0,
                                   bundle.val.rows());
  Batches batches;
  if (!config.shuffle) batches = make_batches(bundle, model.field, {}, config.batch_size);

  std::array<ComplexTensor, 6> velocity;
  {
    const auto params = model.parameters();
    for (std::size_t k = 0; k < params.size(); ++k) velocity[k] = ComplexTensor(params[k]->shape());
  }

  const double n_train = static_cast<double>(bundle.train.rows());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_at(config, epoch);
    try {
      if (config.shuffle) {
        batches = make_batches(bundle, model.field, epoch_order(config, bundle.train.rows(), epoch),
                               config.batch_size);
      }
      double train_sum = 0.0;
      for (std::size_t s = 0; s < batches.sets.size(); ++s) {
        const FrameSet& batch = batches.sets[s];
        const double loss = batch_step(model, batch, config, velocity, lr);
        train_sum += loss * static_cast<double>(batch.count());
        if (observer) observer(model, epoch, s);
      }
      const double val_mse = evaluate(model, val);
      if (!std::isfinite(val_mse)) throw NumericError("non-finite validation error");
      result.history.push_back({epoch, lr, train_sum / n_train, val_mse});
      if (val_mse < result.best_val) {
        result.best_val = val_mse;
        result.best_epoch = epoch;
        result.best_model = model;
      }
    } catch (const NumericError& e) {
      result.status = TrialStatus::Diverged;
      result.divergence_reason = "epoch " + std::to_string(epoch) + ": " + e.what();
      return result;
    }
  }
  return result;
}

TrialResult run_trial(nn::Field field, std::size_t hidden, nn::ActivationKind activation,
                      const data::DatasetBundle& bundle, const TrainConfig& config,
                      const StepObserver& observer) {
  config.validate();
  Rng rng = Rng::stream(config.seed, {0x494E4954ull});
  nn::RecurrentModel model = nn::init_model(field, model_dims_for(field, bundle.kind, hidden),
                                            activation, config.init_scale, rng);
  return train(std::move(model), bundle, config, observer);
}

std::string curves_csv(const TrialResult& result) {
  std::string out = "epoch,lr,train_mse,val_mse\n";
  for (const EpochRecord& r : result.history) {
    out += std::to_string(r.epoch) + "," + format_real(r.lr) + "," + format_real(r.train_mse) +
           "," + format_real(r.val_mse) + "\n";
  }
  return out;
}

}  // namespace cvnn::train
