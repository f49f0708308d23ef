#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "cvnn/data/dataset.hpp"
#include "cvnn/nn/model.hpp"
#include "cvnn/train/sgd.hpp"

namespace cvnn::train {

// Model inputs for a set of observations: one column per observation.
struct FrameSet {
  std::array<ComplexTensor, nn::kInputSteps> inputs;  // each [d_in x n]
  ComplexTensor target;                               // [d_out x n]

  std::size_t count() const { return target.cols(); }
};

/// Lays out observations [begin, end) of a partition for a model field.
///
/// Complex models see the samples as they are. Real models see real parts
/// only, except on analytic data where each frame becomes the 512-vector
/// [re_0 .. re_255, im_0 .. im_255].
FrameSet make_frames(const ComplexTensor& rows, nn::Field field, bool analytic,
                     std::size_t begin, std::size_t end);

nn::ModelDims model_dims_for(nn::Field field, data::DatasetKind kind, std::size_t hidden);

// Throws ConfigError when the model cannot consume the dataset.
void check_compatible(const nn::RecurrentModel& model, data::DatasetKind kind);

// Mean of mse_loss over the observations (no gradient).
double evaluate(const nn::RecurrentModel& model, const FrameSet& frames);
double evaluate(const nn::RecurrentModel& model, const data::DatasetBundle& bundle,
                data::Partition partition);

// MSE of the all-zero prediction.
double zero_predictor_mse(nn::Field field, const FrameSet& frames);

enum class TrialStatus { Completed, Diverged };
std::string_view status_name(TrialStatus status);

struct EpochRecord {
  std::size_t epoch;
  double lr;
  double train_mse;  // mean pre-update batch loss over the epoch
  double val_mse;
};

struct TrialResult {
  TrainConfig config;
  std::vector<EpochRecord> history;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  TrialStatus status = TrialStatus::Completed;
  std::string divergence_reason;
  nn::RecurrentModel best_model;  // parameters at the best validation epoch
};

// Called after every optimizer step with the updated model.
using StepObserver =
    std::function<void(const nn::RecurrentModel& model, std::size_t epoch, std::size_t step)>;

/// Trains `model` for config.epochs epochs, one momentum step per batch of
/// config.batch_size training observations. Numeric blow-ups (non-finite
/// loss or update, tanh singularity) end the trial with status Diverged and
/// the history recorded so far.
TrialResult train(nn::RecurrentModel model, const data::DatasetBundle& bundle,
                  const TrainConfig& config, const StepObserver& observer = {});

// Initializes a model from config.seed / config.init_scale and trains it.
TrialResult run_trial(nn::Field field, std::size_t hidden, nn::ActivationKind activation,
                      const data::DatasetBundle& bundle, const TrainConfig& config,
                      const StepObserver& observer = {});

// epoch,lr,train_mse,val_mse
std::string curves_csv(const TrialResult& result);

}  // namespace cvnn::train
