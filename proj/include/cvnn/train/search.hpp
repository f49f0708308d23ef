#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvnn/train/trainer.hpp"

namespace cvnn::train {

struct LogRange {
  double lo;
  double hi;
};

// Log-uniform ranges for the three searched hyperparameters.
struct SearchSpace {
  LogRange lr0{1e-5, 1e0};
  LogRange half_life{10.0, 1000.0};
  LogRange init_scale{1e-2, 1e1};

  // Throws ConfigError on empty, inverted or non-positive ranges.
  void validate() const;
};

struct SearchSettings {
  nn::Field field = nn::Field::Complex;
  std::size_t hidden = 256;
  nn::ActivationKind activation = nn::ActivationKind::ComplexTanh;
  // epochs, batch size, momentum etc.; lr0 / half_life / init_scale / seed
  // are overwritten per trial.
  TrainConfig base;
  std::size_t jobs = 1;
};

struct SearchTrial {
  std::size_t trial_id;
  TrialResult result;
};

/// Runs n_trials independent trials with hyperparameters drawn from the
/// stream (seed, trial_id). Trials may run concurrently (settings.jobs);
/// results do not depend on the job count.
///
/// Returned in rank order: completed trials by best_val ascending, then
/// diverged trials; ties keep trial order.
std::vector<SearchTrial> random_search(const SearchSpace& space, std::size_t n_trials,
                                       const data::DatasetBundle& bundle, std::uint64_t seed,
                                       const SearchSettings& settings);

// Hyperparameters of trial `trial_id` (everything else from `base`).
TrainConfig draw_trial_config(const SearchSpace& space, const TrainConfig& base,
                              std::uint64_t seed, std::size_t trial_id);

// trial_id,lr0,half_life,init_scale,best_val,status
std::string search_summary_csv(const std::vector<SearchTrial>& ranked);

}  // namespace cvnn::train
