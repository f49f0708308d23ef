#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cvnn/core/tensor.hpp"

namespace cvnn::train {

struct TrainConfig {
  double lr0 = 1e-3;
  double momentum = 0.9;
  double half_life = 100.0;  // epochs
  double init_scale = 1.0;
  std::size_t epochs = 1000;
  std::size_t batch_size = 1000;
  std::uint64_t seed = 0;
  double decay_power = 1.0;
  double clip = 0.0;  // max |cogradient| per element; 0 disables
  bool shuffle = false;

  // Throws ConfigError.
  void validate() const;
};

// lr0 / (1 + epoch / half_life)^decay_power. With the default power of 1 the
// rate halves at epoch == half_life.
double lr_at(const TrainConfig& config, std::size_t epoch);

enum class StepStatus { Ok, NonFinite };

/// v <- momentum v - lr g;  theta <- theta + v
///
/// g is the conjugate cogradient dL/dtheta-bar, the steepest-ascent direction
/// of a real loss. Nothing is written unless every updated value is finite.
StepStatus sgd_momentum_step(std::span<ComplexTensor* const> params,
                             std::span<const ComplexTensor> cograds,
                             std::span<ComplexTensor> velocity, double lr, double momentum);

// Scales elements whose magnitude exceeds `threshold` back onto it, keeping phase.
void clip_cogradient(ComplexTensor& g, double threshold);

}  // namespace cvnn::train
