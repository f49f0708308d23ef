#include "cvnn/train/sgd.hpp"

#include <cmath>

#include "cvnn/core/errors.hpp"

namespace cvnn::train {

void TrainConfig::validate() const {
  if (!(lr0 >= 0.0) || !std::isfinite(lr0)) throw ConfigError("lr0 must be finite and >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (!(half_life > 0.0)) throw ConfigError("half_life must be positive");
  if (!(init_scale > 0.0)) throw ConfigError("init_scale must be positive");
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(decay_power >= 0.0)) throw ConfigError("decay_power must be >= 0");
  if (!(clip >= 0.0)) throw ConfigError("clip must be >= 0");
}

double lr_at(const TrainConfig& config, std::size_t epoch) {
  const double x = 1.0 + static_cast<double>(epoch) / config.half_life;
  return config.decay_power == 1.0 ? config.lr0 / x : config.lr0 * std::pow(x, -config.decay_power);
}

StepStatus sgd_momentum_step(std::span<ComplexTensor* const> params,
                             std::span<const ComplexTensor> cograds,
                             std::span<ComplexTensor> velocity, double lr, double momentum) {
  if (params.size() != cograds.size() || params.size() != velocity.size()) {
    throw DimensionError("sgd_momentum_step: parameter, cogradient and velocity counts differ");
  }
  std::vector<ComplexTensor> next_v(params.size());
  std::vector<ComplexTensor> next_p(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const ComplexTensor& p = *params[k];
    if (cograds[k].shape() != p.shape() || velocity[k].shape() != p.shape()) {
      throw DimensionError("sgd_momentum_step: shape mismatch for parameter " + std::to_string(k) +
                           " " + shape_string(p.shape()));
    }
    next_v[k] = ComplexTensor(p.shape());
    next_p[k] = ComplexTensor(p.shape());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const CScalar v = momentum * velocity[k][i] - lr * cograds[k][i];
      next_v[k][i] = v;
      next_p[k][i] = p[i] + v;
    }
    if (!all_finite(next_p[k]) || !all_finite(next_v[k])) return StepStatus::NonFinite;
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    *params[k] = std::move(next_p[k]);
    velocity[k] = std::move(next_v[k]);
  }
  return StepStatus::Ok;
}

void clip_cogradient(ComplexTensor& g, double threshold) {
  if (threshold <= 0.0) return;
  for (CScalar& z : g.data()) {
    const double m = std::abs(z);
    if (m > threshold) z *= threshold / m;
  }
}

}  // namespace cvnn::train
