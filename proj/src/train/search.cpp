#include "cvnn/train/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>

#include "cvnn/core/csv.hpp"
#include "cvnn/core/errors.hpp"

namespace cvnn::train {

void SearchSpace::validate() const {
  auto check = [](const LogRange& r, const char* name) {
    if (!(r.lo > 0.0) || !(r.hi >= r.lo) || !std::isfinite(r.hi)) {
      throw ConfigError(std::string("search range for ") + name + " must satisfy 0 < lo <= hi");
    }
  };
  check(lr0, "lr0");
  check(half_life, "half_life");
  check(init_scale, "init_scale");
}

TrainConfig draw_trial_config(const SearchSpace& space, const TrainConfig& base,
                              std::uint64_t seed, std::size_t trial_id) {
  Rng rng = Rng::stream(seed, {0x534541524348ull, trial_id});
  TrainConfig c = base;
  c.lr0 = rng.log_uniform(space.lr0.lo, space.lr0.hi);
  c.half_life = rng.log_uniform(space.half_life.lo, space.half_life.hi);
  c.init_scale = rng.log_uniform(space.init_scale.lo, space.init_scale.hi);
  c.seed = rng.next_u64();
  return c;
}

std::vector<SearchTrial> random_search(const SearchSpace& space, std::size_t n_trials,
                                       const data::DatasetBundle& bundle, std::uint64_t seed,
                                       const SearchSettings& settings) {
  space.validate();
  if (n_trials == 0) throw ConfigError("random_search: n_trials must be >= 1");
  settings.base.validate();
  // Fail on dimension problems before any trial starts.
  check_compatible(nn::RecurrentModel::zeros(
                       settings.field, model_dims_for(settings.field, bundle.kind, settings.hidden),
                       settings.activation),
                   bundle.kind);

  std::vector<SearchTrial> trials(n_trials);
  std::vector<std::exception_ptr> errors(n_trials);
  const auto n = static_cast<std::int64_t>(n_trials);
  const int jobs = static_cast<int>(std::max<std::size_t>(1, settings.jobs));
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto id = static_cast<std::size_t>(i);
    try {
      const TrainConfig config = draw_trial_config(space, settings.base, seed, id);
      trials[id] = {id, run_trial(settings.field, settings.hidden, settings.activation, bundle,
                                  config)};
    } catch (...) {
      errors[id] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::stable_sort(trials.begin(), trials.end(), [](const SearchTrial& a, const SearchTrial& b) {
    const bool a_ok = a.result.status == TrialStatus::Completed;
    const bool b_ok = b.result.status == TrialStatus::Completed;
    if (a_ok != b_ok) return a_ok;
    if (!a_ok) return false;
    return a.result.best_val < b.result.best_val;
  });
  return trials;
}

std::string search_summary_csv(const std::vector<SearchTrial>& ranked) {
  std::string out = "trial_id,lr0,half_life,init_scale,best_val,status\n";
  for (const SearchTrial& t : ranked) {
    const TrainConfig& c = t.result.config;
    out += std::to_string(t.trial_id) + "," + format_real(c.lr0) + "," +
           format_real(c.half_life) + "," + format_real(c.init_scale) + "," +
           format_real(t.result.best_val) + "," + std::string(status_name(t.result.status)) +
           "\n";
  }
  return out;
}

}  // namespace cvnn::train
