// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// The desk-scale protocol (criteria 7-11): Sawtooth-Like data, 500 train /
// 200 val / 200 test observations, hidden size 32, 200 epochs, batches of 50
// (10 steps per epoch), 10 random-search trials, fixed seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cvnn/ad/graph.hpp"
#include "cvnn/ad/jacobian.hpp"
#include "cvnn/analysis/dft.hpp"
#include "cvnn/analysis/gradcheck.hpp"
#include "cvnn/core/binary_io.hpp"
#include "cvnn/core/csv.hpp"
#include "cvnn/core/rng.hpp"
#include "cvnn/data/dataset.hpp"
#include "cvnn/nn/activation.hpp"
#include "cvnn/nn/model.hpp"
#include "cvnn/train/search.hpp"
#include "cvnn/train/trainer.hpp"
#include "oracles.hpp"

using namespace cvnn;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kDataSeed = 20160204;
constexpr std::uint64_t kSearchSeed = 7;
constexpr std::size_t kTrials = 10;
constexpr std::size_t kHidden = 32;
constexpr std::size_t kEpochs = 200;
constexpr std::size_t kBatch = 50;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("[%s] criterion %2d  %-34s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

ComplexTensor disk_point(Rng& rng, double radius) {
  return ComplexTensor::vector(
      {std::polar(radius * std::sqrt(rng.uniform()), 2 * std::numbers::pi * rng.uniform())});
}

ad::TensorFn of_rule(const ad::UnaryRule& rule) {
  return [&rule](const ComplexTensor& z) { return ad::apply(rule, z); };
}

train::SearchSettings desk_settings(nn::Field field) {
  train::SearchSettings s;
  s.field = field;
  s.hidden = kHidden;
  s.activation = field == nn::Field::Complex ? nn::ActivationKind::ComplexTanh
                                             : nn::ActivationKind::RealTanh;
  s.base.epochs = kEpochs;
  s.base.batch_size = kBatch;
  return s;
}

const data::DatasetBundle& desk_data() {
  static const data::DatasetBundle bundle =
      data::generate_dataset(data::DatasetKind::Sawtooth, kDataSeed, {500, 200, 200});
  return bundle;
}

double zero_baseline(nn::Field field) {
  const data::DatasetBundle& b = desk_data();
  return train::zero_predictor_mse(field, train::make_frames(b.val, field, false, 0, b.val.rows()));
}

// Every CSV a search run emits, keyed by file name.
std::vector<std::pair<std::string, std::string>> search_csvs(
    const std::vector<train::SearchTrial>& ranked) {
  std::vector<std::pair<std::string, std::string>> out{
      {"summary.csv", train::search_summary_csv(ranked)}};
  for (const auto& t : ranked) {
    out.emplace_back("trial_" + std::to_string(t.trial_id) + ".csv", train::curves_csv(t.result));
  }
  return out;
}

std::vector<train::SearchTrial> complex_search;
std::vector<train::SearchTrial> real_search;

}  // namespace

int main() {
  std::printf("desk protocol: sawtooth, 500/200/200 obs, hidden %zu, %zu epochs, batch %zu, %zu trials\n",
              kHidden, kEpochs, kBatch, kTrials);

  report(1, "gradient correctness", [] {
    const auto start = std::chrono::steady_clock::now();
    const analysis::GradcheckReport r = analysis::gradcheck_suite();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double worst = 0;
    std::size_t min_probes = SIZE_MAX;
    for (const auto& e : r.entries) {
      worst = std::max(worst, e.max_rel_error);
      min_probes = std::min(min_probes, e.probes);
    }
    return Outcome{r.all_pass() && s < 10.0 && min_probes >= 10,
                   std::to_string(r.entries.size()) + " checks, max_rel_err=" + fmt("%.2e", worst) +
                       ", " + fmt("%.2fs", s)};
  });

  report(2, "holomorphy classification", [] {
    Rng rng = Rng::stream(kDataSeed, {2});
    std::vector<ComplexTensor> probes;
    for (int i = 0; i < 100; ++i) probes.push_back(disk_point(rng, 1.0));
    const auto& act = [](nn::ActivationKind k) -> const ad::UnaryRule& { return nn::activation_rule(k); };
    const std::pair<const ad::UnaryRule*, bool> cases[] = {
        {&act(nn::ActivationKind::ComplexTanh), true}, {&act(nn::ActivationKind::Linear), true},
        {&ad::square_rule(), true},                    {&act(nn::ActivationKind::SplitMagnitude), false},
        {&ad::real_rule(), false},                     {&ad::conj_rule(), false},
        {&ad::abs2_rule(), false}};
    int right = 0;
    for (auto [rule, expect] : cases) right += ad::is_holomorphic_numeric(of_rule(*rule), probes, 1e-8) == expect;
    return Outcome{right == 7, std::to_string(right) + "/7 classified, 100 probes each"};
  });

  report(3, "chain-rule equivalence", [] {
    const ad::UnaryRule* pool[] = {&ad::square_rule(), &ad::conj_rule(), &ad::real_rule(),
                                   &ad::abs2_rule(),
                                   &nn::activation_rule(nn::ActivationKind::ComplexTanh),
                                   &nn::activation_rule(nn::ActivationKind::SplitMagnitude)};
    double worst = 0;
    for (std::uint64_t c = 0; c < 50; ++c) {
      Rng rng = Rng::stream(kDataSeed, {3, c});
      const ad::UnaryRule* chain[3];
      for (auto& r : chain) r = pool[rng.next_u64() % std::size(pool)];
      const ComplexTensor z0 = disk_point(rng, 0.7);
      ComplexTensor v = z0;
      ad::JacobianPair acc = ad::rule_pair(*chain[0], v);
      v = ad::apply(*chain[0], v);
      for (int k = 1; k < 3; ++k) {
        acc = ad::compose_pairs(ad::rule_pair(*chain[k], v), acc);
        v = ad::apply(*chain[k], v);
      }
      const ad::JacobianPair fd = ad::wirtinger_pair_numeric(
          [&](const ComplexTensor& x) {
            ComplexTensor y = x;
            for (const ad::UnaryRule* r : chain) y = ad::apply(*r, y);
            return y;
          },
          z0);
      worst = std::max(worst, ad::pair_relative_error(acc, fd));
    }
    return Outcome{worst < 1e-5, "50 depth-3 chains, max_rel_err=" + fmt("%.2e", worst)};
  });

  report(4, "loss derivative identity", [] {
    Rng rng = Rng::stream(kDataSeed, {4});
    std::vector<CScalar> points{{2.0, 3.0}};
    for (int i = 0; i < 20; ++i) points.push_back(sample_circular_gaussian(rng, {1}, 3.0)[0]);
    int exact = 0;
    for (CScalar z : points) {
      ad::Graph g;
      const ad::Var x = g.leaf(ComplexTensor::vector({z}));
      const ad::Var loss = g.sum(g.unary(x, ad::abs2_rule()));
      exact += g.backward(loss).at(x)[0] == z;
    }
    return Outcome{exact == static_cast<int>(points.size()),
                   std::to_string(exact) + "/" + std::to_string(points.size()) +
                       " bitwise equal to z (incl. 2+3i)"};
  });

  report(5, "parameter counts", [] {
    const std::size_t c =
        nn::RecurrentModel::zeros(nn::Field::Complex, {256, 256, 256}, nn::ActivationKind::ComplexTanh)
            .parameter_count();
    const std::size_t r =
        nn::RecurrentModel::zeros(nn::Field::Real, {512, 256, 512}, nn::ActivationKind::RealTanh)
            .parameter_count();
    return Outcome{c == 197376 && r == 328704,
                   "complex " + std::to_string(c) + ", real " + std::to_string(r)};
  });

  report(6, "dataset invariants", [] {
    std::string detail;
    bool pass = true;

    // (a) Negative-frequency bins against the exact leakage of the drawn
    // positive-frequency tones, and exact-bin fixtures against zero.
    double worst_residual = 0, worst_raw = 0;
    const data::DatasetBundle analytic[] = {
        data::generate_dataset(data::DatasetKind::SawtoothAnalytic, kDataSeed, {100, 0, 0}),
        data::generate_dataset(data::DatasetKind::InharmonicAnalytic, kDataSeed, {100, 0, 0})};
    for (const auto& b : analytic) {
      for (std::size_t i = 0; i < b.train.rows(); ++i) {
        const data::Observation obs =
            data::generate_observation(b.kind, b.seed, data::Partition::Train, i);
        const analysis::Spectrum s = analysis::dft(obs.samples);
        std::vector<oracle::Tone> tones;
        for (const auto& c : obs.spec.components) tones.push_back({c.frequency, c.amplitude, c.phase});
        const std::vector<CScalar> leak = oracle::analytic_tone_dft(tones, data::kSamples);
        const std::vector<double> mag = s.magnitude();
        const double peak = *std::max_element(mag.begin(), mag.end());
        for (std::size_t k = data::kSamples / 2 + 1; k < data::kSamples; ++k) {
          worst_residual = std::max(worst_residual, std::abs(s.bins[k] - leak[k]) / peak);
          worst_raw = std::max(worst_raw, mag[k] / peak);
        }
      }
    }
    double worst_exact = 0;
    for (std::uint64_t f = 0; f < 20; ++f) {
      Rng rng = Rng::stream(kDataSeed, {6, f});
      data::WaveformSpec spec;
      spec.analytic = true;
      for (int c = 0; c < 5; ++c) {
        spec.components.push_back({static_cast<double>(1 + rng.next_u64() % 511) / data::kSamples,
                                   rng.uniform(0.1, 1.0), rng.uniform()});
      }
      const std::vector<double> mag = analysis::dft(data::synthesize(spec)).magnitude();
      const double peak = *std::max_element(mag.begin(), mag.end());
      for (std::size_t k = data::kSamples / 2 + 1; k < data::kSamples; ++k) {
        worst_exact = std::max(worst_exact, mag[k] / peak);
      }
    }
    const bool a = worst_residual < 1e-6 && worst_exact < 1e-9;
    detail += "(a) leakage-corrected " + fmt("%.1e", worst_residual) + ", exact-bin " +
              fmt("%.1e", worst_exact) + ", raw leakage " + fmt("%.1e", worst_raw) + "; ";

    // (b) Mean periods per frame.
    Rng rng = Rng::stream(kDataSeed, {6});
    double periods = 0;
    for (int i = 0; i < 10000; ++i) {
      periods += data::sawtooth_spec(rng).components[0].frequency * data::kFrameLength;
    }
    periods /= 10000;
    const bool b = periods >= 62 && periods <= 66;
    detail += "(b) periods/frame " + fmt("%.2f", periods) + "; ";

    // (c) File round trip.
    const fs::path path = fs::temp_directory_path() / "cvnn_acceptance.cvds";
    const data::DatasetBundle bundle =
        data::generate_dataset(data::DatasetKind::InharmonicAnalytic, kDataSeed, {50, 20, 20});
    data::write_dataset(bundle, path);
    const std::vector<std::uint8_t> first = read_file(path);
    const data::DatasetBundle back = data::read_dataset(path);
    data::write_dataset(back, path);
    const bool c = back == bundle && read_file(path) == first;
    fs::remove(path);
    detail += std::string("(c) round trip ") + (c ? "bitwise" : "MISMATCH");

    pass = a && b && c;
    return Outcome{pass, detail};
  });

  report(7, "desk-scale learning (complex)", [] {
    const auto start = std::chrono::steady_clock::now();
    complex_search = train::random_search({}, kTrials, desk_data(), kSearchSeed,
                                          desk_settings(nn::Field::Complex));
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double best = complex_search.front().result.best_val;
    const double base = zero_baseline(nn::Field::Complex);
    return Outcome{best <= 0.5 * base && s < 600.0,
                   "best val " + fmt("%.5f", best) + " vs zero baseline " + fmt("%.5f", base) +
                       " (ratio " + fmt("%.4f", best / base) + ", need <= 0.5), search " +
                       fmt("%.0fs", s)};
  });

  report(8, "desk-scale parity (real vs complex)", [] {
    real_search = train::random_search({}, kTrials, desk_data(), kSearchSeed,
                                       desk_settings(nn::Field::Real));
    const double real = real_search.front().result.best_val;
    const double cplx = complex_search.front().result.best_val;
    const double ratio = real / cplx;
    const double rel_real = real / zero_baseline(nn::Field::Real);
    const double rel_cplx = cplx / zero_baseline(nn::Field::Complex);
    return Outcome{ratio <= 3.0 && ratio >= 1.0 / 3.0,
                   "real " + fmt("%.5f", real) + " / complex " + fmt("%.5f", cplx) + " = " +
                       fmt("%.3f", ratio) + " (each vs own zero baseline: " + fmt("%.4f", rel_real) +
                       ", " + fmt("%.4f", rel_cplx) + ")"};
  });

  report(9, "real-degenerate equivalence", [] {
    train::TrainConfig config = real_search.front().result.config;
    double worst = 0;
    std::size_t steps = 0;
    const train::TrialResult r = train::run_trial(
        nn::Field::Real, kHidden, nn::ActivationKind::RealTanh, desk_data(), config,
        [&](const nn::RecurrentModel& m, std::size_t, std::size_t) {
          ++steps;
          for (const ComplexTensor* p : m.parameters()) worst = std::max(worst, max_abs_imag(*p));
        });
    return Outcome{worst < 1e-12 && r.history.size() == kEpochs,
                   "max |Im| " + fmt("%.1e", worst) + " over " + std::to_string(steps) +
                       " steps, status " + std::string(train::status_name(r.status))};
  });

  report(10, "instability surfacing (lr0 = 1)", [] {
    train::SearchSpace space;
    space.lr0 = {1.0, 1.0};
    const auto ranked = train::random_search(space, kTrials, desk_data(), kSearchSeed,
                                             desk_settings(nn::Field::Complex));
    std::size_t diverged = 0;
    bool partial = true;
    double worst_best = 0;
    for (const auto& t : ranked) {
      if (t.result.status == train::TrialStatus::Diverged) {
        ++diverged;
        partial &= t.result.history.size() < kEpochs && !t.result.divergence_reason.empty();
      } else {
        worst_best = std::max(worst_best, t.result.best_val);
      }
    }
    const std::string csv = train::search_summary_csv(ranked);
    const bool listed = diverged == 0 || csv.find(",diverged\n") != std::string::npos;
    return Outcome{diverged >= 1 && partial && listed,
                   std::to_string(diverged) + "/" + std::to_string(kTrials) +
                       " diverged, no crash; worst completed best_val " + fmt("%.5f", worst_best)};
  });

  report(11, "determinism", [] {
    const auto again = train::random_search({}, kTrials, desk_data(), kSearchSeed,
                                            desk_settings(nn::Field::Complex));
    const auto a = search_csvs(complex_search);
    const auto b = search_csvs(again);
    const fs::path dir = fs::temp_directory_path() / "cvnn_acceptance_csv";
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");
    std::size_t identical = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      write_text_file(dir / "a" / a[i].first, a[i].second);
      write_text_file(dir / "b" / b[i].first, b[i].second);
      identical += a[i].first == b[i].first &&
                   read_file(dir / "a" / a[i].first) == read_file(dir / "b" / b[i].first);
    }
    fs::remove_all(dir);
    return Outcome{identical == a.size() && a.size() == b.size(),
                   std::to_string(identical) + "/" + std::to_string(a.size()) +
                       " CSV files byte-identical"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
