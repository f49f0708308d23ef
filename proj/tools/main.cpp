// cvnn: dataset generation, training, random search and model inspection.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include "cvnn/analysis/filters.hpp"
#include "cvnn/analysis/gradcheck.hpp"
#include "cvnn/analysis/selftest.hpp"
#include "cvnn/core/csv.hpp"
#include "cvnn/core/errors.hpp"
#include "cvnn/data/dataset.hpp"
#include "cvnn/nn/checkpoint.hpp"
#include "cvnn/train/search.hpp"
#include "cvnn/train/trainer.hpp"

namespace fs = std::filesystem;
using namespace cvnn;

namespace {

template <typename E>
std::map<std::string, E> choices(std::initializer_list<E> values, std::string_view (*name)(E)) {
  std::map<std::string, E> out;
  for (E v : values) out.emplace(std::string(name(v)), v);
  return out;
}

std::string_view activation_label(nn::ActivationKind k) { return nn::activation_name(k); }

const auto kKinds = choices({data::DatasetKind::Sawtooth, data::DatasetKind::SawtoothAnalytic,
                             data::DatasetKind::Inharmonic, data::DatasetKind::InharmonicAnalytic},
                            data::kind_name);
const auto kFields = choices({nn::Field::Complex, nn::Field::Real}, nn::field_name);
const auto kActivations =
    choices({nn::ActivationKind::ComplexTanh, nn::ActivationKind::SplitMagnitude,
             nn::ActivationKind::Linear, nn::ActivationKind::RealTanh},
            activation_label);
const std::map<std::string, data::Partition> kPartitions{
    {"train", data::Partition::Train}, {"val", data::Partition::Val}, {"test", data::Partition::Test}};

// Real models only support real-tanh; complex models default to ctanh.
nn::ActivationKind resolve_activation(nn::Field field, std::optional<nn::ActivationKind> requested) {
  if (requested) return *requested;
  return field == nn::Field::Real ? nn::ActivationKind::RealTanh : nn::ActivationKind::ComplexTanh;
}

void add_training_flags(CLI::App* cmd, train::TrainConfig& cfg) {
  cmd->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--batch-size", cfg.batch_size, "Observations per step")->capture_default_str();
  cmd->add_option("--momentum", cfg.momentum)->capture_default_str();
  cmd->add_option("--decay-power", cfg.decay_power, "Exponent of the lr decay")
      ->capture_default_str();
  cmd->add_option("--clip", cfg.clip, "Per-element cogradient clip, 0 disables")
      ->capture_default_str();
  cmd->add_flag("--shuffle", cfg.shuffle, "Reshuffle training observations every epoch");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex-valued recurrent networks trained with Wirtinger calculus"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a waveform dataset bundle");
  data::DatasetKind gen_kind = data::DatasetKind::Sawtooth;
  data::PartitionSizes sizes;
  std::uint64_t gen_seed = 0;
  fs::path gen_out;
  gen->add_option("--kind", gen_kind)->transform(CLI::CheckedTransformer(kKinds))->required();
  gen->add_option("--train", sizes.train)->capture_default_str();
  gen->add_option("--val", sizes.val)->capture_default_str();
  gen->add_option("--test", sizes.test)->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--out", gen_out)->required();
  gen->callback([&] {
    data::write_dataset(data::generate_dataset(gen_kind, gen_seed, sizes), gen_out);
    std::printf("wrote %zu/%zu/%zu observations to %s\n", sizes.train, sizes.val, sizes.test,
                gen_out.string().c_str());
  });

  // train
  auto* trn = app.add_subcommand("train", "Train one model");
  fs::path trn_data, trn_out;
  nn::Field trn_field = nn::Field::Complex;
  std::size_t trn_hidden = 256;
  std::optional<nn::ActivationKind> trn_act;
  train::TrainConfig trn_cfg;
  trn->add_option("--data", trn_data)->required()->check(CLI::ExistingFile);
  trn->add_option("--field", trn_field)->transform(CLI::CheckedTransformer(kFields));
  trn->add_option("--hidden", trn_hidden)->capture_default_str();
  trn->add_option("--activation", trn_act)->transform(CLI::CheckedTransformer(kActivations));
  trn->add_option("--lr0", trn_cfg.lr0)->capture_default_str();
  trn->add_option("--half-life", trn_cfg.half_life)->capture_default_str();
  trn->add_option("--init-scale", trn_cfg.init_scale)->capture_default_str();
  trn->add_option("--seed", trn_cfg.seed)->capture_default_str();
  trn->add_option("--out", trn_out)->required();
  add_training_flags(trn, trn_cfg);
  int trn_status = 0;
  trn->callback([&] {
    const data::DatasetBundle bundle = data::read_dataset(trn_data);
    const train::TrialResult r = train::run_trial(
        trn_field, trn_hidden, resolve_activation(trn_field, trn_act), bundle, trn_cfg);
    fs::create_directories(trn_out);
    nn::save_checkpoint(r.best_model, trn_out / "model.cvnn");
    write_text_file(trn_out / "curves.csv", train::curves_csv(r));
    std::printf("status=%s best_val=%s best_epoch=%zu\n", std::string(status_name(r.status)).c_str(),
                format_real(r.best_val).c_str(), r.best_epoch);
    if (r.status == train::TrialStatus::Diverged) {
      std::fprintf(stderr, "diverged: %s\n", r.divergence_reason.c_str());
      trn_status = 3;
    }
  });

  // search
  auto* srch = app.add_subcommand("search", "Random hyperparameter search");
  fs::path srch_data, srch_out;
  train::SearchSettings settings;
  std::optional<nn::ActivationKind> srch_act;
  train::SearchSpace space;
  std::size_t trials = 100;
  std::uint64_t srch_seed = 0;
  settings.base.epochs = 1000;
  srch->add_option("--data", srch_data)->required()->check(CLI::ExistingFile);
  srch->add_option("--field", settings.field)->transform(CLI::CheckedTransformer(kFields));
  srch->add_option("--hidden", settings.hidden)->capture_default_str();
  srch->add_option("--activation", srch_act)->transform(CLI::CheckedTransformer(kActivations));
  srch->add_option("--trials", trials)->capture_default_str();
  srch->add_option("--jobs", settings.jobs)->capture_default_str();
  srch->add_option("--seed", srch_seed)->capture_default_str();
  srch->add_option("--out", srch_out)->required();
  srch->add_option("--lr0-min", space.lr0.lo)->group("Ranges");
  srch->add_option("--lr0-max", space.lr0.hi)->group("Ranges");
  srch->add_option("--half-life-min", space.half_life.lo)->group("Ranges");
  srch->add_option("--half-life-max", space.half_life.hi)->group("Ranges");
  srch->add_option("--init-scale-min", space.init_scale.lo)->group("Ranges");
  srch->add_option("--init-scale-max", space.init_scale.hi)->group("Ranges");
  add_training_flags(srch, settings.base);
  srch->callback([&] {
    const data::DatasetBundle bundle = data::read_dataset(srch_data);
    settings.activation = resolve_activation(settings.field, srch_act);
    const auto ranked = train::random_search(space, trials, bundle, srch_seed, settings);
    fs::create_directories(srch_out / "trials");
    write_text_file(srch_out / "summary.csv", train::search_summary_csv(ranked));
    for (const auto& t : ranked) {
      write_text_file(srch_out / "trials" / ("trial_" + std::to_string(t.trial_id) + ".csv"),
                      train::curves_csv(t.result));
    }
    if (!ranked.empty() && ranked.front().result.status == train::TrialStatus::Completed) {
      nn::save_checkpoint(ranked.front().result.best_model, srch_out / "best.cvnn");
      std::printf("best trial=%zu best_val=%s\n", ranked.front().trial_id,
                  format_real(ranked.front().result.best_val).c_str());
    } else {
      std::printf("no trial completed\n");
    }
  });

  // eval
  auto* ev = app.add_subcommand("eval", "Print the MSE of a model on one partition");
  fs::path ev_model, ev_data;
  data::Partition ev_part = data::Partition::Test;
  std::uint64_t ev_seed = 0;
  ev->add_option("--model", ev_model)->required()->check(CLI::ExistingFile);
  ev->add_option("--data", ev_data)->required()->check(CLI::ExistingFile);
  ev->add_option("--partition", ev_part)->transform(CLI::CheckedTransformer(kPartitions));
  ev->add_option("--seed", ev_seed, "Unused; evaluation is deterministic");
  ev->callback([&] {
    const nn::RecurrentModel model = nn::load_checkpoint(ev_model);
    const data::DatasetBundle bundle = data::read_dataset(ev_data);
    std::printf("%s\n", format_real(train::evaluate(model, bundle, ev_part)).c_str());
  });

  // filters
  auto* flt = app.add_subcommand("filters", "Export input-filter magnitude responses");
  fs::path flt_model, flt_out;
  std::size_t flt_rows = 8;
  std::uint64_t flt_seed = 0;
  flt->add_option("--model", flt_model)->required()->check(CLI::ExistingFile);
  flt->add_option("--rows", flt_rows)->capture_default_str();
  flt->add_option("--out", flt_out)->required();
  flt->add_option("--seed", flt_seed, "Unused; the export is deterministic");
  flt->callback([&] {
    const nn::RecurrentModel model = nn::load_checkpoint(flt_model);
    write_text_file(flt_out, analysis::filters_csv(model, flt_rows));
  });

  // gradcheck
  auto* gc = app.add_subcommand("gradcheck", "Check analytic derivatives against finite differences");
  analysis::GradcheckOptions gc_opts;
  gc->add_option("--seed", gc_opts.seed)->capture_default_str();
  gc->add_option("--probes", gc_opts.probes)->capture_default_str();
  gc->add_option("--rtol", gc_opts.rtol)->capture_default_str();
  int gc_status = 0;
  gc->callback([&] {
    const analysis::GradcheckReport report = analysis::gradcheck_suite(gc_opts);
    std::fputs(report.to_text().c_str(), stdout);
    gc_status = report.all_pass() ? 0 : 1;
  });

  // selftest
  auto* st = app.add_subcommand("selftest", "Run built-in invariant checks");
  std::uint64_t st_seed = 20160204;
  st->add_option("--seed", st_seed)->capture_default_str();
  int st_status = 0;
  st->callback([&] {
    for (const auto& c : analysis::run_selftest(st_seed)) {
      std::printf("%s %-22s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
      if (!c.pass) st_status = 1;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: malformed file: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return trn_status | gc_status | st_status;
}
