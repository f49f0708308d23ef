#include "cvnn/data/waveform.hpp"

#include <cmath>
#include <numbers>

#include "cvnn/core/errors.hpp"

namespace cvnn::data {

void WaveformSpec::validate() const {
  for (const Component& c : components) {
    if (!(c.frequency >= 0.0 && c.frequency < kNyquist)) {
      throw ArgumentError("waveform component frequency " + std::to_string(c.frequency) +
                          " outside [0, 0.5)");
    }
    if (!(c.amplitude > 0.0)) throw ArgumentError("waveform component amplitude must be positive");
  }
}

bool is_analytic(DatasetKind kind) {
  return kind == DatasetKind::SawtoothAnalytic || kind == DatasetKind::InharmonicAnalytic;
}

std::string_view kind_name(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::Sawtooth: return "sawtooth";
    case DatasetKind::SawtoothAnalytic: return "sawtooth-analytic";
    case DatasetKind::Inharmonic: return "inharmonic";
    case DatasetKind::InharmonicAnalytic: return "inharmonic-analytic";
  }
  return "?";
}

std::optional<DatasetKind> parse_kind(std::string_view name) {
  for (auto k : {DatasetKind::Sawtooth, DatasetKind::SawtoothAnalytic, DatasetKind::Inharmonic,
                 DatasetKind::InharmonicAnalytic}) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

double draw_phase(Rng& rng, PhaseRange phases) {
  return phases == PhaseRange::UnitRadians ? rng.uniform() : 2.0 * std::numbers::pi * rng.uniform();
}

}  // namespace

WaveformSpec sawtooth_spec(Rng& rng, PhaseRange phases) {
  WaveformSpec spec;
  const double f0 = kNyquist * rng.uniform();
  if (f0 == 0.0) {
    spec.components.push_back({0.0, 1.0, draw_phase(rng, phases)});
    return spec;
  }
  for (std::size_t n = 1; static_cast<double>(n) * f0 < kNyquist; ++n) {
    const double k = static_cast<double>(n);
    spec.components.push_back({k * f0, 1.0 / k, draw_phase(rng, phases)});
  }
  return spec;
}

WaveformSpec inharmonic_spec(Rng& rng, PhaseRange phases) {
  WaveformSpec spec;
  for (std::size_t i = 0; i < kInharmonicComponents; ++i) {
    const double f = kNyquist * rng.uniform();
    spec.components.push_back({f, 1.0 / static_cast<double>(kInharmonicComponents),
                               draw_phase(rng, phases)});
  }
  return spec;
}

ComplexTensor synthesize(const WaveformSpec& spec) {
  spec.validate();
  ComplexTensor out(Shape{kSamples});
  for (const Component& c : spec.components) {
    const double w = 2.0 * std::numbers::pi * c.frequency;
    for (std::size_t t = 0; t < kSamples; ++t) {
      const double theta = w * static_cast<double>(t) + c.phase;
      const double im = spec.analytic ? c.amplitude * std::sin(theta) : 0.0;
      out[t] += CScalar(c.amplitude * std::cos(theta), im);
    }
  }
  return out;
}

Observation gen_sawtooth_like(Rng& rng, PhaseRange phases) {
  WaveformSpec spec = sawtooth_spec(rng, phases);
  ComplexTensor samples = synthesize(spec);
  return {std::move(samples), std::move(spec)};
}

Observation gen_inharmonic(Rng& rng, PhaseRange phases) {
  WaveformSpec spec = inharmonic_spec(rng, phases);
  ComplexTensor samples = synthesize(spec);
  return {std::move(samples), std::move(spec)};
}

Observation make_analytic(WaveformSpec spec) {
  spec.analytic = true;
  ComplexTensor samples = synthesize(spec);
  return {std::move(samples), std::move(spec)};
}

Observation generate(DatasetKind kind, Rng& rng, PhaseRange phases) {
  switch (kind) {
    case DatasetKind::Sawtooth: return gen_sawtooth_like(rng, phases);
    case DatasetKind::SawtoothAnalytic: return make_analytic(sawtooth_spec(rng, phases));
    case DatasetKind::Inharmonic: return gen_inharmonic(rng, phases);
    case DatasetKind::InharmonicAnalytic: return make_analytic(inharmonic_spec(rng, phases));
  }
  throw ArgumentError("unknown dataset kind");
}

FrameSplit split_frames(const ComplexTensor& samples) {
  if (samples.size() != kSamples) {
    throw ArgumentError("split_frames: observation has " + std::to_string(samples.size()) +
                        " samples, expected " + std::to_string(kSamples));
  }
  auto frame = [&](std::size_t f) {
    const auto* begin = samples.data().data() + f * kFrameLength;
    return ComplexTensor(Shape{kFrameLength}, std::vector<CScalar>(begin, begin + kFrameLength));
  };
  return {{frame(0), frame(1), frame(2)}, frame(3)};
}

}  // namespace cvnn::data
