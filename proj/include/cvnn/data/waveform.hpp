#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "cvnn/core/rng.hpp"
#include "cvnn/core/tensor.hpp"

namespace cvnn::data {

inline constexpr std::size_t kSamples = 1024;
inline constexpr std::size_t kFrameLength = 256;
inline constexpr std::size_t kFrames = 4;
inline constexpr double kNyquist = 0.5;  // cycles per sample
inline constexpr std::size_t kInharmonicComponents = 5;

// Component phases are drawn from [0, 1) radians by default; FullCircle draws
// from [0, 2*pi) for sensitivity experiments.
enum class PhaseRange : std::uint8_t { UnitRadians, FullCircle };

struct Component {
  double frequency;  // cycles/sample, [0, 0.5)
  double amplitude;
  double phase;      // radians
};

struct WaveformSpec {
  std::vector<Component> components;
  bool analytic = false;

  void validate() const;
};

struct Observation {
  ComplexTensor samples;  // [1024]
  WaveformSpec spec;
};

enum class DatasetKind : std::uint8_t {
  Sawtooth = 0,
  SawtoothAnalytic = 1,
  Inharmonic = 2,
  InharmonicAnalytic = 3,
};

bool is_analytic(DatasetKind kind);
std::string_view kind_name(DatasetKind kind);
std::optional<DatasetKind> parse_kind(std::string_view name);

// Fundamental f0 ~ U[0, 0.5) plus harmonics n*f0 < 0.5, amplitude 1/n.
WaveformSpec sawtooth_spec(Rng& rng, PhaseRange phases = PhaseRange::UnitRadians);
// Five components, f ~ U[0, 0.5), amplitude 1/5.
WaveformSpec inharmonic_spec(Rng& rng, PhaseRange phases = PhaseRange::UnitRadians);

// Real: sum a cos(2 pi f t + phi). Analytic: sum a exp(i (2 pi f t + phi)).
ComplexTensor synthesize(const WaveformSpec& spec);

Observation gen_sawtooth_like(Rng& rng, PhaseRange phases = PhaseRange::UnitRadians);
Observation gen_inharmonic(Rng& rng, PhaseRange phases = PhaseRange::UnitRadians);
// Adds a quadrature copy (phase - pi/2) of every component on the imaginary axis.
Observation make_analytic(WaveformSpec spec);
Observation generate(DatasetKind kind, Rng& rng, PhaseRange phases = PhaseRange::UnitRadians);

struct FrameSplit {
  std::array<ComplexTensor, kFrames - 1> inputs;  // samples [0,256), [256,512), [512,768)
  ComplexTensor target;                           // samples [768,1024)
};

FrameSplit split_frames(const ComplexTensor& samples);

}  // namespace cvnn::data
