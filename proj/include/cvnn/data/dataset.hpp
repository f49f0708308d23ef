#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cvnn/data/waveform.hpp"

namespace cvnn::data {

enum class Partition : std::uint8_t { Train = 0, Val = 1, Test = 2 };

struct PartitionSizes {
  std::size_t train = 10000;
  std::size_t val = 1000;
  std::size_t test = 1000;
};

/// Generated observations, one row of 1024 samples per observation.
/// Component specs are not kept; they are regenerable from (kind, seed).
struct DatasetBundle {
  DatasetKind kind = DatasetKind::Sawtooth;
  std::uint64_t seed = 0;
  ComplexTensor train{Shape{0, kSamples}};
  ComplexTensor val{Shape{0, kSamples}};
  ComplexTensor test{Shape{0, kSamples}};

  const ComplexTensor& partition(Partition p) const;
  friend bool operator==(const DatasetBundle&, const DatasetBundle&) = default;
};

// Observation `index` of partition `p` uses the stream (seed, p, index), so
// partitions never share draws and parallel generation is reproducible.
Observation generate_observation(DatasetKind kind, std::uint64_t seed, Partition p,
                                 std::size_t index, PhaseRange phases = PhaseRange::UnitRadians);

DatasetBundle generate_dataset(DatasetKind kind, std::uint64_t seed, PartitionSizes sizes = {},
                               PhaseRange phases = PhaseRange::UnitRadians);

// "CVDS" | version u8 = 1 | kind u8 | seed u64 | train, val, test counts u32 |
// observations (train, val, test) as 1024 (re f64, im f64) pairs each.
inline constexpr std::uint8_t kDatasetVersion = 1;
inline constexpr std::size_t kDatasetHeaderBytes = 4 + 1 + 1 + 8 + 3 * 4;

std::vector<std::uint8_t> encode_dataset(const DatasetBundle& bundle);
DatasetBundle decode_dataset(std::span<const std::uint8_t> bytes);

void write_dataset(const DatasetBundle& bundle, const std::filesystem::path& path);
DatasetBundle read_dataset(const std::filesystem::path& path);

}  // namespace cvnn::data
