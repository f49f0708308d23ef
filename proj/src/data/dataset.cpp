#include "cvnn/data/dataset.hpp"

#include <algorithm>
#include <cstdint>

#include "cvnn/core/binary_io.hpp"
#include "cvnn/core/errors.hpp"

namespace cvnn::data {

const ComplexTensor& DatasetBundle::partition(Partition p) const {
  switch (p) {
    case Partition::Train: return train;
    case Partition::Val: return val;
    case Partition::Test: return test;
  }
  throw ArgumentError("unknown partition");
}

Observation generate_observation(DatasetKind kind, std::uint64_t seed, Partition p,
                                 std::size_t index, PhaseRange phases) {
  Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(p), index});
  return generate(kind, rng, phases);
}

namespace {

ComplexTensor generate_partition(DatasetKind kind, std::uint64_t seed, Partition p,
                                 std::size_t count, PhaseRange phases) {
  ComplexTensor out(Shape{count, kSamples});
  CScalar* rows = out.data().data();
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    const Observation obs = generate_observation(kind, seed, p, static_cast<std::size_t>(i), phases);
    std::copy(obs.samples.data().begin(), obs.samples.data().end(), rows + i * kSamples);
  }
  return out;
}

}  // namespace

DatasetBundle generate_dataset(DatasetKind kind, std::uint64_t seed, PartitionSizes sizes,
                               PhaseRange phases) {
  DatasetBundle b;
  b.kind = kind;
  b.seed = seed;
  b.train = generate_partition(kind, seed, Partition::Train, sizes.train, phases);
  b.val = generate_partition(kind, seed, Partition::Val, sizes.val, phases);
  b.test = generate_partition(kind, seed, Partition::Test, sizes.test, phases);
  return b;
}

std::vector<std::uint8_t> encode_dataset(const DatasetBundle& bundle) {
  ByteWriter w;
  w.raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("CVDS"), 4));
  w.u8(kDatasetVersion);
  w.u8(static_cast<std::uint8_t>(bundle.kind));
  w.u64(bundle.seed);
  for (const ComplexTensor* part : {&bundle.train, &bundle.val, &bundle.test}) {
    w.u32(static_cast<std::uint32_t>(part->rows()));
  }
  for (const ComplexTensor* part : {&bundle.train, &bundle.val, &bundle.test}) {
    for (CScalar z : part->data()) w.complex(z);
  }
  return w.take();
}

DatasetBundle decode_dataset(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic("CVDS");
  const std::size_t version_at = r.offset();
  if (r.u8() != kDatasetVersion) throw FormatError("unsupported dataset version", version_at);
  const std::size_t kind_at = r.offset();
  const std::uint8_t kind = r.u8();
  if (kind > 3) throw FormatError("bad dataset kind", kind_at);
  DatasetBundle b;
  b.kind = static_cast<DatasetKind>(kind);
  b.seed = r.u64();
  std::size_t counts[3];
  for (auto& c : counts) c = r.u32();
  const std::size_t payload = (counts[0] + counts[1] + counts[2]) * kSamples * 16;
  if (r.remaining() < payload) {
    throw FormatError("truncated dataset: " + std::to_string(r.remaining()) +
                          " payload bytes, expected " + std::to_string(payload),
                      r.offset() + r.remaining());
  }
  if (r.remaining() > payload) throw FormatError("trailing bytes after dataset", r.offset() + payload);
  ComplexTensor* parts[] = {&b.train, &b.val, &b.test};
  for (int p = 0; p < 3; ++p) {
    ComplexTensor t(Shape{counts[p], kSamples});
    for (CScalar& z : t.data()) z = r.complex();
    *parts[p] = std::move(t);
  }
  return b;
}

void write_dataset(const DatasetBundle& bundle, const std::filesystem::path& path) {
  write_file(path, encode_dataset(bundle));
}

DatasetBundle read_dataset(const std::filesystem::path& path) {
  return decode_dataset(read_file(path));
}

}  // namespace cvnn::data
