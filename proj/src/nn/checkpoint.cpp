#include "cvnn/nn/checkpoint.hpp"

#include "cvnn/core/binary_io.hpp"
#include "cvnn/core/errors.hpp"

namespace cvnn::nn {

std::vector<std::uint8_t> encode_checkpoint(const RecurrentModel& model) {
  model.validate();
  const ModelDims d = model.dims();
  ByteWriter w;
  w.raw(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>("CVNN"), 4));
  w.u8(kCheckpointVersion);
  w.u8(static_cast<std::uint8_t>(model.field));
  w.u32(static_cast<std::uint32_t>(d.input));
  w.u32(static_cast<std::uint32_t>(d.hidden));
  w.u32(static_cast<std::uint32_t>(d.output));
  w.u8(static_cast<std::uint8_t>(model.hidden_activation));
  for (const ComplexTensor* p : model.parameters())
    for (CScalar z : p->data()) w.complex(z);
  return w.take();
}

RecurrentModel decode_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_magic("CVNN");
  const std::size_t version_at = r.offset();
  if (r.u8() != kCheckpointVersion) throw FormatError("unsupported checkpoint version", version_at);
  const std::size_t field_at = r.offset();
  const std::uint8_t field = r.u8();
  if (field > 1) throw FormatError("bad field tag", field_at);
  ModelDims d;
  d.input = r.u32();
  d.hidden = r.u32();
  d.output = r.u32();
  const std::size_t act_at = r.offset();
  const std::uint8_t act = r.u8();
  if (act > 3) throw FormatError("bad activation tag", act_at);

  const std::size_t count = d.hidden * d.input + 2 * d.hidden + d.hidden * d.hidden +
                            d.output * d.hidden + d.output;
  if (r.remaining() != count * 16) {
    throw FormatError("checkpoint payload holds " + std::to_string(r.remaining()) +
                          " bytes, expected " + std::to_string(count * 16),
                      r.offset());
  }
  RecurrentModel m;
  m.field = static_cast<Field>(field);
  m.hidden_activation = static_cast<ActivationKind>(act);
  m.w_in = ComplexTensor(Shape{d.hidden, d.input});
  m.b_in = ComplexTensor(Shape{d.hidden});
  m.w_rec = ComplexTensor(Shape{d.hidden, d.hidden});
  m.b_rec = ComplexTensor(Shape{d.hidden});
  m.w_out = ComplexTensor(Shape{d.output, d.hidden});
  m.b_out = ComplexTensor(Shape{d.output});
  for (ComplexTensor* p : m.parameters())
    for (CScalar& z : p->data()) z = r.complex();
  try {
    m.validate();
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("inconsistent checkpoint: ") + e.what(), field_at);
  }
  return m;
}

void save_checkpoint(const RecurrentModel& model, const std::filesystem::path& path) {
  write_file(path, encode_checkpoint(model));
}

RecurrentModel load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file(path));
}

}  // namespace cvnn::nn
