#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cvnn/nn/model.hpp"

namespace cvnn::nn {

// Layout (little-endian):
//   "CVNN" | version u8 | field u8 | d_in u32 | hidden u32 | d_out u32 |
//   activation u8 | parameters as (re f64, im f64) pairs in declaration order
inline constexpr std::uint8_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const RecurrentModel& model);
RecurrentModel decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const RecurrentModel& model, const std::filesystem::path& path);
RecurrentModel load_checkpoint(const std::filesystem::path& path);

}  // namespace cvnn::nn
