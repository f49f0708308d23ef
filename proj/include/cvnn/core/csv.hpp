#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace cvnn {

// Fixed 17-significant-digit scientific notation ("%.16e"), so the same
// double always prints the same bytes.
std::string format_real(double x);

// Writes text verbatim (binary mode, no newline translation).
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cvnn
