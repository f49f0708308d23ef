#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cvnn::analysis {

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Fast end-to-end invariants: gradient check, holomorphy classification,
// parameter counts, DFT round trip, analytic one-sidedness and file formats.
std::vector<SelftestCheck> run_selftest(std::uint64_t seed);

}  // namespace cvnn::analysis
