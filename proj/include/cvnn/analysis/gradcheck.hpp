#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvnn/ad/unary.hpp"

namespace cvnn::analysis {

struct GradcheckEntry {
  std::string name;
  std::size_t probes = 0;
  double max_rel_error = 0.0;
  bool pass = false;
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;

  bool all_pass() const;
  std::string to_text() const;
};

struct GradcheckOptions {
  std::uint64_t seed = 20160204;
  double rtol = 1e-5;
  std::size_t probes = 10;
  // Elementwise rules to check; empty means registered_rules().
  std::vector<const ad::UnaryRule*> rules;
};

// Activations and elementwise graph ops known to the library.
std::vector<const ad::UnaryRule*> registered_rules();

/// Checks every analytic derivative against the finite-difference Wirtinger
/// oracle at seeded probes: each elementwise rule (pair and graph
/// cogradient), the MSE loss, a dense layer, a recurrent step and BPTT
/// through a tiny model of each field.
GradcheckReport gradcheck_suite(const GradcheckOptions& options = {});

}  // namespace cvnn::analysis
