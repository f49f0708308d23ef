#pragma once

#include <string>
#include <vector>

#include "cvnn/nn/model.hpp"

namespace cvnn::analysis {

inline constexpr std::size_t kFilterBins = 256;

/// Magnitude response |DFT(W_in[row, :])| over 256 bins.
///
/// A 512-input real model (analytic data split as [re, im]) computes
/// Re(sum (a_t - i b_t) s_t) for row [a, b]; its response is that of the
/// equivalent complex filter a - i b.
std::vector<double> filter_response(const nn::RecurrentModel& model, std::size_t row);

// filter,bin,magnitude for rows [0, rows)
std::string filters_csv(const nn::RecurrentModel& model, std::size_t rows);

}  // namespace cvnn::analysis
