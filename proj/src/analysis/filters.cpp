#include "cvnn/analysis/filters.hpp"

#include "cvnn/analysis/dft.hpp"
#include "cvnn/core/csv.hpp"
#include "cvnn/core/errors.hpp"

namespace cvnn::analysis {

std::vector<double> filter_response(const nn::RecurrentModel& model, std::size_t row) {
  const nn::ModelDims d = model.dims();
  if (row >= d.hidden) {
    throw ArgumentError("filter row " + std::to_string(row) + " out of range (hidden size " +
                        std::to_string(d.hidden) + ")");
  }
  ComplexTensor filter(Shape{kFilterBins});
  if (d.input == kFilterBins) {
    for (std::size_t t = 0; t < kFilterBins; ++t) filter[t] = model.w_in(row, t);
  } else if (d.input == 2 * kFilterBins) {
    for (std::size_t t = 0; t < kFilterBins; ++t) {
      filter[t] = CScalar(model.w_in(row, t).real(), -model.w_in(row, kFilterBins + t).real());
    }
  } else {
    throw ArgumentError("filter_response: unsupported input width " + std::to_string(d.input));
  }
  return dft(filter).magnitude();
}

std::string filters_csv(const nn::RecurrentModel& model, std::size_t rows) {
  std::string out = "filter,bin,magnitude\n";
  for (std::size_t r = 0; r < rows; ++r) {
    const std::vector<double> m = filter_response(model, r);
    for (std::size_t k = 0; k < m.size(); ++k) {
      out += std::to_string(r) + "," + std::to_string(k) + "," + format_real(m[k]) + "\n";
    }
  }
  return out;
}

}  // namespace cvnn::analysis
