#pragma once

#include <vector>

#include "mentalgen/core/matrix.hpp"

namespace mentalgen::spectral {

struct PcaModel {
  std::vector<double> mean;
  Matrix components;  // n_components x features, orthonormal rows
  std::vector<double> explained_variance;
  std::vector<double> explained_variance_ratio;

  std::size_t n_components() const noexcept { return components.rows(); }
};

/// Principal axes from the eigendecomposition of the sample covariance.
/// Each component's sign is chosen so its largest-magnitude entry is
/// positive. Requires samples >= 2 and 1 <= n_components <= min(samples - 1, features).
PcaModel pca_fit(const Matrix& data, std::size_t n_components);
Matrix pca_transform(const PcaModel& model, const Matrix& data);
Matrix pca_inverse_transform(const PcaModel& model, const Matrix& projected);

}  // namespace mentalgen::spectral
