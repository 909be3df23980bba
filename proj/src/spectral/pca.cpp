#include "mentalgen/spectral/pca.hpp"

#include <algorithm>
#include <cmath>

#include "mentalgen/core/linalg.hpp"
#include "mentalgen/simd/kernels.hpp"

namespace mentalgen::spectral {

PcaModel pca_fit(const Matrix& data, std::size_t n_components) {
  if (data.rows() < 2) throw InvalidArgument("pca_fit needs at least 2 samples");
  const std::size_t limit = std::min(data.rows() - 1, data.cols());
  if (n_components < 1 || n_components > limit)
    throw InvalidArgument("n_components must be in [1, " + std::to_string(limit) + "], got " +
                          std::to_string(n_components));

  const auto cov = linalg::covariance(data);
  const auto eig = linalg::symmetric_eigen(cov);
  double total = 0.0;
  for (double v : eig.values) total += std::max(v, 0.0);

  PcaModel m;
  m.mean = linalg::column_means(data);
  m.components = Matrix(n_components, data.cols());
  for (std::size_t k = 0; k < n_components; ++k) {
    auto src = eig.vectors.row(k);
    std::size_t arg = 0;
    for (std::size_t j = 1; j < src.size(); ++j)
      if (std::abs(src[j]) > std::abs(src[arg])) arg = j;
    const double sign = src[arg] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < src.size(); ++j) m.components(k, j) = sign * src[j];
    const double var = std::max(eig.values[k], 0.0);
    m.explained_variance.push_back(var);
    m.explained_variance_ratio.push_back(total > 0.0 ? var / total : 0.0);
  }
  return m;
}

Matrix pca_transform(const PcaModel& model, const Matrix& data) {
  if (data.cols() != model.mean.size()) throw InvalidArgument("pca_transform: feature count mismatch");
  Matrix out(data.rows(), model.n_components());
  std::vector<double> centered(data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    auto row = data.row(r);
    for (std::size_t j = 0; j < data.cols(); ++j) centered[j] = row[j] - model.mean[j];
    for (std::size_t k = 0; k < model.n_components(); ++k) out(r, k) = simd::dot(centered, model.components.row(k));
  }
  return out;
}

Matrix pca_inverse_transform(const PcaModel& model, const Matrix& projected) {
  if (projected.cols() != model.n_components()) throw InvalidArgument("pca_inverse_transform: component count mismatch");
  Matrix out(projected.rows(), model.mean.size());
  for (std::size_t r = 0; r < projected.rows(); ++r) {
    auto row = out.row(r);
    std::copy(model.mean.begin(), model.mean.end(), row.begin());
    for (std::size_t k = 0; k < model.n_components(); ++k) simd::axpy(projected(r, k), model.components.row(k), row);
  }
  return out;
}

}  // namespace mentalgen::spectral
