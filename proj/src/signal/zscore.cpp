#include "mentalgen/signal/zscore.hpp"

#include <cmath>

namespace mentalgen {

NormStats zscore_fit(const Matrix& data) {
  if (data.rows() < 2) throw InvalidArgument("zscore_fit needs at least 2 samples");
  const std::size_t d = data.cols();
  const double n = static_cast<double>(data.rows());
  NormStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (std::size_t r = 0; r < data.rows(); ++r)
    for (std::size_t c = 0; c < d; ++c) s.mean[c] += data(r, c);
  for (auto& m : s.mean) m /= n;
  for (std::size_t r = 0; r < data.rows(); ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double dv = data(r, c) - s.mean[c];
      s.stddev[c] += dv * dv;
    }
  for (auto& v : s.stddev) v = std::sqrt(v / n);
  return s;
}

std::vector<double> zscore_apply(const NormStats& stats, std::span<const double> row) {
  if (row.size() != stats.features())
    throw InvalidArgument("zscore: expected " + std::to_string(stats.features()) + " features, got " +
                          std::to_string(row.size()));
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c)
    out[c] = stats.stddev[c] > kZeroVarianceEpsilon ? (row[c] - stats.mean[c]) / stats.stddev[c] : 0.0;
  return out;
}

Matrix zscore_apply(const NormStats& stats, const Matrix& data) {
  if (data.cols() != stats.features())
    throw InvalidArgument("zscore: expected " + std::to_string(stats.features()) + " features, got " +
                          std::to_string(data.cols()));
  Matrix out(data.rows(), data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto z = zscore_apply(stats, data.row(r));
    std::copy(z.begin(), z.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace mentalgen
