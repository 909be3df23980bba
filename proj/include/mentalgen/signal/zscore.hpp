#pragma once

#include <span>
#include <vector>

#include "mentalgen/core/matrix.hpp"

namespace mentalgen {

/// Per-feature mean and population standard deviation.
struct NormStats {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t features() const noexcept { return mean.size(); }
  friend bool operator==(const NormStats&, const NormStats&) = default;
};

/// Columns with stddev at or below this map to zero.
inline constexpr double kZeroVarianceEpsilon = 1e-12;

/// Fit on a samples x features matrix; needs at least 2 samples.
NormStats zscore_fit(const Matrix& data);
Matrix zscore_apply(const NormStats& stats, const Matrix& data);
std::vector<double> zscore_apply(const NormStats& stats, std::span<const double> row);

}  // namespace mentalgen
