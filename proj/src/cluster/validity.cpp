#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mentalgen/cluster/metrics.hpp"
#include "mentalgen/simd/kernels.hpp"

namespace mentalgen::cluster {

namespace {

std::vector<std::size_t> check_partition(const Matrix& data, std::span<const std::size_t> assignments, std::size_t k) {
  if (k < 2) throw InvalidArgument("validity index needs k >= 2");
  if (assignments.size() != data.rows()) throw InvalidArgument("assignments length != sample count");
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t a : assignments) {
    if (a >= k) throw InvalidArgument("cluster index out of range");
    ++counts[a];
  }
  for (std::size_t c = 0; c < k; ++c)
    if (counts[c] == 0) throw InvalidArgument("cluster " + std::to_string(c) + " is empty");
  return counts;
}

}  // namespace

double silhouette(const Matrix& data, std::span<const std::size_t> assignments, std::size_t k) {
  const auto counts = check_partition(data, assignments, k);
  const std::size_t n = data.rows();
  std::vector<double> sums(k);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sums[assignments[j]] += std::sqrt(simd::squared_distance(data.row(i), data.row(j)));
    }
    const std::size_t own = assignments[i];
    if (counts[own] == 1) continue;  // s(i) = 0
    const double a = sums[own] / static_cast<double>(counts[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(counts[c]));
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

double silhouette(const Matrix& data, const Clustering& c) { return silhouette(data, c.assignments, c.k()); }

double calinski_harabasz(const Matrix& data, std::span<const std::size_t> assignments, std::size_t k) {
  const auto counts = check_partition(data, assignments, k);
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  std::vector<double> overall(d, 0.0);
  Matrix centroids(k, d);
  for (std::size_t i = 0; i < n; ++i) {
    simd::axpy(1.0, data.row(i), overall);
    simd::axpy(1.0, data.row(i), centroids.row(assignments[i]));
  }
  for (double& v : overall) v /= static_cast<double>(n);
  for (std::size_t c = 0; c < k; ++c)
    for (double& v : centroids.row(c)) v /= static_cast<double>(counts[c]);

  double between = 0.0, within = 0.0;
  for (std::size_t c = 0; c < k; ++c)
    between += static_cast<double>(counts[c]) * simd::squared_distance(centroids.row(c), overall);
  for (std::size_t i = 0; i < n; ++i) within += simd::squared_distance(data.row(i), centroids.row(assignments[i]));
  if (within == 0.0) return between == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return between * static_cast<double>(n - k) / (within * static_cast<double>(k - 1));
}

double calinski_harabasz(const Matrix& data, const Clustering& c) { return calinski_harabasz(data, c.assignments, c.k()); }

}  // namespace mentalgen::cluster
