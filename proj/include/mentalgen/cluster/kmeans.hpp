#pragma once

#include <cstdint>
#include <vector>

#include "mentalgen/core/matrix.hpp"

namespace mentalgen::cluster {

struct Clustering {
  std::vector<std::size_t> assignments;  // cluster index per sample
  Matrix centroids;                      // k x features
  double inertia = 0.0;                  // sum of squared distances to assigned centroid

  std::size_t k() const noexcept { return centroids.rows(); }
};

struct KMeansOptions {
  std::size_t restarts = 10;
  std::size_t max_iterations = 300;
};

/// k-means++ seeding followed by Lloyd iterations, best inertia over
/// `restarts` independently seeded runs (ties keep the earliest run).
/// Deterministic in (data, k, seed, options).
Clustering kmeans(const Matrix& data, std::size_t k, std::uint64_t seed, const KMeansOptions& opts = {});

/// Sum of squared distances of each sample to the centroid of its cluster.
double inertia(const Matrix& data, const std::vector<std::size_t>& assignments, const Matrix& centroids);

}  // namespace mentalgen::cluster
