#include "mentalgen/cluster/kmeans.hpp"

#include <cassert>
#include <limits>
#include <random>

#include "mentalgen/core/random.hpp"
#include "mentalgen/simd/kernels.hpp"

namespace mentalgen::cluster {

double inertia(const Matrix& data, const std::vector<std::size_t>& assignments, const Matrix& centroids) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) total += simd::squared_distance(data.row(i), centroids.row(assignments[i]));
  return total;
}

namespace {

Matrix seed_plus_plus(const Matrix& data, std::size_t k, Rng& rng) {
  const std::size_t n = data.rows();
  Matrix centroids(k, data.cols());
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const std::size_t first = pick(rng);
  std::copy(data.row(first).begin(), data.row(first).end(), centroids.row(0).begin());

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = simd::squared_distance(data.row(i), centroids.row(0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t chosen = 0;
    if (total > 0.0) {
      double target = unit(rng) * total;
      chosen = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);  // every point coincides with a centroid
    }
    std::copy(data.row(chosen).begin(), data.row(chosen).end(), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], simd::squared_distance(data.row(i), centroids.row(c)));
  }
  return centroids;
}

std::size_t nearest(std::span<const double> x, const Matrix& centroids) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = simd::squared_distance(x, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

Clustering lloyd(const Matrix& data, Matrix centroids, std::size_t max_iterations) {
  const std::size_t n = data.rows();
  const std::size_t k = centroids.rows();
  std::vector<std::size_t> assign(n, std::numeric_limits<std::size_t>::max());
  [[maybe_unused]] double previous = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest(data.row(i), centroids);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    if (!changed) break;

    Matrix sums(k, data.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      simd::axpy(1.0, data.row(i), sums.row(assign[i]));
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its centroid.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = simd::squared_distance(data.row(i), centroids.row(assign[i]));
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        std::copy(data.row(far).begin(), data.row(far).end(), centroids.row(c).begin());
        continue;
      }
      auto dst = centroids.row(c);
      auto src = sums.row(c);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = src[j] / static_cast<double>(counts[c]);
    }
#ifndef NDEBUG
    const double now = inertia(data, assign, centroids);
    assert(now <= previous * (1.0 + 1e-12) + 1e-12);
    previous = now;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) assign[i] = nearest(data.row(i), centroids);
  Clustering out{std::move(assign), std::move(centroids), 0.0};
  out.inertia = inertia(data, out.assignments, out.centroids);
  return out;
}

}  // namespace

Clustering kmeans(const Matrix& data, std::size_t k, std::uint64_t seed, const KMeansOptions& opts) {
  if (k == 0) throw InvalidArgument("k must be at least 1");
  if (k > data.rows())
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds sample count " + std::to_string(data.rows()));
  const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);

  Clustering best;
  bool have = false;
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, r));
    auto result = lloyd(data, seed_plus_plus(data, k, rng), opts.max_iterations);
    if (!have || result.inertia < best.inertia) {
      best = std::move(result);
      have = true;
    }
  }
  return best;
}

}  // namespace mentalgen::cluster
