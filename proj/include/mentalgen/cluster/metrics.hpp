#pragma once

#include <span>
#include <vector>

#include "mentalgen/cluster/kmeans.hpp"
#include "mentalgen/signal/types.hpp"

namespace mentalgen::cluster {

/// Mean per-sample silhouette. Samples alone in their cluster score 0.
/// Requires k >= 2 and no empty cluster.
double silhouette(const Matrix& data, std::span<const std::size_t> assignments, std::size_t k);
double silhouette(const Matrix& data, const Clustering& c);

/// Between / within dispersion ratio scaled by (N - k) / (k - 1).
double calinski_harabasz(const Matrix& data, std::span<const std::size_t> assignments, std::size_t k);
double calinski_harabasz(const Matrix& data, const Clustering& c);

enum class Direction : std::uint8_t { positive = 0, negative = 1 };

/// Direction and weight of one sample for a single spatial feature.
struct WeightedLabel {
  Direction direction = Direction::positive;
  double weight = 0.0;  // in [0, 1]
};
using WeightedLabelSet = std::vector<WeightedLabel>;

/// Score s -> (sign(s), |s| / 5). A zero score yields weight 0.
WeightedLabel weighted_label(double score);
WeightedLabelSet labels_for_feature(std::span<const FeatureLabels> labels, SpatialFeature feature);

/// Weighted purity: for each cluster the direction with the larger total
/// |weight| is representative; the score is the representative weight summed
/// over clusters divided by the total weight W. Throws when W == 0 or the
/// lengths differ.
double weighted_purity(std::span<const std::size_t> assignments, const WeightedLabelSet& labels);

struct VMeasure {
  double v = 0.0;
  double homogeneity = 0.0;
  double completeness = 0.0;
};

/// V-measure with directions as class labels. Weights are ignored except
/// that zero-weight samples carry no direction and are left out. A component
/// whose normalizing entropy is 0 is defined as 1.
VMeasure v_measure(std::span<const std::size_t> assignments, const WeightedLabelSet& labels, double beta = 1.0);

}  // namespace mentalgen::cluster
