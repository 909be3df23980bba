#include <cmath>
#include <map>
#include <utility>

#include "mentalgen/cluster/metrics.hpp"

namespace mentalgen::cluster {

WeightedLabel weighted_label(double score) {
  if (!std::isfinite(score) || score < -5.0 || score > 5.0) throw InvalidArgument("score out of [-5, 5]");
  return {score < 0.0 ? Direction::negative : Direction::positive, std::abs(score) / 5.0};
}

WeightedLabelSet labels_for_feature(std::span<const FeatureLabels> labels, SpatialFeature feature) {
  WeightedLabelSet out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(weighted_label(l.score(feature)));
  return out;
}

namespace {

void check_labels(std::span<const std::size_t> assignments, const WeightedLabelSet& labels) {
  if (assignments.size() != labels.size())
    throw InvalidArgument("labels length " + std::to_string(labels.size()) + " != assignments length " +
                          std::to_string(assignments.size()));
  for (const auto& l : labels)
    if (!(l.weight >= 0.0 && l.weight <= 1.0)) throw InvalidArgument("label weight outside [0, 1]");
}

}  // namespace

double weighted_purity(std::span<const std::size_t> assignments, const WeightedLabelSet& labels) {
  check_labels(assignments, labels);
  // cluster -> (positive weight, negative weight)
  std::map<std::size_t, std::pair<double, double>> per_cluster;
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double w = std::abs(labels[i].weight);
    auto& [pos, neg] = per_cluster[assignments[i]];
    (labels[i].direction == Direction::positive ? pos : neg) += w;
    total += w;
  }
  if (total <= 0.0) throw InvalidArgument("weighted purity undefined: total weight is zero");
  double represented = 0.0;
  for (const auto& [cluster, pn] : per_cluster) represented += std::max(pn.first, pn.second);
  return represented / total;
}

VMeasure v_measure(std::span<const std::size_t> assignments, const WeightedLabelSet& labels, double beta) {
  check_labels(assignments, labels);
  if (!(beta > 0.0)) throw InvalidArgument("beta must be positive");

  // Contingency table over samples that carry a direction.
  std::map<std::size_t, std::array<double, 2>> table;
  std::array<double, 2> class_totals{0.0, 0.0};
  double n = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].weight == 0.0) continue;
    const auto cls = static_cast<std::size_t>(labels[i].direction);
    table[assignments[i]][cls] += 1.0;
    class_totals[cls] += 1.0;
    n += 1.0;
  }
  if (n == 0.0) return {1.0, 1.0, 1.0};

  auto xlogx = [](double p) { return p > 0.0 ? p * std::log(p) : 0.0; };
  double h_class = 0.0;
  for (double c : class_totals) h_class -= xlogx(c / n);
  double h_cluster = 0.0, h_class_given_cluster = 0.0, h_cluster_given_class = 0.0;
  for (const auto& [cluster, counts] : table) {
    const double nk = counts[0] + counts[1];
    h_cluster -= xlogx(nk / n);
    for (std::size_t c = 0; c < 2; ++c) {
      if (counts[c] == 0.0) continue;
      h_class_given_cluster -= counts[c] / n * std::log(counts[c] / nk);
      h_cluster_given_class -= counts[c] / n * std::log(counts[c] / class_totals[c]);
    }
  }
  VMeasure out;
  out.homogeneity = h_class == 0.0 ? 1.0 : 1.0 - h_class_given_cluster / h_class;
  out.completeness = h_cluster == 0.0 ? 1.0 : 1.0 - h_cluster_given_class / h_cluster;
  const double denom = beta * out.homogeneity + out.completeness;
  out.v = denom == 0.0 ? 0.0 : (1.0 + beta) * out.homogeneity * out.completeness / denom;
  return out;
}

}  // namespace mentalgen::cluster
