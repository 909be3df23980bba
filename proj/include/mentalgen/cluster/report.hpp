#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mentalgen/cluster/kmeans.hpp"
#include "mentalgen/cluster/metrics.hpp"

namespace mentalgen::cluster {

/// Agreement between a clustering and one spatial feature's labels.
struct FeatureAgreement {
  SpatialFeature feature;
  std::optional<double> weighted_purity;  // empty when every weight is zero
  VMeasure v;
};

struct ClusterReport {
  std::size_t k = 0;
  double silhouette = 0.0;
  double calinski_harabasz = 0.0;
  double inertia = 0.0;
  std::vector<std::size_t> assignments;
  std::vector<FeatureAgreement> features;  // empty when no labels were given
};

ClusterReport evaluate(const Matrix& data, const Clustering& clustering, std::span<const FeatureLabels> labels = {});

struct KSelection {
  std::size_t best_k = 0;
  std::vector<ClusterReport> table;  // one per k, in k_range order
};

/// Index of the best row: the smallest sum of the silhouette rank and the
/// Calinski-Harabasz rank (1 = best), ties broken toward smaller k.
std::size_t best_by_rank_sum(std::span<const std::size_t> ks, std::span<const double> silhouettes,
                             std::span<const double> calinski);

/// Clusters `data` for every k in `k_range` (each in [2, samples]).
KSelection select_k(const Matrix& data, std::span<const std::size_t> k_range, std::uint64_t seed,
                    std::span<const FeatureLabels> labels = {}, const KMeansOptions& opts = {});

/// Segment features and labels of one participant.
struct ParticipantData {
  std::string participant_id;
  Matrix features;  // segments x raw features
  std::vector<FeatureLabels> labels;
};

struct StudyConfig {
  std::size_t pca_components = 2;
  std::size_t k_min = 2;
  std::size_t k_max = 8;
  std::uint64_t seed = 0;
  KMeansOptions kmeans;
};

struct ParticipantResult {
  std::string participant_id;
  std::vector<double> explained_variance_ratio;
  KSelection selection;  // per-participant table; best_k is the participant's own choice
  ClusterReport chosen;  // report at the study-wide k
};

struct StudyReport {
  std::size_t chosen_k = 0;
  std::vector<std::size_t> k_range;
  std::vector<double> mean_silhouette;  // per k
  std::vector<double> mean_calinski;    // per k
  std::vector<ParticipantResult> participants;
  std::array<std::optional<double>, kFeatureCount> mean_purity{};
  std::array<VMeasure, kFeatureCount> mean_v{};
};

/// PCA to `pca_components` per participant, k-means over [k_min, k_max],
/// one study-wide k by rank sum of the participant-averaged indices, then
/// purity and V-measure per feature averaged across participants.
StudyReport cluster_study(std::span<const ParticipantData> participants, const StudyConfig& cfg);

nlohmann::json to_json(const ClusterReport& r);
nlohmann::json to_json(const KSelection& s);
nlohmann::json to_json(const StudyReport& s);

}  // namespace mentalgen::cluster
