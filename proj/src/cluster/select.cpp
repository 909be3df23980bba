#include <algorithm>
#include <numeric>

#include "mentalgen/cluster/report.hpp"
#include "mentalgen/spectral/pca.hpp"

namespace mentalgen::cluster {

ClusterReport evaluate(const Matrix& data, const Clustering& clustering, std::span<const FeatureLabels> labels) {
  ClusterReport r;
  r.k = clustering.k();
  r.silhouette = silhouette(data, clustering);
  r.calinski_harabasz = calinski_harabasz(data, clustering);
  r.inertia = clustering.inertia;
  r.assignments = clustering.assignments;
  if (!labels.empty()) {
    if (labels.size() != data.rows()) throw InvalidArgument("labels length != sample count");
    for (SpatialFeature f : kAllFeatures) {
      const auto set = labels_for_feature(labels, f);
      FeatureAgreement fa{f, std::nullopt, v_measure(clustering.assignments, set)};
      const bool any_weight = std::any_of(set.begin(), set.end(), [](const WeightedLabel& l) { return l.weight > 0.0; });
      if (any_weight) fa.weighted_purity = weighted_purity(clustering.assignments, set);
      r.features.push_back(fa);
    }
  }
  return r;
}

namespace {

// Competition ranking, 1 = largest value.
std::vector<std::size_t> ranks_descending(std::span<const double> v) {
  std::vector<std::size_t> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    r[i] = 1 + static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](double x) { return x > v[i]; }));
  return r;
}

}  // namespace

std::size_t best_by_rank_sum(std::span<const std::size_t> ks, std::span<const double> silhouettes,
                             std::span<const double> calinski) {
  const auto rs = ranks_descending(silhouettes);
  const auto rc = ranks_descending(calinski);
  std::size_t best = 0;
  for (std::size_t i = 1; i < ks.size(); ++i) {
    const std::size_t si = rs[i] + rc[i];
    const std::size_t sb = rs[best] + rc[best];
    if (si < sb || (si == sb && ks[i] < ks[best])) best = i;
  }
  return best;
}

KSelection select_k(const Matrix& data, std::span<const std::size_t> k_range, std::uint64_t seed,
                    std::span<const FeatureLabels> labels, const KMeansOptions& opts) {
  if (k_range.empty()) throw InvalidArgument("k_range is empty");
  for (std::size_t k : k_range)
    if (k < 2 || k > data.rows()) throw InvalidArgument("k = " + std::to_string(k) + " outside [2, samples]");

  KSelection out;
  std::vector<double> sil, ch;
  for (std::size_t k : k_range) {
    out.table.push_back(evaluate(data, kmeans(data, k, seed, opts), labels));
    sil.push_back(out.table.back().silhouette);
    ch.push_back(out.table.back().calinski_harabasz);
  }
  out.best_k = k_range[best_by_rank_sum(k_range, sil, ch)];
  return out;
}

StudyReport cluster_study(std::span<const ParticipantData> participants, const StudyConfig& cfg) {
  if (participants.empty()) throw InvalidArgument("cluster_study: no participants");
  if (cfg.k_min < 2 || cfg.k_max < cfg.k_min) throw InvalidArgument("cluster_study: invalid k range");

  StudyReport report;
  for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) report.k_range.push_back(k);
  report.mean_silhouette.assign(report.k_range.size(), 0.0);
  report.mean_calinski.assign(report.k_range.size(), 0.0);

  std::vector<Matrix> projected;
  for (const auto& p : participants) {
    if (p.features.rows() < cfg.k_max) throw InvalidArgument(p.participant_id + ": fewer segments than k_max");
    const auto pca = spectral::pca_fit(p.features, cfg.pca_components);
    projected.push_back(spectral::pca_transform(pca, p.features));
    ParticipantResult pr;
    pr.participant_id = p.participant_id;
    pr.explained_variance_ratio = pca.explained_variance_ratio;
    pr.selection = select_k(projected.back(), report.k_range, cfg.seed, p.labels, cfg.kmeans);
    for (std::size_t i = 0; i < report.k_range.size(); ++i) {
      report.mean_silhouette[i] += pr.selection.table[i].silhouette / static_cast<double>(participants.size());
      report.mean_calinski[i] += pr.selection.table[i].calinski_harabasz / static_cast<double>(participants.size());
    }
    report.participants.push_back(std::move(pr));
  }

  const std::size_t best = best_by_rank_sum(report.k_range, report.mean_silhouette, report.mean_calinski);
  report.chosen_k = report.k_range[best];

  std::array<double, kFeatureCount> purity_sum{};
  std::array<std::size_t, kFeatureCount> purity_n{};
  for (auto& pr : report.participants) {
    pr.chosen = pr.selection.table[best];
    for (std::size_t f = 0; f < pr.chosen.features.size(); ++f) {
      const auto& fa = pr.chosen.features[f];
      if (fa.weighted_purity) {
        purity_sum[f] += *fa.weighted_purity;
        ++purity_n[f];
      }
      const double n = static_cast<double>(report.participants.size());
      report.mean_v[f].v += fa.v.v / n;
      report.mean_v[f].homogeneity += fa.v.homogeneity / n;
      report.mean_v[f].completeness += fa.v.completeness / n;
    }
  }
  for (std::size_t f = 0; f < kFeatureCount; ++f)
    if (purity_n[f]) report.mean_purity[f] = purity_sum[f] / static_cast<double>(purity_n[f]);
  return report;
}

}  // namespace mentalgen::cluster
