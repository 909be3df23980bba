#include "mentalgen/cluster/report.hpp"

namespace mentalgen::cluster {

using nlohmann::json;

namespace {

json to_json(const VMeasure& v) {
  return {{"v_measure", v.v}, {"homogeneity", v.homogeneity}, {"completeness", v.completeness}};
}

json features_json(const std::vector<FeatureAgreement>& features) {
  json out = json::object();
  for (const auto& f : features) {
    json entry = to_json(f.v);
    entry["weighted_purity"] = f.weighted_purity ? json(*f.weighted_purity) : json(nullptr);
    out[std::string(to_string(f.feature))] = entry;
  }
  return out;
}

}  // namespace

json to_json(const ClusterReport& r) {
  json j = {{"k", r.k},
            {"silhouette", r.silhouette},
            {"calinski_harabasz", r.calinski_harabasz},
            {"inertia", r.inertia},
            {"assignments", r.assignments}};
  if (!r.features.empty()) j["features"] = features_json(r.features);
  return j;
}

json to_json(const KSelection& s) {
  json table = json::array();
  for (const auto& r : s.table) table.push_back(to_json(r));
  return {{"v", 1}, {"best_k", s.best_k}, {"table", table}};
}

json to_json(const StudyReport& s) {
  json participants = json::array();
  for (const auto& p : s.participants) {
    participants.push_back({{"participant_id", p.participant_id},
                            {"explained_variance_ratio", p.explained_variance_ratio},
                            {"own_best_k", p.selection.best_k},
                            {"table", to_json(p.selection)["table"]},
                            {"chosen", to_json(p.chosen)}});
  }
  json summary = json::object();
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    json entry = to_json(s.mean_v[f]);
    entry["weighted_purity"] = s.mean_purity[f] ? json(*s.mean_purity[f]) : json(nullptr);
    summary[std::string(to_string(kAllFeatures[f]))] = entry;
  }
  json per_k = json::array();
  for (std::size_t i = 0; i < s.k_range.size(); ++i)
    per_k.push_back({{"k", s.k_range[i]}, {"silhouette", s.mean_silhouette[i]}, {"calinski_harabasz", s.mean_calinski[i]}});
  return {{"v", 1},
          {"kind", "cluster_study"},
          {"chosen_k", s.chosen_k},
          {"per_k", per_k},
          {"features", summary},
          {"participants", participants}};
}

}  // namespace mentalgen::cluster
