#include "mentalgen/intent/pipeline.hpp"

#include <fstream>

#include "mentalgen/intent/persistence.hpp"

namespace mentalgen::intent {

using nlohmann::json;

json to_json(const spectral::FeatureConfig& c) {
  json ica = {{"max_iterations", c.ica.max_iterations},
              {"tolerance", c.ica.tolerance},
              {"kurtosis_threshold", c.ica.kurtosis_threshold},
              {"seed", c.ica.seed}};
  if (c.ica.manual_reject) ica["manual_reject"] = *c.ica.manual_reject;
  return {{"filter", {{"low_cut", c.filter.low_cut}, {"high_cut", c.filter.high_cut}, {"order", c.filter.order}}},
          {"apply_ica", c.apply_ica},
          {"ica", ica},
          {"window_s", c.window_s},
          {"overlap_s", c.overlap_s},
          {"welch", {{"segment_samples", c.welch.segment_samples}, {"overlap_fraction", c.welch.overlap_fraction}}},
          {"kind", spectral::to_string(c.kind)},
          {"channel_relative", c.channel_relative}};
}

spectral::FeatureConfig feature_config_from_json(const json& j) {
  spectral::FeatureConfig c;
  try {
    const auto& f = j.at("filter");
    c.filter.low_cut = f.at("low_cut").get<double>();
    c.filter.high_cut = f.at("high_cut").get<double>();
    c.filter.order = f.at("order").get<int>();
    c.apply_ica = j.at("apply_ica").get<bool>();
    const auto& ica = j.at("ica");
    c.ica.max_iterations = ica.at("max_iterations").get<std::size_t>();
    c.ica.tolerance = ica.at("tolerance").get<double>();
    c.ica.kurtosis_threshold = ica.at("kurtosis_threshold").get<double>();
    c.ica.seed = ica.at("seed").get<std::uint64_t>();
    if (ica.contains("manual_reject")) c.ica.manual_reject = ica.at("manual_reject").get<std::vector<std::size_t>>();
    c.window_s = j.at("window_s").get<double>();
    c.overlap_s = j.at("overlap_s").get<double>();
    c.welch.segment_samples = j.at("welch").at("segment_samples").get<std::size_t>();
    c.welch.overlap_fraction = j.at("welch").at("overlap_fraction").get<double>();
    c.kind = spectral::parse_feature_kind(j.at("kind").get<std::string>());
    c.channel_relative = j.at("channel_relative").get<bool>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid feature config: ") + e.what(), 0);
  }
  return c;
}

TrainingSet training_set(const ingest::LabeledSegmentSet& set, const spectral::FeatureConfig& cfg) {
  set.validate();
  if (!set.has_command_labels()) throw InvalidArgument("training needs command-labeled segments");
  TrainingSet ts;
  for (const auto& seg : set.segments) {
    const Matrix rows = spectral::recording_features(seg.recording, cfg);
    const Command c = std::get<Command>(seg.label);
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      ts.features.append_row(rows.row(r));
      ts.labels.push_back(c);
    }
  }
  return ts;
}

IntentPipeline train_pipeline(const ingest::LabeledSegmentSet& set, const spectral::FeatureConfig& cfg,
                              TrainOptions opts) {
  opts.feature_fingerprint = cfg.fingerprint();
  return {cfg, train_intent_model(training_set(set, cfg), opts)};
}

Prediction predict_window(const IntentPipeline& p, const EegRecording& raw) {
  const Matrix rows = spectral::recording_features(raw, p.features);
  if (rows.rows() == 0) throw InvalidArgument("window is shorter than one analysis window");
  std::array<double, kCommandCount> mean{};
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const Prediction one = predict(p.model, rows.row(r));
    for (std::size_t c = 0; c < kCommandCount; ++c) mean[c] += one.decision_values[c];
  }
  for (double& v : mean) v /= static_cast<double>(rows.rows());
  return prediction_from_decisions(mean);
}

void save_pipeline(const IntentPipeline& p, const std::filesystem::path& path, const json& extra) {
  json more = extra.is_object() ? extra : json::object();
  more["features"] = to_json(p.features);
  save_model(p.model, path, more);
}

IntentPipeline load_pipeline(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open model " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model is not valid JSON: ") + e.what(), 0);
  }
  IntentPipeline p;
  p.model = model_from_json(j);
  if (!j.contains("features")) throw ParseError("model file has no feature settings", 0);
  p.features = feature_config_from_json(j.at("features"));
  if (p.features.fingerprint() != p.model.feature_fingerprint)
    throw ParseError("feature settings do not match the model fingerprint", 0);
  return p;
}

}  // namespace mentalgen::intent
