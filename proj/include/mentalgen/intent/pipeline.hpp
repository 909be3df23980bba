#pragma once

#include <filesystem>
#include <functional>

#include <nlohmann/json.hpp>

#include "mentalgen/ingest/dataset.hpp"
#include "mentalgen/intent/model.hpp"
#include "mentalgen/spectral/features.hpp"

namespace mentalgen::intent {

/// A trained model together with the feature settings it was trained on.
struct IntentPipeline {
  spectral::FeatureConfig features;
  IntentModel model;
};

nlohmann::json to_json(const spectral::FeatureConfig& cfg);
spectral::FeatureConfig feature_config_from_json(const nlohmann::json& j);

/// One row per analysis window of every command-labeled segment.
TrainingSet training_set(const ingest::LabeledSegmentSet& set, const spectral::FeatureConfig& cfg);

/// Trains on `set` with `cfg` features; opts.feature_fingerprint is filled in.
IntentPipeline train_pipeline(const ingest::LabeledSegmentSet& set, const spectral::FeatureConfig& cfg,
                              TrainOptions opts);

/// Prediction for a raw window of at least one analysis window's length.
/// Decision values are averaged over the window's epochs.
Prediction predict_window(const IntentPipeline& p, const EegRecording& raw_window);

/// Model file with an added top-level "features" object.
void save_pipeline(const IntentPipeline& p, const std::filesystem::path& path, const nlohmann::json& extra = {});
/// Throws ParseError when the stored features do not match the model's
/// fingerprint.
IntentPipeline load_pipeline(const std::filesystem::path& path);

}  // namespace mentalgen::intent
