#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "mentalgen/intent/model.hpp"

namespace mentalgen::intent {

inline constexpr int kModelFormatVersion = 1;

/// Model file: {"format": "mentalgen.intent_model", "v": 1, ...}. Doubles are
/// written in shortest round-trip form, so save -> load reproduces every
/// prediction bit for bit.
nlohmann::json to_json(const IntentModel& model);
IntentModel model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CvReport& cv);
nlohmann::json to_json(const Prediction& p);
Prediction prediction_from_json(const nlohmann::json& j);

/// `extra` is merged into the top-level document (e.g. provenance).
void save_model(const IntentModel& model, const std::filesystem::path& path, const nlohmann::json& extra = {});
IntentModel load_model(const std::filesystem::path& path);

}  // namespace mentalgen::intent
