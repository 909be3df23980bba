#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mentalgen/signal/types.hpp"

namespace mentalgen::ingest {

struct LabeledSegment {
  EegRecording recording;
  SegmentLabel label;
};

/// Segments of one participant. All labels are of one kind and all
/// recordings share channel count and sample rate.
struct LabeledSegmentSet {
  std::string participant_id;
  std::string source;
  std::vector<LabeledSegment> segments;

  void validate() const;
  bool has_command_labels() const;
  bool has_feature_labels() const;
};

// Dataset directory layout:
//
//   <dataset>/<participant_id>/labels.json
//   <dataset>/<participant_id>/seg_0000.csv (+ .sha256 sidecar)
//
// labels.json:
//   {"v": 1, "participant_id": "p01", "source": "...",
//    "label_kind": "command" | "feature_labels",
//    "segments": [{"file": "seg_0000.csv", "sha256": "<hex>",
//                  "label": "IncreaseTransparency"
//                         | {"transparency": 2, "style": -1,
//                            "decoration_density": 0, "color_scheme": 5}}]}

nlohmann::json label_to_json(const SegmentLabel& label);
SegmentLabel label_from_json(const nlohmann::json& j);

void save_segment_set(const LabeledSegmentSet& set, const std::filesystem::path& participant_dir);
LabeledSegmentSet load_segment_set(const std::filesystem::path& participant_dir);

/// Participant directories (those holding labels.json), sorted by name.
std::vector<std::filesystem::path> list_participants(const std::filesystem::path& dataset_dir);

}  // namespace mentalgen::ingest
