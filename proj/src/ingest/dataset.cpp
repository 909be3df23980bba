#include "mentalgen/ingest/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mentalgen/core/hash.hpp"
#include "mentalgen/ingest/csv.hpp"

namespace mentalgen::ingest {

using nlohmann::json;
namespace fs = std::filesystem;

void LabeledSegmentSet::validate() const {
  if (segments.empty()) throw InvalidArgument("segment set is empty");
  const auto kind = segments.front().label.index();
  const auto& first = segments.front().recording;
  for (const auto& s : segments) {
    if (s.label.index() != kind) throw InvalidArgument("segment set mixes label kinds");
    if (s.recording.channels() != first.channels() || s.recording.sample_rate != first.sample_rate)
      throw InvalidArgument("segment dimensions differ within the set");
    s.recording.validate();
    if (const auto* fl = std::get_if<FeatureLabels>(&s.label)) fl->validate();
  }
}

bool LabeledSegmentSet::has_command_labels() const {
  return !segments.empty() && std::holds_alternative<Command>(segments.front().label);
}

bool LabeledSegmentSet::has_feature_labels() const {
  return !segments.empty() && std::holds_alternative<FeatureLabels>(segments.front().label);
}

json label_to_json(const SegmentLabel& label) {
  if (const auto* c = std::get_if<Command>(&label)) return std::string(to_string(*c));
  if (const auto* f = std::get_if<FeatureLabels>(&label))
    return {{"transparency", f->transparency},
            {"style", f->style},
            {"decoration_density", f->decoration_density},
            {"color_scheme", f->color_scheme}};
  return nullptr;
}

SegmentLabel label_from_json(const json& j) {
  if (j.is_null()) return std::monostate{};
  if (j.is_string()) return parse_command(j.get<std::string>());
  if (j.is_object()) {
    FeatureLabels f;
    f.transparency = j.at("transparency").get<double>();
    f.style = j.at("style").get<double>();
    f.decoration_density = j.at("decoration_density").get<double>();
    f.color_scheme = j.at("color_scheme").get<double>();
    f.validate();
    return f;
  }
  throw ParseError("label must be a command name, a feature-score object, or null", 0);
}

void save_segment_set(const LabeledSegmentSet& set, const fs::path& dir) {
  set.validate();
  fs::create_directories(dir);
  json segs = json::array();
  for (std::size_t i = 0; i < set.segments.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "seg_%04zu.csv", i);
    const std::string text = format_recording(set.segments[i].recording);
    save_recording(set.segments[i].recording, dir / name);
    segs.push_back({{"file", name}, {"sha256", sha256_hex(text)}, {"label", label_to_json(set.segments[i].label)}});
  }
  json doc = {{"v", 1},
              {"participant_id", set.participant_id},
              {"source", set.source},
              {"label_kind", set.has_command_labels() ? "command" : "feature_labels"},
              {"segments", segs}};
  std::ofstream out(dir / "labels.json");
  if (!out) throw Error("cannot write " + (dir / "labels.json").string());
  out << doc.dump(1) << '\n';
}

LabeledSegmentSet load_segment_set(const fs::path& dir) {
  const fs::path labels = dir / "labels.json";
  std::ifstream in(labels);
  if (!in) throw NotFoundError("missing " + labels.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(labels.string() + ": " + e.what(), 0);
  }
  LabeledSegmentSet set;
  try {
    if (doc.at("v").get<int>() != 1) throw ParseError(labels.string() + ": unsupported version", 0);
    set.participant_id = doc.at("participant_id").get<std::string>();
    set.source = doc.value("source", "");
    for (const auto& s : doc.at("segments")) {
      const fs::path file = dir / s.at("file").get<std::string>();
      std::ifstream fin(file, std::ios::binary);
      if (!fin) throw NotFoundError("missing segment " + file.string());
      std::ostringstream ss;
      ss << fin.rdbuf();
      if (s.contains("sha256") && s.at("sha256").get<std::string>() != sha256_hex(ss.str()))
        throw ParseError(file.string() + ": content hash does not match labels.json", 0);
      set.segments.push_back({parse_recording(ss.str()), label_from_json(s.at("label"))});
    }
  } catch (const json::exception& e) {
    throw ParseError(labels.string() + ": " + e.what(), 0);
  }
  set.validate();
  return set;
}

std::vector<fs::path> list_participants(const fs::path& dataset_dir) {
  if (!fs::is_directory(dataset_dir)) throw NotFoundError("dataset directory " + dataset_dir.string() + " not found");
  std::vector<fs::path> out;
  if (fs::exists(dataset_dir / "labels.json")) out.push_back(dataset_dir);
  for (const auto& e : fs::directory_iterator(dataset_dir))
    if (e.is_directory() && fs::exists(e.path() / "labels.json")) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mentalgen::ingest
