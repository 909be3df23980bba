#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mentalgen/session/state.hpp"

namespace mentalgen::session {

struct RoundSatisfaction {
  std::size_t round = 0;
  double mean = 0.0;
  int max = 0;
  int selected_rating = 0;
  std::size_t selected = 0;
};

struct FinalMark {
  std::size_t round = 0;
  std::size_t candidate = 0;
  gateway::ImageRef image;
};

/// Satisfaction time series over the rated rounds.
struct SatisfactionTrace {
  std::string session_id;
  SessionStatus status = SessionStatus::active;
  std::size_t round_count = 0;  // rounds started
  std::vector<RoundSatisfaction> rounds;
  std::optional<FinalMark> final_mark;
};

/// Throws StateError when the session has no rounds.
SatisfactionTrace session_report(const DesignSession& s);

/// {"v": 1, "session_id", "status", "round_count", "trace": [{"round", "mean",
///  "max", "selected", "selected_rating"}...], "final_mark": null |
///  {"round", "candidate", "image"}}
nlohmann::json to_json(const SatisfactionTrace& t);

}  // namespace mentalgen::session
