#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "mentalgen/session/state.hpp"

namespace mentalgen::session {

inline constexpr int kEventVersion = 1;

// Session log line (one JSON object per line):
//
//   {"v": 1, "seq": <n, from 1>, "session_id": "<id>",
//    "type": "session_started" | "round_started" | "candidates_ready"
//          | "ratings_submitted" | "finalized",
//    "data": {...}}
//
// data by type:
//   session_started:   {"participant_id", "base_image", "min_rounds", "shuffle"}
//   round_started:     {"round", "base_image", "prediction", "seed"}
//   candidates_ready:  {"round", "candidates": [<candidate>...]}
//   ratings_submitted: {"round", "ratings": [5 ints], "selected"}
//   finalized:         {"round", "final_mark"}
//
// candidate: {"id", "image", "prompt_tokens", "model_weight",
//             "provenance", "seed", "request_id", "status"}

nlohmann::json to_json(const Event& e, const std::string& session_id, std::uint64_t seq);
/// Throws ParseError on schema violations, including unknown fields.
Event event_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CandidateImage& c);
CandidateImage candidate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Round& r);
/// Full session view, as served by GET /v1/sessions/{id}.
nlohmann::json to_json(const DesignSession& s);

}  // namespace mentalgen::session
