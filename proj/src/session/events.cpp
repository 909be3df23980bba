#include "mentalgen/session/events.hpp"

#include <initializer_list>

#include "mentalgen/gateway/wire.hpp"
#include "mentalgen/intent/persistence.hpp"

namespace mentalgen::session {

using nlohmann::json;

namespace {

void only_fields(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be an object", 0);
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ParseError(std::string(what) + ": unknown field '" + key + "'", 0);
  }
}

Provenance parse_provenance(const std::string& s) {
  if (s == "predicted") return Provenance::predicted;
  if (s == "perturbed") return Provenance::perturbed;
  throw ParseError("unknown provenance '" + s + "'", 0);
}

}  // namespace

json to_json(const CandidateImage& c) {
  return {{"id", c.id},
          {"image", c.image.path},
          {"prompt_tokens", c.prompt_tokens},
          {"model_weight", c.model_weight},
          {"provenance", to_string(c.provenance)},
          {"seed", c.seed},
          {"request_id", c.request_id},
          {"status", gateway::to_string(c.status)}};
}

CandidateImage candidate_from_json(const json& j) {
  only_fields(j, {"id", "image", "prompt_tokens", "model_weight", "provenance", "seed", "request_id", "status"},
              "candidate");
  CandidateImage c;
  c.id = j.at("id").get<std::size_t>();
  c.image.path = j.at("image").get<std::string>();
  c.prompt_tokens = j.at("prompt_tokens").get<std::vector<std::string>>();
  c.model_weight = j.at("model_weight").get<double>();
  c.provenance = parse_provenance(j.at("provenance").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.request_id = j.at("request_id").get<std::string>();
  c.status = gateway::parse_generation_status(j.at("status").get<std::string>());
  return c;
}

json to_json(const Event& e, const std::string& session_id, std::uint64_t seq) {
  json data = std::visit(
      [](const auto& ev) -> json {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, SessionStarted>) {
          return {{"participant_id", ev.participant_id},
                  {"base_image", ev.base_image.path},
                  {"min_rounds", ev.config.min_rounds},
                  {"shuffle", ev.config.shuffle}};
        } else if constexpr (std::is_same_v<T, RoundStarted>) {
          return {{"round", ev.round},
                  {"base_image", ev.base_image.path},
                  {"prediction", intent::to_json(ev.prediction)},
                  {"seed", ev.seed}};
        } else if constexpr (std::is_same_v<T, CandidatesReady>) {
          json cands = json::array();
          for (const auto& c : ev.candidates) cands.push_back(to_json(c));
          return {{"round", ev.round}, {"candidates", cands}};
        } else if constexpr (std::is_same_v<T, RatingsSubmitted>) {
          return {{"round", ev.round}, {"ratings", ev.ratings}, {"selected", ev.selected}};
        } else {
          return {{"round", ev.round}, {"final_mark", ev.final_mark}};
        }
      },
      e);
  return {{"v", kEventVersion}, {"seq", seq}, {"session_id", session_id}, {"type", event_type(e)}, {"data", data}};
}

Event event_from_json(const json& j) {
  try {
    only_fields(j, {"v", "seq", "session_id", "type", "data"}, "event");
    if (j.at("v").get<int>() != kEventVersion) throw ParseError("event: unsupported version", 0);
    const auto type = j.at("type").get<std::string>();
    const json& d = j.at("data");
    if (type == "session_started") {
      only_fields(d, {"participant_id", "base_image", "min_rounds", "shuffle"}, "session_started");
      SessionStarted e;
      e.session_id = j.at("session_id").get<std::string>();
      e.participant_id = d.at("participant_id").get<std::string>();
      e.base_image.path = d.at("base_image").get<std::string>();
      e.config.min_rounds = d.at("min_rounds").get<std::size_t>();
      e.config.shuffle = d.at("shuffle").get<bool>();
      return e;
    }
    if (type == "round_started") {
      only_fields(d, {"round", "base_image", "prediction", "seed"}, "round_started");
      RoundStarted e;
      e.round = d.at("round").get<std::size_t>();
      e.base_image.path = d.at("base_image").get<std::string>();
      e.prediction = intent::prediction_from_json(d.at("prediction"));
      e.seed = d.at("seed").get<std::uint64_t>();
      return e;
    }
    if (type == "candidates_ready") {
      only_fields(d, {"round", "candidates"}, "candidates_ready");
      CandidatesReady e;
      e.round = d.at("round").get<std::size_t>();
      for (const auto& c : d.at("candidates")) e.candidates.push_back(candidate_from_json(c));
      return e;
    }
    if (type == "ratings_submitted") {
      only_fields(d, {"round", "ratings", "selected"}, "ratings_submitted");
      RatingsSubmitted e;
      e.round = d.at("round").get<std::size_t>();
      e.ratings = d.at("ratings").get<Ratings>();
      e.selected = d.at("selected").get<std::size_t>();
      return e;
    }
    if (type == "finalized") {
      only_fields(d, {"round", "final_mark"}, "finalized");
      return Finalized{d.at("round").get<std::size_t>(), d.at("final_mark").get<std::size_t>()};
    }
    throw ParseError("unknown event type '" + type + "'", 0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("event: ") + e.what(), 0);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("event: ") + e.what(), 0);
  }
}

json to_json(const Round& r) {
  json cands = json::array();
  for (const auto& c : r.candidates) cands.push_back(to_json(c));
  return {{"round", r.index},
          {"base_image", r.base_image.path},
          {"prediction", intent::to_json(r.prediction)},
          {"seed", r.seed},
          {"candidates", cands},
          {"ratings", r.ratings ? json(*r.ratings) : json(nullptr)},
          {"selected", r.selected ? json(*r.selected) : json(nullptr)},
          {"final_mark", r.final_mark ? json(*r.final_mark) : json(nullptr)}};
}

json to_json(const DesignSession& s) {
  json history = json::array();
  for (const auto& r : s.history) history.push_back(to_json(r));
  return {{"v", kEventVersion},
          {"session_id", s.session_id},
          {"participant_id", s.participant_id},
          {"status", to_string(s.status)},
          {"initial_image", s.initial_image.path},
          {"base_image", s.base_image.path},
          {"round_index", s.round_index()},
          {"round_open", s.round_open()},
          {"min_rounds", s.config.min_rounds},
          {"shuffle", s.config.shuffle},
          {"history", history}};
}

}  // namespace mentalgen::session
