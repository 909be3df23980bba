#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mentalgen/gateway/types.hpp"
#include "mentalgen/intent/model.hpp"
#include "mentalgen/session/compose.hpp"

namespace mentalgen::session {

enum class Provenance { predicted, perturbed };
std::string_view to_string(Provenance p) noexcept;

struct CandidateImage {
  std::size_t id = 0;  // position on screen, 0..4
  gateway::ImageRef image;
  std::vector<std::string> prompt_tokens;
  double model_weight = 0.0;
  Provenance provenance = Provenance::perturbed;
  std::uint64_t seed = 0;
  std::string request_id;
  gateway::GenerationStatus status = gateway::GenerationStatus::ok;

  friend bool operator==(const CandidateImage&, const CandidateImage&) = default;
};

using Ratings = std::array<int, kCandidatesPerRound>;

struct Round {
  std::size_t index = 0;  // 1-based
  gateway::ImageRef base_image;
  intent::Prediction prediction;
  std::uint64_t seed = 0;
  std::vector<CandidateImage> candidates;  // empty until generation finished
  std::optional<Ratings> ratings;
  std::optional<std::size_t> selected;
  std::optional<std::size_t> final_mark;

  bool has_candidates() const noexcept { return !candidates.empty(); }
  bool rated() const noexcept { return ratings.has_value(); }
};

enum class SessionStatus { active, finalized };
std::string_view to_string(SessionStatus s) noexcept;

struct SessionConfig {
  std::size_t min_rounds = 8;  // enforced by the scripted simulation only
  bool shuffle = false;        // shuffle candidate order on screen
};

struct DesignSession {
  std::string session_id;
  std::string participant_id;
  gateway::ImageRef initial_image;
  gateway::ImageRef base_image;  // base of the next round
  std::vector<Round> history;
  SessionStatus status = SessionStatus::active;
  SessionConfig config;

  std::size_t round_index() const noexcept { return history.size(); }
  /// A round was started and is still waiting for candidates or ratings.
  bool round_open() const noexcept;
};

// Events. Every state change is one of these; replaying a session's events
// in order through apply() reconstructs it exactly.

struct SessionStarted {
  std::string session_id;
  std::string participant_id;
  gateway::ImageRef base_image;
  SessionConfig config;
};

struct RoundStarted {
  std::size_t round = 0;
  gateway::ImageRef base_image;
  intent::Prediction prediction;
  std::uint64_t seed = 0;
};

struct CandidatesReady {
  std::size_t round = 0;
  std::vector<CandidateImage> candidates;
};

struct RatingsSubmitted {
  std::size_t round = 0;
  Ratings ratings{};
  std::size_t selected = 0;
};

struct Finalized {
  std::size_t round = 0;
  std::size_t final_mark = 0;
};

using Event = std::variant<SessionStarted, RoundStarted, CandidatesReady, RatingsSubmitted, Finalized>;

std::string_view event_type(const Event& e) noexcept;

/// Applies one event. Throws StateError when the event is not admissible in
/// the current state (no transition leaves `finalized`).
void apply(DesignSession& s, const Event& e);

DesignSession replay(const std::vector<Event>& events);

/// argmax of the ratings; ties go to the earliest candidate id.
std::size_t select_candidate(const Ratings& r);

/// Throws FieldError("ratings[i]", ...) unless every value is in 1..7.
void validate_ratings(const Ratings& r);

/// Events for a submission. Ratings are required unless `final_mark` is set.
/// Finalizing may be combined with ratings.
std::vector<Event> submission_events(const DesignSession& s, const std::optional<Ratings>& ratings,
                                     std::optional<std::size_t> final_mark);

/// Candidates for a round from its requests and the backend results, in
/// screen order (predicted first unless the session shuffles).
std::vector<CandidateImage> make_candidates(const std::vector<gateway::GenerationRequest>& requests,
                                            const std::vector<gateway::GenerationResult>& results, bool shuffle,
                                            std::uint64_t seed);

}  // namespace mentalgen::session
