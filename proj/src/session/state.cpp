#include "mentalgen/session/state.hpp"

#include <algorithm>
#include <numeric>

#include "mentalgen/core/random.hpp"

namespace mentalgen::session {

std::string_view to_string(Provenance p) noexcept { return p == Provenance::predicted ? "predicted" : "perturbed"; }

std::string_view to_string(SessionStatus s) noexcept { return s == SessionStatus::active ? "active" : "finalized"; }

bool DesignSession::round_open() const noexcept {
  return !history.empty() && !history.back().rated() && !history.back().final_mark;
}

std::string_view event_type(const Event& e) noexcept {
  static constexpr std::string_view names[] = {"session_started", "round_started", "candidates_ready",
                                               "ratings_submitted", "finalized"};
  return names[e.index()];
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw StateError(what);
}

Round& current_round(DesignSession& s, std::size_t round) {
  require(!s.history.empty(), "no round has been started");
  require(round == s.history.size(), "event refers to round " + std::to_string(round) + " but the current round is " +
                                         std::to_string(s.history.size()));
  return s.history.back();
}

void check_candidates(const std::vector<CandidateImage>& c) {
  require(c.size() == kCandidatesPerRound, "a round needs exactly 5 candidates");
  std::size_t predicted = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    require(c[i].id == i, "candidate ids must be 0..4 in order");
    predicted += c[i].provenance == Provenance::predicted;
  }
  require(predicted == 1, "a round needs exactly one predicted candidate");
}

}  // namespace

void apply(DesignSession& s, const Event& e) {
  if (const auto* st = std::get_if<SessionStarted>(&e)) {
    require(s.session_id.empty(), "session already started");
    require(!st->session_id.empty(), "session id must not be empty");
    s = DesignSession{};
    s.session_id = st->session_id;
    s.participant_id = st->participant_id;
    s.initial_image = st->base_image;
    s.base_image = st->base_image;
    s.config = st->config;
    return;
  }
  require(!s.session_id.empty(), "session not started");
  require(s.status == SessionStatus::active, "session " + s.session_id + " is finalized");

  std::visit(
      [&](const auto& ev) {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, RoundStarted>) {
          require(!s.round_open(), "round " + std::to_string(s.history.size()) + " is still open");
          require(ev.round == s.history.size() + 1, "rounds must be numbered consecutively");
          require(ev.base_image == s.base_image, "round base image must be the session's current base");
          Round r;
          r.index = ev.round;
          r.base_image = ev.base_image;
          r.prediction = ev.prediction;
          r.seed = ev.seed;
          s.history.push_back(std::move(r));
        } else if constexpr (std::is_same_v<T, CandidatesReady>) {
          Round& r = current_round(s, ev.round);
          require(!r.has_candidates(), "candidates already delivered for round " + std::to_string(ev.round));
          check_candidates(ev.candidates);
          r.candidates = ev.candidates;
        } else if constexpr (std::is_same_v<T, RatingsSubmitted>) {
          Round& r = current_round(s, ev.round);
          require(r.has_candidates(), "round " + std::to_string(ev.round) + " has no candidates yet");
          require(!r.rated(), "round " + std::to_string(ev.round) + " is already rated");
          validate_ratings(ev.ratings);
          require(ev.selected == select_candidate(ev.ratings), "selected candidate does not match the ratings");
          r.ratings = ev.ratings;
          r.selected = ev.selected;
          s.base_image = r.candidates[ev.selected].image;
        } else if constexpr (std::is_same_v<T, Finalized>) {
          Round& r = current_round(s, ev.round);
          require(r.has_candidates(), "round " + std::to_string(ev.round) + " has no candidates yet");
          require(ev.final_mark < r.candidates.size(), "final mark must name a candidate 0..4");
          r.final_mark = ev.final_mark;
          s.status = SessionStatus::finalized;
        }
      },
      e);
}

DesignSession replay(const std::vector<Event>& events) {
  DesignSession s;
  for (const auto& e : events) apply(s, e);
  return s;
}

std::size_t select_candidate(const Ratings& r) {
  return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

void validate_ratings(const Ratings& r) {
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i] < 1 || r[i] > 7) throw FieldError("ratings[" + std::to_string(i) + "]", "must be an integer in 1..7");
}

std::vector<Event> submission_events(const DesignSession& s, const std::optional<Ratings>& ratings,
                                     std::optional<std::size_t> final_mark) {
  if (s.status == SessionStatus::finalized) throw StateError("session " + s.session_id + " is finalized");
  if (s.history.empty() || !s.history.back().has_candidates())
    throw StateError("no round with candidates is waiting for ratings");
  const Round& r = s.history.back();
  std::vector<Event> out;
  if (ratings) {
    if (r.rated()) throw StateError("round " + std::to_string(r.index) + " is already rated");
    validate_ratings(*ratings);
    out.push_back(RatingsSubmitted{r.index, *ratings, select_candidate(*ratings)});
  } else if (!final_mark) {
    throw FieldError("ratings", "ratings for all 5 candidates are required unless final_mark is set");
  }
  if (final_mark) {
    if (*final_mark >= kCandidatesPerRound) throw FieldError("final_mark", "must be a candidate id 0..4");
    out.push_back(Finalized{r.index, *final_mark});
  }
  return out;
}

std::vector<CandidateImage> make_candidates(const std::vector<gateway::GenerationRequest>& requests,
                                            const std::vector<gateway::GenerationResult>& results, bool shuffle,
                                            std::uint64_t seed) {
  if (requests.size() != kCandidatesPerRound || results.size() != requests.size())
    throw InvalidArgument("a round needs 5 requests and 5 results");
  std::vector<std::size_t> order(requests.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (shuffle) std::shuffle(order.begin(), order.end(), Rng(derive_seed(seed, 0x5407)));
  std::vector<CandidateImage> out;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& req = requests[order[pos]];
    const auto& res = results[order[pos]];
    if (res.request_id != req.request_id) throw InvalidArgument("result order does not match request order");
    CandidateImage c;
    c.id = pos;
    c.image = res.image;
    c.prompt_tokens = req.prompt_tokens;
    c.model_weight = req.model_weight;
    c.provenance = order[pos] == 0 ? Provenance::predicted : Provenance::perturbed;
    c.seed = req.seed;
    c.request_id = req.request_id;
    c.status = res.status;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace mentalgen::session
