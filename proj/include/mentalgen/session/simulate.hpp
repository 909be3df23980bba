#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mentalgen/intent/pipeline.hpp"
#include "mentalgen/session/runner.hpp"

namespace mentalgen::session {

struct RatingDecision {
  std::optional<Ratings> ratings;
  std::optional<std::size_t> final_mark;
};

class RatingPolicy {
 public:
  virtual ~RatingPolicy() = default;
  virtual std::string name() const = 0;
  virtual RatingDecision decide(const DesignSession& s, const Round& r) = 0;
};

/// Predicted candidate rated 7, the others uniform in 1..6.
std::unique_ptr<RatingPolicy> prefer_predicted_policy(std::uint64_t seed);
/// Every candidate uniform in 1..7.
std::unique_ptr<RatingPolicy> random_policy(std::uint64_t seed);
/// Decisions read from a JSON array, one element per round:
///   [{"ratings": [5 ints]}, {"ratings": [...], "final_mark": 2}, {"final_mark": 0}]
std::unique_ptr<RatingPolicy> script_policy(const std::filesystem::path& path);

/// "prefer-predicted" | "random" | "script:<file>"
std::unique_ptr<RatingPolicy> parse_rating_policy(const std::string& spec, std::uint64_t seed);

struct SimulationConfig {
  std::size_t rounds = 8;
  std::uint64_t seed = 0;
  std::string session_id;
  std::string participant_id = "sim";
  SessionConfig session;
  double window_noise_sigma = 1.0;
};

struct SimulationResult {
  DesignSession session;
  SatisfactionTrace trace;
  std::vector<Command> intended;  // generating class of each round's window
};

/// Scripted session: each round synthesizes a 2 s window for a rotating
/// command, predicts it, generates candidates and applies the policy's
/// ratings. The last round also marks the selected candidate as final.
/// Rounds below the session's min_rounds are rejected, as is a final mark
/// before min_rounds.
SimulationResult simulate(SessionEngine& engine, const intent::IntentPipeline& pipeline, RatingPolicy& policy,
                          const SimulationConfig& cfg);

}  // namespace mentalgen::session
