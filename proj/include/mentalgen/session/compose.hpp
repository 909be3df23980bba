#pragma once

#include <string>
#include <vector>

#include "mentalgen/gateway/types.hpp"
#include "mentalgen/intent/model.hpp"
#include "mentalgen/session/corpus.hpp"

namespace mentalgen::session {

struct ComposeOptions {
  double perturb_fraction = 0.25;
  gateway::Constraints constraints;
  std::string request_prefix;  // request ids are "<prefix>r<i>"
};

inline constexpr std::size_t kCandidatesPerRound = 5;

/// Tokens replaced in a prompt of `n` tokens: round(fraction * n), at least 1.
std::size_t perturb_count(std::size_t n, double fraction);

/// Request 0 carries the predicted command's canonical tokens with
/// model_weight = confidence. Requests 1..4 each replace a seeded random
/// subset of those tokens with draws from the pool, without replacement.
/// Request i uses seed derive_seed(seed, i).
std::vector<gateway::GenerationRequest> compose_requests(const intent::Prediction& pred, const gateway::ImageRef& base,
                                                         const PromptCorpus& corpus, std::uint64_t seed,
                                                         const ComposeOptions& opts = {});

}  // namespace mentalgen::session
