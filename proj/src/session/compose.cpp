#include "mentalgen/session/compose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mentalgen/core/random.hpp"

namespace mentalgen::session {

std::size_t perturb_count(std::size_t n, double fraction) {
  if (!(fraction > 0) || fraction > 1) throw InvalidArgument("perturb fraction must be in (0, 1]");
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

std::vector<gateway::GenerationRequest> compose_requests(const intent::Prediction& pred, const gateway::ImageRef& base,
                                                         const PromptCorpus& corpus, std::uint64_t seed,
                                                         const ComposeOptions& opts) {
  const auto& canonical = corpus.tokens_for(pred.command);
  if (corpus.pool.empty()) throw InvalidArgument("corpus perturbation pool is empty");
  if (!std::isfinite(pred.confidence) || pred.confidence < 0 || pred.confidence > 1)
    throw InvalidArgument("prediction confidence must be in [0, 1]");
  const std::size_t k = perturb_count(canonical.size(), opts.perturb_fraction);
  if (k > corpus.pool.size()) throw InvalidArgument("corpus pool smaller than the perturbation count");

  std::vector<gateway::GenerationRequest> out;
  out.reserve(kCandidatesPerRound);
  for (std::size_t i = 0; i < kCandidatesPerRound; ++i) {
    gateway::GenerationRequest r;
    r.request_id = opts.request_prefix + "r" + std::to_string(i);
    r.base_image = base;
    r.command = pred.command;
    r.model_weight = pred.confidence;
    r.prompt_tokens = canonical;
    r.constraints = opts.constraints;
    r.seed = derive_seed(seed, i);
    if (i > 0) {
      Rng rng(derive_seed(r.seed, 0x7e57));
      std::vector<std::size_t> pos(canonical.size());
      std::iota(pos.begin(), pos.end(), std::size_t{0});
      std::vector<std::size_t> picks(corpus.pool.size());
      std::iota(picks.begin(), picks.end(), std::size_t{0});
      // Partial Fisher-Yates gives k uniform draws without replacement.
      for (std::size_t j = 0; j < k; ++j) {
        std::swap(pos[j], pos[j + std::uniform_int_distribution<std::size_t>(0, pos.size() - 1 - j)(rng)]);
        std::swap(picks[j], picks[j + std::uniform_int_distribution<std::size_t>(0, picks.size() - 1 - j)(rng)]);
        r.prompt_tokens[pos[j]] = corpus.pool[picks[j]];
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mentalgen::session
