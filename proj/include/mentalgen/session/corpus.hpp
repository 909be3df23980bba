#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mentalgen/signal/types.hpp"

namespace mentalgen::session {

/// Prompt vocabulary. `canonical` holds each command's prompt tokens,
/// `pool` the shared interior-design vocabulary perturbations draw from, and
/// `structural` the tokens that pin room geometry, which never enter the pool.
struct PromptCorpus {
  std::array<std::vector<std::string>, kCommandCount> canonical;
  std::vector<std::string> pool;
  std::vector<std::string> structural;

  const std::vector<std::string>& tokens_for(Command c) const;
  /// Throws when a command has no tokens, the pool is empty, or pool and
  /// structural vocabularies overlap.
  void validate() const;
};

PromptCorpus default_corpus();

/// {"v": 1, "canonical": {"<Command>": [...]}, "pool": [...], "structural": [...]}
nlohmann::json to_json(const PromptCorpus& c);
PromptCorpus corpus_from_json(const nlohmann::json& j);

}  // namespace mentalgen::session
