#include <algorithm>

#include "mentalgen/core/random.hpp"
#include "mentalgen/intent/model.hpp"

namespace mentalgen::intent {

std::vector<std::size_t> stratified_folds(std::span<const std::size_t> classes, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("folds must be at least 2");
  std::size_t n_classes = 0;
  for (std::size_t c : classes) n_classes = std::max(n_classes, c + 1);

  std::vector<std::size_t> out(classes.size());
  std::size_t offset = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == c) members.push_back(i);
    if (members.empty()) continue;
    if (members.size() < folds)
      throw InvalidArgument("class " + std::to_string(c) + " has " + std::to_string(members.size()) +
                            " samples, fewer than " + std::to_string(folds) + " folds");
    Rng rng(derive_seed(seed, c));
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t p = 0; p < members.size(); ++p) out[members[p]] = (offset + p) % folds;
    offset += members.size();
  }
  return out;
}

}  // namespace mentalgen::intent
