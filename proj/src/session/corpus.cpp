#include "mentalgen/session/corpus.hpp"

#include <algorithm>
#include <set>

namespace mentalgen::session {

using nlohmann::json;

const std::vector<std::string>& PromptCorpus::tokens_for(Command c) const {
  const auto& t = canonical[index_of(c)];
  if (t.empty()) throw InvalidArgument("corpus has no prompt tokens for " + std::string(to_string(c)));
  return t;
}

void PromptCorpus::validate() const {
  for (Command c : kAllCommands) tokens_for(c);
  if (pool.empty()) throw InvalidArgument("corpus perturbation pool is empty");
  const std::set<std::string> s(structural.begin(), structural.end());
  for (const auto& t : pool)
    if (s.count(t)) throw InvalidArgument("pool token '" + t + "' is also a structural token");
}

PromptCorpus default_corpus() {
  PromptCorpus c;
  c.canonical[index_of(Command::IncreaseTransparency)] = {
      "interior design", "living room", "glass partition", "floor-to-ceiling windows", "translucent screens",
      "natural daylight", "open sightlines", "light airy space"};
  c.canonical[index_of(Command::MoreLuxuriousDecoration)] = {
      "interior design", "living room", "marble surfaces", "gilded trim", "crystal chandelier",
      "velvet upholstery", "ornate moulding", "rich textures"};
  c.canonical[index_of(Command::MoreClassicalStyle)] = {
      "interior design", "living room", "neoclassical style", "symmetrical layout", "fluted columns",
      "coffered ceiling", "wainscoting", "traditional furniture"};
  c.pool = {"oak flooring",   "linen curtains", "brass fixtures", "terrazzo",      "rattan chairs",
            "walnut cabinetry", "pendant lamps", "herringbone parquet", "boucle sofa", "travertine",
            "indoor plants",  "arched doorway", "wool rug",       "matte black accents", "sheer drapes",
            "stone fireplace", "built-in shelving", "warm lighting", "cool palette", "earth tones",
            "minimalist decor", "art deco motifs", "ceramic vases", "skylight",     "mirror wall"};
  c.structural = {"same room layout", "preserve walls", "preserve windows", "same camera angle", "keep floor plan"};
  c.validate();
  return c;
}

json to_json(const PromptCorpus& c) {
  json canon = json::object();
  for (Command cmd : kAllCommands) canon[std::string(to_string(cmd))] = c.canonical[index_of(cmd)];
  return {{"v", 1}, {"canonical", canon}, {"pool", c.pool}, {"structural", c.structural}};
}

PromptCorpus corpus_from_json(const json& j) {
  PromptCorpus c;
  try {
    if (j.at("v").get<int>() != 1) throw ParseError("corpus: unsupported version", 0);
    for (const auto& [name, tokens] : j.at("canonical").items())
      c.canonical[index_of(parse_command(name))] = tokens.get<std::vector<std::string>>();
    c.pool = j.at("pool").get<std::vector<std::string>>();
    c.structural = j.value("structural", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw ParseError(std::string("corpus: ") + e.what(), 0);
  }
  return c;
}

}  // namespace mentalgen::session
