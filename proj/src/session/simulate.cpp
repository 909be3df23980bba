#include "mentalgen/session/simulate.hpp"

#include <fstream>
#include <random>

#include "mentalgen/core/random.hpp"
#include "mentalgen/ingest/synth.hpp"

namespace mentalgen::session {

namespace {

class PreferPredicted final : public RatingPolicy {
 public:
  explicit PreferPredicted(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "prefer-predicted"; }
  RatingDecision decide(const DesignSession&, const Round& r) override {
    Ratings out{};
    std::uniform_int_distribution<int> d(1, 6);
    for (const auto& c : r.candidates) out[c.id] = c.provenance == Provenance::predicted ? 7 : d(rng_);
    return {out, std::nullopt};
  }

 private:
  Rng rng_;
};

class RandomPolicy final : public RatingPolicy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  std::string name() const override { return "random"; }
  RatingDecision decide(const DesignSession&, const Round&) override {
    Ratings out{};
    std::uniform_int_distribution<int> d(1, 7);
    for (int& v : out) v = d(rng_);
    return {out, std::nullopt};
  }

 private:
  Rng rng_;
};

class ScriptPolicy final : public RatingPolicy {
 public:
  explicit ScriptPolicy(std::vector<RatingDecision> steps, std::string source)
      : steps_(std::move(steps)), source_(std::move(source)) {}
  std::string name() const override { return "script:" + source_; }
  RatingDecision decide(const DesignSession&, const Round& r) override {
    if (next_ >= steps_.size())
      throw InvalidArgument("rating script has no entry for round " + std::to_string(r.index));
    return steps_[next_++];
  }

 private:
  std::vector<RatingDecision> steps_;
  std::string source_;
  std::size_t next_ = 0;
};

}  // namespace

std::unique_ptr<RatingPolicy> prefer_predicted_policy(std::uint64_t seed) {
  return std::make_unique<PreferPredicted>(seed);
}

std::unique_ptr<RatingPolicy> random_policy(std::uint64_t seed) { return std::make_unique<RandomPolicy>(seed); }

std::unique_ptr<RatingPolicy> script_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("rating script " + path.string() + " not found");
  std::vector<RatingDecision> steps;
  try {
    const auto doc = nlohmann::json::parse(in);
    if (!doc.is_array()) throw ParseError("rating script must be a JSON array", 0);
    for (const auto& e : doc) {
      for (const auto& [k, _] : e.items())
        if (k != "ratings" && k != "final_mark") throw ParseError("rating script: unknown field '" + k + "'", 0);
      RatingDecision d;
      if (e.contains("ratings")) d.ratings = e.at("ratings").get<Ratings>();
      if (e.contains("final_mark")) d.final_mark = e.at("final_mark").get<std::size_t>();
      steps.push_back(d);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  return std::make_unique<ScriptPolicy>(std::move(steps), path.string());
}

std::unique_ptr<RatingPolicy> parse_rating_policy(const std::string& spec, std::uint64_t seed) {
  if (spec == "prefer-predicted") return prefer_predicted_policy(seed);
  if (spec == "random") return random_policy(seed);
  if (spec.starts_with("script:")) return script_policy(spec.substr(7));
  throw InvalidArgument("unknown rating policy '" + spec + "' (prefer-predicted, random, script:FILE)");
}

SimulationResult simulate(SessionEngine& engine, const intent::IntentPipeline& pipeline, RatingPolicy& policy,
                          const SimulationConfig& cfg) {
  if (cfg.rounds < cfg.session.min_rounds)
    throw InvalidArgument("simulation needs at least min_rounds = " + std::to_string(cfg.session.min_rounds) +
                          " rounds");
  const gateway::ImageRef base = gateway::placeholder_image(engine.store());
  SimulationResult out;
  const DesignSession created = engine.create(cfg.participant_id, base, cfg.session, cfg.session_id);
  const std::string id = created.session_id;

  for (std::size_t r = 1; r <= cfg.rounds; ++r) {
    const Command intended = kAllCommands[(r - 1) % kCommandCount];
    auto spec = ingest::command_synth_spec(1, cfg.window_noise_sigma, derive_seed(cfg.seed, 1000 + r));
    spec.classes = {spec.classes[index_of(intended)]};
    const auto window = ingest::synth_generate(spec).segments.front().recording;
    const intent::Prediction pred = intent::predict_window(pipeline, window);
    out.intended.push_back(intended);

    const Round round = engine.start_round(id, pred, derive_seed(cfg.seed, r));
    RatingDecision d = policy.decide(engine.get(id), round);
    if (d.final_mark && r < cfg.session.min_rounds)
      throw InvalidArgument("final mark in round " + std::to_string(r) + " is before min_rounds");
    if (r == cfg.rounds && !d.final_mark) {
      if (!d.ratings) throw InvalidArgument("rating policy gave neither ratings nor a final mark");
      d.final_mark = select_candidate(*d.ratings);
    }
    const DesignSession after = engine.submit(id, d.ratings, d.final_mark);
    if (after.status == SessionStatus::finalized) break;
  }
  out.session = engine.get(id);
  out.trace = session_report(out.session);
  return out;
}

}  // namespace mentalgen::session
