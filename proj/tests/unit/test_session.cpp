#include <doctest.h>

#include <fstream>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "mentalgen/core/error.hpp"
#include "mentalgen/gateway/artifact_store.hpp"
#include "mentalgen/gateway/backend.hpp"
#include "mentalgen/ingest/synth.hpp"
#include "mentalgen/session/compose.hpp"
#include "mentalgen/session/events.hpp"
#include "mentalgen/session/log.hpp"
#include "mentalgen/session/report.hpp"
#include "mentalgen/session/runner.hpp"
#include "mentalgen/session/simulate.hpp"

using namespace mentalgen;
using namespace mentalgen::session;
using gateway::ArtifactStore;
using gateway::ImageRef;

namespace {

intent::Prediction pred(Command c = Command::IncreaseTransparency, double conf = 0.78) {
  intent::Prediction p;
  p.command = c;
  p.confidence = conf;
  p.decision_values = {1.0, -0.5, -1.0};
  p.decision_values[index_of(c)] = 1.5;
  return p;
}

ImageRef base_image(const ArtifactStore& store) {
  return store.put_image(gateway::encode_ppm(2, 1, std::string("\x01\x02\x03\x04\x05\x06", 6)));
}

struct Env {
  fixture::TempDir dir;
  ArtifactStore store{dir.path()};
  std::shared_ptr<gateway::MockBackend> backend = std::make_shared<gateway::MockBackend>(store);
  SessionEngine engine{store, backend};
  ImageRef base = base_image(store);
};

// Delegates to the mock and records what it returned.
class RecordingBackend : public gateway::Backend {
 public:
  explicit RecordingBackend(ArtifactStore s) : mock_(std::move(s)) {}
  std::string_view name() const noexcept override { return "recording"; }
  std::vector<gateway::GenerationResult> generate(std::span<const gateway::GenerationRequest> batch) override {
    auto r = mock_.generate(batch);
    calls += 1;
    return r;
  }
  int calls = 0;

 private:
  gateway::MockBackend mock_;
};

intent::IntentPipeline quick_pipeline() {
  intent::TrainOptions opts;
  opts.folds = 5;
  return intent::train_pipeline(ingest::synth_generate(ingest::command_synth_spec(12, 0.5, 1)), {}, opts);
}

}  // namespace

TEST_CASE("session creation") {
  Env env;
  auto s = env.engine.create("alice", env.base, {}, "s1");
  CHECK(s.status == SessionStatus::active);
  CHECK(s.history.empty());
  CHECK(s.round_index() == 0);
  CHECK(s.config.min_rounds == 8);
  CHECK(s.base_image == env.base);
  CHECK_THROWS_AS(env.engine.create("bob", env.base, {}, "s1"), StateError);
  CHECK_THROWS_AS(env.engine.create("bob", ImageRef{"images/nope.ppm"}, {}, "s2"), FieldError);
  CHECK_THROWS_AS(env.engine.create("bob", env.base, {}, "bad id!"), InvalidArgument);
  auto r = env.engine.create("bob", env.base, {});
  CHECK(valid_session_id(r.session_id));
  CHECK_THROWS_AS(env.engine.get("missing"), NotFoundError);
}

TEST_CASE("compose requests") {
  const auto corpus = default_corpus();
  ImageRef base{"images/b.ppm"};
  auto reqs = compose_requests(pred(Command::IncreaseTransparency, 0.78), base, corpus, 99);
  REQUIRE(reqs.size() == kCandidatesPerRound);
  CHECK(reqs[0].model_weight == doctest::Approx(0.78));
  CHECK(reqs[0].prompt_tokens == corpus.tokens_for(Command::IncreaseTransparency));
  const auto canon = corpus.tokens_for(Command::IncreaseTransparency);
  const std::set<std::string> pool(corpus.pool.begin(), corpus.pool.end());
  for (std::size_t i = 1; i < reqs.size(); ++i) {
    CHECK(reqs[i].prompt_tokens.size() == canon.size());
    std::size_t changed = 0;
    for (std::size_t t = 0; t < canon.size(); ++t)
      if (reqs[i].prompt_tokens[t] != canon[t]) {
        ++changed;
        CHECK(pool.count(reqs[i].prompt_tokens[t]) == 1);
      }
    CHECK(changed == perturb_count(canon.size(), 0.25));
  }
  for (const auto& r : reqs) {
    CHECK(r.base_image == base);
    CHECK(r.constraints == reqs[0].constraints);
  }
  CHECK(compose_requests(pred(), base, corpus, 99) == reqs);
  CHECK(compose_requests(pred(), base, corpus, 100) != reqs);
  CHECK(perturb_count(1, 0.25) == 1);
  CHECK(perturb_count(8, 0.25) == 2);
  CHECK_THROWS_AS(perturb_count(3, 0.0), InvalidArgument);

  auto bad = corpus;
  bad.canonical[0].clear();
  CHECK_THROWS_AS(compose_requests(pred(), base, bad, 1), InvalidArgument);
  bad = corpus;
  bad.pool.clear();
  CHECK_THROWS_AS(compose_requests(pred(), base, bad, 1), InvalidArgument);
  bad = corpus;
  bad.pool.push_back(bad.structural.front());
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("corpus json round trip") {
  const auto c = default_corpus();
  const auto back = corpus_from_json(to_json(c));
  CHECK(back.pool == c.pool);
  CHECK(back.structural == c.structural);
  for (std::size_t i = 0; i < kCommandCount; ++i) CHECK(back.canonical[i] == c.canonical[i]);
}

TEST_CASE("ratings select the earliest best candidate") {
  CHECK(select_candidate({3, 5, 2, 5, 1}) == 1);
  CHECK(select_candidate({1, 1, 1, 1, 7}) == 4);
  CHECK_THROWS_AS(validate_ratings({3, 8, 2, 5, 1}), FieldError);
  try {
    validate_ratings({3, 5, 0, 5, 1});
  } catch (const FieldError& e) {
    CHECK(e.field() == "ratings[2]");
  }

  Env env;
  env.engine.create("p", env.base, {}, "s");
  auto round = env.engine.start_round("s", pred(), 5);
  CHECK_THROWS_AS(env.engine.start_round("s", pred(), 6), StateError);
  CHECK_THROWS_AS(env.engine.submit("s", std::nullopt, std::nullopt), InvalidArgument);
  CHECK_THROWS_AS(env.engine.submit("s", Ratings{3, 8, 2, 5, 1}, std::nullopt), FieldError);
  auto s = env.engine.submit("s", Ratings{3, 5, 2, 5, 1}, std::nullopt);
  CHECK(s.history[0].selected == 1);
  CHECK(s.base_image == round.candidates[1].image);
  CHECK_THROWS_AS(env.engine.submit("s", Ratings{3, 5, 2, 5, 1}, std::nullopt), StateError);
}

TEST_CASE("final mark ends the session") {
  Env env;
  env.engine.create("p", env.base, {}, "s");
  env.engine.start_round("s", pred(), 5);
  auto s = env.engine.submit("s", std::nullopt, 3);
  CHECK(s.status == SessionStatus::finalized);
  CHECK(s.history[0].final_mark == 3);
  CHECK_THROWS_AS(env.engine.start_round("s", pred(), 6), StateError);
  CHECK_THROWS_AS(env.engine.submit("s", Ratings{1, 1, 1, 1, 1}, std::nullopt), StateError);
  auto t = env.engine.report("s");
  CHECK(t.rounds.empty());
  REQUIRE(t.final_mark.has_value());
  CHECK(t.final_mark->candidate == 3);
  CHECK(t.final_mark->round == 1);
  CHECK_THROWS_AS(env.engine.submit("s", std::nullopt, 7), StateError);
}

TEST_CASE("report arithmetic") {
  Env env;
  env.engine.create("p", env.base, {}, "s");
  CHECK_THROWS_AS(env.engine.report("s"), StateError);
  env.engine.start_round("s", pred(), 1);
  env.engine.submit("s", Ratings{2, 2, 3, 2, 3}, std::nullopt);
  auto t = env.engine.report("s");
  REQUIRE(t.rounds.size() == 1);
  CHECK(t.rounds[0].mean == doctest::Approx(2.4));
  CHECK(t.rounds[0].max == 3);
  CHECK(t.rounds[0].selected == 2);
  CHECK(t.rounds[0].selected_rating == 3);
  for (int r = 2; r <= 8; ++r) {
    env.engine.start_round("s", pred(kAllCommands[r % 3]), r);
    env.engine.submit("s", Ratings{1, 2, 3, 4, 5}, std::nullopt);
  }
  t = env.engine.report("s");
  CHECK(t.rounds.size() == 8);
  CHECK(t.round_count == 8);
  auto j = to_json(t);
  CHECK(j["trace"].size() == 8);
  CHECK(j["final_mark"].is_null());
}

TEST_CASE("round invariants hold across seeds") {
  Env env;
  SessionConfig cfg;
  cfg.shuffle = true;
  env.engine.create("p", env.base, cfg, "s");
  std::mt19937_64 rng(3);
  ImageRef expected_base = env.base;
  for (int r = 0; r < 20; ++r) {
    auto round = env.engine.start_round("s", pred(kAllCommands[rng() % 3], 0.4 + 0.05 * (rng() % 10)), rng());
    CHECK(round.base_image == expected_base);
    REQUIRE(round.candidates.size() == 5);
    int predicted = 0;
    std::set<std::size_t> ids;
    for (const auto& c : round.candidates) {
      predicted += c.provenance == Provenance::predicted;
      ids.insert(c.id);
      CHECK(env.store.resolvable(c.image));
    }
    CHECK(predicted == 1);
    CHECK(ids.size() == 5);
    Ratings ratings;
    for (auto& v : ratings) v = 1 + static_cast<int>(rng() % 7);
    auto s = env.engine.submit("s", ratings, std::nullopt);
    expected_base = round.candidates[select_candidate(ratings)].image;
    CHECK(s.base_image == expected_base);
  }
}

TEST_CASE("no transition leaves finalized") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    Env env;
    env.engine.create("p", env.base, {}, "s");
    bool finalized = false;
    for (int op = 0; op < 25; ++op) {
      const auto kind = rng() % 4;
      const auto before = to_json(env.engine.get("s")).dump();
      try {
        if (kind == 0) env.engine.start_round("s", pred(), rng());
        if (kind == 1) env.engine.submit("s", Ratings{1, 2, 3, 4, 5}, std::nullopt);
        if (kind == 2) env.engine.submit("s", std::nullopt, rng() % 5);
        if (kind == 3) env.engine.submit("s", Ratings{7, 1, 1, 1, 1}, rng() % 5);
      } catch (const Error&) {
        CHECK(to_json(env.engine.get("s")).dump() == before);
      }
      if (finalized) CHECK(to_json(env.engine.get("s")).dump() == before);
      finalized = env.engine.get("s").status == SessionStatus::finalized;
    }
  }
}

TEST_CASE("event log replays to the same state") {
  Env env;
  env.engine.create("p", env.base, {}, "s");
  for (int r = 1; r <= 3; ++r) {
    env.engine.start_round("s", pred(kAllCommands[r % 3]), r);
    env.engine.submit("s", Ratings{r, 2, 7, 1, 4}, r == 3 ? std::optional<std::size_t>(2) : std::nullopt);
  }
  auto contents = read_log(env.engine.log_path("s"));
  CHECK_FALSE(contents.truncated_tail);
  CHECK(contents.events.size() == 1 + 3 * 3 + 1);
  auto replayed = replay(contents.events);
  CHECK(to_json(replayed).dump() == to_json(env.engine.get("s")).dump());
  CHECK(to_json(session_report(replayed)).dump() == to_json(env.engine.report("s")).dump());

  std::ifstream in(env.engine.log_path("s"));
  std::string line;
  std::uint64_t seq = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j["v"] == 1);
    CHECK(j["seq"] == ++seq);
    CHECK(j["session_id"] == "s");
    CHECK(to_json(event_from_json(j), "s", seq) == j);
  }
}

TEST_CASE("log reader handles a torn tail and rejects corruption") {
  fixture::TempDir dir;
  const auto path = dir / "s.jsonl";
  {
    SessionLog log(path);
    log.append(SessionStarted{"s", "p", ImageRef{"images/a.ppm"}, {}}, "s");
    log.append(RoundStarted{1, ImageRef{"images/a.ppm"}, pred(), 9}, "s");
  }
  std::ofstream(path, std::ios::app) << R"({"v":1,"seq":3,"session_id":"s","ty)";
  auto c = read_log(path);
  CHECK(c.truncated_tail);
  CHECK(c.events.size() == 2);

  std::ofstream(dir / "bad.jsonl") << "{\"v\":1}\n{}\n";
  try {
    read_log(dir / "bad.jsonl");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  auto j = to_json(Event{Finalized{1, 2}}, "s", 1);
  j["data"]["extra"] = 1;
  CHECK_THROWS_AS(event_from_json(j), ParseError);
}

TEST_CASE("recovery rebuilds sessions and finishes pending rounds") {
  fixture::TempDir dir;
  ArtifactStore store(dir.path());
  const auto base = base_image(store);
  std::string before;
  {
    SessionEngine engine(store, std::make_shared<gateway::MockBackend>(store));
    engine.create("p", base, {}, "a");
    engine.start_round("a", pred(), 1);
    engine.submit("a", Ratings{1, 2, 3, 4, 5}, std::nullopt);
    engine.start_round("a", pred(Command::MoreClassicalStyle), 2);
    before = to_json(engine.get("a")).dump();
  }
  {
    SessionLog log(dir.path() / "sessions" / "b.jsonl");
    log.append(SessionStarted{"b", "p", base, {}}, "b");
    log.append(RoundStarted{1, base, pred(), 4}, "b");
  }
  SessionEngine engine(store, std::make_shared<gateway::MockBackend>(store));
  CHECK(engine.recover() == 2);
  CHECK(to_json(engine.get("a")).dump() == before);
  auto b = engine.get("b");
  REQUIRE(b.history.size() == 1);
  CHECK(b.history[0].candidates.size() == 5);
  engine.submit("b", Ratings{1, 1, 1, 1, 2}, std::nullopt);
  CHECK(engine.get("b").base_image == b.history[0].candidates[4].image);

  SessionEngine again(store, std::make_shared<gateway::MockBackend>(store));
  again.recover();
  CHECK(to_json(again.get("b")).dump() == to_json(engine.get("b")).dump());
}

TEST_CASE("backend choice does not change session behaviour") {
  Env env;
  fixture::TempDir other_dir;
  ArtifactStore other_store(other_dir.path());
  auto rec = std::make_shared<RecordingBackend>(other_store);
  SessionEngine other(other_store, rec);
  const auto other_base = base_image(other_store);
  REQUIRE(other_base == env.base);
  env.engine.create("p", env.base, {}, "x");
  other.create("p", other_base, {}, "x");
  for (int r = 1; r <= 3; ++r) {
    auto a = env.engine.start_round("x", pred(kAllCommands[r % 3]), r);
    auto b = other.start_round("x", pred(kAllCommands[r % 3]), r);
    CHECK(a.candidates == b.candidates);
    env.engine.submit("x", Ratings{2, 6, 3, 1, 4}, std::nullopt);
    other.submit("x", Ratings{2, 6, 3, 1, 4}, std::nullopt);
  }
  CHECK(rec->calls == 3);
  CHECK(to_json(env.engine.get("x")) == to_json(other.get("x")));
  CHECK(to_json(env.engine.report("x")).dump() == to_json(other.report("x")).dump());
}

TEST_CASE("listener sees events in log order") {
  Env env;
  std::vector<std::string> types;
  env.engine.set_listener([&](const std::string& id, const nlohmann::json& ev) {
    CHECK(id == "s");
    types.push_back(ev["type"]);
  });
  env.engine.create("p", env.base, {}, "s");
  env.engine.start_round("s", pred(), 1);
  env.engine.submit("s", Ratings{1, 2, 3, 4, 5}, 4);
  CHECK(types == std::vector<std::string>{"session_started", "round_started", "candidates_ready", "ratings_submitted",
                                          "finalized"});
}

TEST_CASE("scripted simulation runs eight rounds") {
  Env env;
  const auto pipe = quick_pipeline();
  auto policy = prefer_predicted_policy(1);
  SimulationConfig cfg;
  cfg.session_id = "sim";
  cfg.seed = 4;
  auto res = simulate(env.engine, pipe, *policy, cfg);
  CHECK(res.session.history.size() == 8);
  CHECK(res.trace.rounds.size() == 8);
  CHECK(res.session.status == SessionStatus::finalized);
  CHECK(res.intended.size() == 8);
  for (const auto& r : res.session.history) {
    const auto predicted = std::find_if(r.candidates.begin(), r.candidates.end(),
                                        [](const auto& c) { return c.provenance == Provenance::predicted; });
    CHECK((*r.ratings)[predicted->id] == 7);
  }
  cfg.rounds = 3;
  cfg.session_id = "short";
  CHECK_THROWS_AS(simulate(env.engine, pipe, *policy, cfg), InvalidArgument);
}

TEST_CASE("rating policies") {
  fixture::TempDir dir;
  std::ofstream(dir / "script.json") << R"([{"ratings": [1,2,3,4,5]}, {"final_mark": 2}])";
  auto p = parse_rating_policy("script:" + (dir / "script.json").string(), 0);
  DesignSession s;
  Round r;
  r.candidates.resize(5);
  auto d1 = p->decide(s, r);
  CHECK(d1.ratings == Ratings{1, 2, 3, 4, 5});
  auto d2 = p->decide(s, r);
  CHECK(d2.final_mark == 2u);
  CHECK_THROWS(p->decide(s, r));
  CHECK(parse_rating_policy("random", 1)->name() == "random");
  CHECK_THROWS_AS(parse_rating_policy("best", 1), InvalidArgument);
  auto rnd = random_policy(9);
  for (int i = 0; i < 20; ++i)
    for (int v : *rnd->decide(s, r).ratings) CHECK((v >= 1 && v <= 7));
}
