#include <doctest.h>

#include <httplib.h>

#include <chrono>
#include <map>
#include <thread>

#include "fixtures.hpp"
#include "mentalgen/core/error.hpp"
#include "mentalgen/ingest/dataset.hpp"
#include "mentalgen/ingest/synth.hpp"
#include "mentalgen/intent/persistence.hpp"
#include "mentalgen/service/config.hpp"
#include "mentalgen/service/http_server.hpp"
#include "mentalgen/service/service.hpp"
#include "mentalgen/service/ws_client.hpp"

using namespace mentalgen;
using namespace mentalgen::service;
using nlohmann::json;
using namespace std::chrono_literals;

namespace {

const ingest::LabeledSegmentSet& synth_set() {
  static const auto set = ingest::synth_generate(ingest::command_synth_spec(12, 0.5, 21));
  return set;
}

std::shared_ptr<const intent::IntentPipeline> trained() {
  static const auto pipe = [] {
    intent::TrainOptions opts;
    opts.folds = 4;
    return std::make_shared<const intent::IntentPipeline>(intent::train_pipeline(synth_set(), {}, opts));
  }();
  return pipe;
}

json window_json(const EegRecording& rec) {
  json rows = json::array();
  for (std::size_t ch = 0; ch < rec.channels(); ++ch) {
    auto r = rec.data.row(ch);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"sample_rate", rec.sample_rate}, {"data", rows}};
}

json chunk(const EegRecording& rec, std::size_t from, std::size_t len, std::size_t channels) {
  json rows = json::array();
  for (std::size_t ch = 0; ch < channels; ++ch) {
    auto r = rec.data.row(ch % rec.channels());
    rows.push_back(std::vector<double>(r.begin() + from, r.begin() + from + len));
  }
  return {{"type", "chunk"}, {"sample_rate", rec.sample_rate}, {"data", rows}};
}

struct ServiceEnv {
  fixture::TempDir dir;
  ServiceConfig cfg = [this] {
    ServiceConfig c;
    c.artifacts_dir = dir / "artifacts";
    c.listen = "127.0.0.1:0";
    return c;
  }();
  Service svc{cfg};
  ServiceEnv() { svc.set_model(trained()); }

  json call(std::string_view method, std::string_view target, const json& body, int expect) {
    auto r = svc.handle(method, target, body.is_null() ? "" : body.dump());
    INFO(r.body);
    CHECK(r.status == expect);
    return r.content_type == "application/json" ? json::parse(r.body) : json();
  }
};

}  // namespace

TEST_CASE("config parsing") {
  auto c = parse_service_config(R"({"v": 1, "listen": "0.0.0.0:9000",
    "gateway": {"mode": "remote", "url": "ws://gen:8188/ws", "timeout_ms": 5000},
    "training": {"C": 2, "gamma": 0.5, "folds": 5},
    "features": {"kind": "log_psd_bins"},
    "session": {"min_rounds": 4, "shuffle": true}})");
  CHECK(c.listen == "0.0.0.0:9000");
  CHECK(c.gateway_mode == GatewayMode::remote);
  CHECK(c.remote.url == "ws://gen:8188/ws");
  CHECK(c.remote.timeout == 5000ms);
  CHECK(c.training.svm.C == 2.0);
  CHECK(c.training.svm.gamma_mode == intent::GammaMode::fixed);
  CHECK(c.training.folds == 5);
  CHECK(c.features.kind == spectral::FeatureKind::log_psd_bins);
  CHECK(c.session.min_rounds == 4);
  CHECK(c.session.shuffle);
  validate(c);

  auto d = parse_service_config("{}");
  CHECK(d.listen == "127.0.0.1:8080");
  CHECK(d.gateway_mode == GatewayMode::mock);
  CHECK(d.session.min_rounds == 8);
  CHECK_FALSE(d.features.apply_ica);
}

TEST_CASE("config errors name the line") {
  const std::map<std::string, std::size_t> cases{
      {"{\n  \"listen\": \"a:1\",\n  \"bogus\": 1\n}", 3},
      {"{\n  \"gateway\": {\n    \"mode\": \"cloud\"\n  }\n}", 3},
      {"{\n \"training\": {\n\n   \"folds\": 1}\n}", 4},
      {"{\n \"session\": {\"min_rounds\": \"x\"}\n}", 2},
      {"{\n \"listen\": 5,\n", 3},
      {"{\"v\": 2}", 1},
  };
  for (const auto& [text, line] : cases) {
    CAPTURE(text);
    try {
      parse_service_config(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).find("line " + std::to_string(line)) != std::string::npos);
    }
  }
}

TEST_CASE("environment overrides") {
  std::map<std::string, std::string> env{{"MENTALGEN_LISTEN", "127.0.0.1:7000"},
                                         {"MENTALGEN_GATEWAY_MODE", "remote"},
                                         {"MENTALGEN_GEN_URL", "ws://h:1/x"},
                                         {"MENTALGEN_MIN_ROUNDS", "3"}};
  auto lookup = [&](const char* k) -> const char* {
    auto it = env.find(k);
    return it == env.end() ? nullptr : it->second.c_str();
  };
  auto c = parse_service_config(R"({"listen": "127.0.0.1:1"})");
  apply_env_overrides(c, lookup);
  CHECK(c.listen == "127.0.0.1:7000");
  CHECK(c.gateway_mode == GatewayMode::remote);
  CHECK(c.remote.url == "ws://h:1/x");
  CHECK(c.session.min_rounds == 3);
  env["MENTALGEN_GATEWAY_MODE"] = "other";
  CHECK_THROWS_AS(apply_env_overrides(c, lookup), FieldError);
}

TEST_CASE("session routes") {
  ServiceEnv env;
  auto created = env.call("POST", "/v1/sessions", {{"participant_id", "p1"}, {"session_id", "s1"}}, 201);
  CHECK(created["session_id"] == "s1");
  CHECK(created["status"] == "active");
  env.call("POST", "/v1/sessions", {{"participant_id", "p1"}, {"session_id", "s1"}}, 409);
  auto bad = env.call("POST", "/v1/sessions", {{"participant_id", "p1"}, {"colour", 1}}, 400);
  CHECK(bad["error"]["field"] == "colour");
  env.call("POST", "/v1/sessions", {{"session_id", "x"}}, 400);
  env.call("GET", "/v1/sessions/nope", nullptr, 404);
  env.call("GET", "/nowhere", nullptr, 404);
  env.call("DELETE", "/v1/sessions/s1", nullptr, 405);
  CHECK(env.svc.handle("POST", "/v1/sessions", "{not json").status == 400);

  const auto& rec = synth_set().segments[0].recording;
  auto round = env.call("POST", "/v1/sessions/s1/rounds", {{"window", window_json(rec)}, {"seed", 5}}, 201);
  CHECK(round["candidates"].size() == 5);
  CHECK(round["round"] == 1);
  env.call("POST", "/v1/sessions/s1/rounds", {{"window", window_json(rec)}}, 409);
  auto r = env.call("POST", "/v1/sessions/s1/ratings", {{"ratings", {1, 2, 9, 4, 5}}}, 400);
  CHECK(r["error"]["field"] == "ratings[2]");
  auto ok = env.call("POST", "/v1/sessions/s1/ratings", {{"ratings", {1, 6, 2, 4, 5}}}, 200);
  CHECK(ok["outcome"]["selected"] == 1);
  CHECK(ok["outcome"]["next_base_image"] == round["candidates"][1]["image"]);
  auto report = env.call("GET", "/v1/sessions/s1/report", nullptr, 200);
  CHECK(report["trace"].size() == 1);
  auto fin = env.call("POST", "/v1/sessions/s1/ratings", {{"final_mark", 0}}, 200);
  CHECK(fin["outcome"]["finalized"] == true);
  env.call("POST", "/v1/sessions/s1/ratings", {{"final_mark", 0}}, 409);
  env.call("POST", "/v1/sessions/s1/rounds", {{"window", window_json(rec)}}, 409);

  const std::string image = round["candidates"][0]["image"];
  auto img = env.svc.handle("GET", "/v1/artifacts/" + image, "");
  CHECK(img.status == 200);
  CHECK(img.body.rfind("P6", 0) == 0);
  CHECK(env.svc.handle("GET", "/v1/artifacts/images/none.ppm", "").status == 404);
  auto listing = env.call("GET", "/v1/sessions", nullptr, 200);
  CHECK(listing["sessions"] == json::array({"s1"}));
}

TEST_CASE("rounds need a model") {
  fixture::TempDir dir;
  ServiceConfig cfg;
  cfg.artifacts_dir = dir / "a";
  Service svc(cfg);
  CHECK(svc.handle("POST", "/v1/sessions", R"({"participant_id": "p", "session_id": "s"})").status == 201);
  const auto body = json{{"window", window_json(synth_set().segments[0].recording)}}.dump();
  CHECK(svc.handle("POST", "/v1/sessions/s/rounds", body).status == 409);
  CHECK(svc.handle("GET", "/v1/models/current", "").status == 404);
}

TEST_CASE("stream intake") {
  ServiceEnv env;
  env.call("POST", "/v1/sessions", {{"participant_id", "p"}, {"session_id", "s"}}, 201);
  const auto& rec = synth_set().segments[3].recording;

  auto intake = env.svc.open_stream("s");
  auto first = intake->on_message(chunk(rec, 0, 256, 14).dump());
  REQUIRE(first.replies.size() == 1);
  CHECK(json::parse(first.replies[0])["type"] == "accepted");
  CHECK(json::parse(first.replies[0])["needed"] == 512);
  auto second = intake->on_message(chunk(rec, 256, 256, 14).dump());
  REQUIRE(second.replies.size() == 1);
  const auto ready = json::parse(second.replies[0]);
  CHECK(ready["type"] == "candidates_ready");
  CHECK(ready["round"]["candidates"].size() == 5);
  CHECK_FALSE(second.close);

  auto again = env.svc.open_stream("s");
  again->on_message(chunk(rec, 0, 256, 14).dump());
  auto busy = again->on_message(chunk(rec, 256, 256, 14).dump());
  REQUIRE(busy.close);
  CHECK(busy.close->first == kCloseState);

  auto mismatch = env.svc.open_stream("s")->on_message(chunk(rec, 0, 64, 8).dump());
  REQUIRE(mismatch.close);
  CHECK(mismatch.close->first == kCloseChannelMismatch);

  for (const std::string& text : {std::string("nope"), std::string(R"({"type": "chunk"})"),
                                  std::string(R"({"type": "dance"})"),
                                  std::string(R"({"type": "chunk", "sample_rate": 256, "data": [[1, 2], [3]]})")}) {
    auto m = env.svc.open_stream("s")->on_message(text);
    REQUIRE(m.close);
    CHECK(m.close->first == kCloseMalformed);
  }
  CHECK_THROWS_AS(env.svc.open_stream("missing"), NotFoundError);
}

TEST_CASE("training job over the API") {
  ServiceEnv env;
  ingest::save_segment_set(synth_set(), env.dir / "data" / "p01");
  auto started = env.call("POST", "/v1/models/train", {{"dataset", (env.dir / "data").string()}, {"folds", 3}}, 202);
  const std::string job = started["job_id"];
  json status;
  for (int i = 0; i < 600; ++i) {
    status = env.call("GET", "/v1/models/train/" + job, nullptr, 200);
    if (status["status"] == "succeeded" || status["status"] == "failed") break;
    std::this_thread::sleep_for(50ms);
  }
  INFO(status.dump());
  REQUIRE(status["status"] == "succeeded");
  CHECK(status["cv"]["overall_accuracy"].get<double>() > 0.9);
  auto current = env.call("GET", "/v1/models/current", nullptr, 200);
  CHECK(current["dims"] == 70);
  CHECK(intent::load_pipeline(status["model_path"].get<std::string>()).model.feature_fingerprint ==
        current["feature_fingerprint"]);
  env.call("POST", "/v1/models/train", {{"dataset", "/no/such/dir"}}, 400);
  env.call("GET", "/v1/models/train/job-99", nullptr, 404);
}

TEST_CASE("http transport") {
  ServiceEnv env;
  HttpServer server(env.svc, env.cfg.listen);
  httplib::Client cli("127.0.0.1", server.port());
  cli.set_read_timeout(10, 0);

  auto health = cli.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(json::parse(health->body)["model_loaded"] == true);

  for (const char* id : {"a", "b"}) {
    auto r = cli.Post("/v1/sessions", json{{"participant_id", id}, {"session_id", id}}.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == 201);
  }
  WsClient events(server.address(), server.port(), "/v1/sessions/b/events");
  WsClient stream_a(server.address(), server.port(), "/v1/sessions/a/stream");
  const auto& rec = synth_set().segments[14].recording;
  stream_a.send(chunk(rec, 0, 300, 14).dump());
  auto acc = stream_a.receive(5s);
  REQUIRE(acc);
  CHECK(json::parse(*acc)["type"] == "accepted");
  stream_a.send(chunk(rec, 300, 212, 14).dump());
  auto ready = stream_a.receive(10s);
  REQUIRE(ready);
  CHECK(json::parse(*ready)["type"] == "candidates_ready");
  CHECK(json::parse(*ready)["session_id"] == "a");
  CHECK_FALSE(events.receive(300ms));

  auto round_b = cli.Post("/v1/sessions/b/rounds", json{{"window", window_json(rec)}}.dump(), "application/json");
  REQUIRE(round_b);
  CHECK(round_b->status == 201);
  std::vector<std::string> types;
  while (auto ev = events.receive(1s)) types.push_back(json::parse(*ev)["type"]);
  CHECK(types == std::vector<std::string>{"round_started", "candidates_ready"});

  auto sa = json::parse(cli.Get("/v1/sessions/a")->body);
  auto sb = json::parse(cli.Get("/v1/sessions/b")->body);
  CHECK(sa["history"].size() == 1);
  CHECK(sb["history"].size() == 1);
  CHECK(sa["participant_id"] == "a");

  WsClient bad(server.address(), server.port(), "/v1/sessions/a/stream");
  bad.send("garbage");
  CHECK_FALSE(bad.receive(5s));
  REQUIRE(bad.closed());
  CHECK(bad.closed()->code == kCloseMalformed);

  const std::string image = sa["history"][0]["candidates"][0]["image"];
  auto img = cli.Get(("/v1/artifacts/" + image).c_str());
  REQUIRE(img);
  CHECK(img->status == 200);
  CHECK(img->get_header_value("Content-Type") == "image/x-portable-pixmap");
  server.stop();
}

TEST_CASE("health stays responsive during training") {
  ServiceEnv env;
  ingest::save_segment_set(ingest::synth_generate(ingest::command_synth_spec(60, 1.0, 8)), env.dir / "data" / "p");
  HttpServer server(env.svc, env.cfg.listen);
  httplib::Client cli("127.0.0.1", server.port());
  auto started = cli.Post("/v1/models/train", json{{"dataset", (env.dir / "data").string()}}.dump(), "application/json");
  REQUIRE(started);
  REQUIRE(started->status == 202);
  const std::string job = json::parse(started->body)["job_id"];
  double worst_ms = 0;
  int probes = 0;
  std::string state = "running";
  while (state == "running" || state == "queued") {
    const auto t0 = std::chrono::steady_clock::now();
    auto h = cli.Get("/healthz");
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    REQUIRE(h);
    CHECK(h->status == 200);
    worst_ms = std::max(worst_ms, ms);
    ++probes;
    state = json::parse(cli.Get(("/v1/models/train/" + job).c_str())->body)["status"];
    std::this_thread::sleep_for(20ms);
  }
  MESSAGE("healthz probes: " << probes << ", worst " << worst_ms << " ms");
  CHECK(state == "succeeded");
  CHECK(probes >= 3);
  CHECK(worst_ms < 100.0);
  server.stop();
}
