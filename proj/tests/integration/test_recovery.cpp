#include <doctest.h>

#include <httplib.h>
#include <signal.h>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "mentalgen/ingest/synth.hpp"
#include "mentalgen/intent/pipeline.hpp"
#include "process.hpp"

using nlohmann::json;
using namespace mentalgen;
using namespace std::chrono_literals;

namespace {

struct Server {
  proc::Child child;
  json banner;
  std::unique_ptr<httplib::Client> http;

  Server(const std::string& artifacts, const std::string& model)
      : child({MENTALGEN_BIN, "serve", "--listen", "127.0.0.1:0", "--artifacts", artifacts, "--model", model}) {
    auto line = child.read_line(30s);
    REQUIRE(line);
    banner = json::parse(*line);
    http = std::make_unique<httplib::Client>("127.0.0.1", banner["port"].get<int>());
    http->set_read_timeout(30, 0);
  }

  json call(const std::string& method, const std::string& path, const json& body, int expect) {
    httplib::Result r = method == "GET" ? http->Get(path.c_str())
                                        : http->Post(path.c_str(), body.dump(), "application/json");
    REQUIRE(r);
    INFO(r->body);
    CHECK(r->status == expect);
    return json::parse(r->body);
  }
};

json window_json(const EegRecording& rec) {
  json rows = json::array();
  for (std::size_t ch = 0; ch < rec.channels(); ++ch) {
    auto r = rec.data.row(ch);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"sample_rate", rec.sample_rate}, {"data", rows}};
}

}  // namespace

TEST_CASE("service survives a kill and resumes the session") {
  fixture::TempDir dir;
  const auto set = ingest::synth_generate(ingest::command_synth_spec(10, 0.5, 33));
  intent::TrainOptions opts;
  opts.folds = 3;
  const auto model = (dir / "model.json").string();
  intent::save_pipeline(intent::train_pipeline(set, {}, opts), model);
  const auto art = (dir / "art").string();

  json before;
  json pending_before;
  {
    Server s(art, model);
    CHECK(s.banner["recovered_sessions"] == 0);
    s.call("POST", "/v1/sessions", {{"participant_id", "p"}, {"session_id", "crash"}}, 201);
    s.call("POST", "/v1/sessions", {{"participant_id", "q"}, {"session_id", "pending"}}, 201);
    for (int r = 0; r < 3; ++r) {
      s.call("POST", "/v1/sessions/crash/rounds", {{"window", window_json(set.segments[r * 10].recording)}}, 201);
      s.call("POST", "/v1/sessions/crash/ratings", {{"ratings", {1 + r, 3, 7, 2, 4}}}, 200);
    }
    s.call("POST", "/v1/sessions/pending/rounds", {{"window", window_json(set.segments[5].recording)}}, 201);
    before = s.call("GET", "/v1/sessions/crash", nullptr, 200);
    pending_before = s.call("GET", "/v1/sessions/pending", nullptr, 200);
    s.child.signal(SIGKILL);
    CHECK(s.child.wait() == 128 + SIGKILL);
  }
  CHECK(before["history"].size() == 3);

  Server s(art, model);
  CHECK(s.banner["recovered_sessions"] == 2);
  CHECK(s.call("GET", "/v1/sessions/crash", nullptr, 200) == before);
  CHECK(s.call("GET", "/v1/sessions/pending", nullptr, 200) == pending_before);

  auto round = s.call("POST", "/v1/sessions/crash/rounds", {{"window", window_json(set.segments[4].recording)}}, 201);
  CHECK(round["round"] == 4);
  CHECK(round["base_image"] == before["base_image"]);
  auto rated = s.call("POST", "/v1/sessions/crash/ratings", {{"ratings", {5, 1, 1, 1, 1}}}, 200);
  CHECK(rated["outcome"]["selected"] == 0);
  s.call("POST", "/v1/sessions/pending/ratings", {{"ratings", {1, 1, 6, 1, 1}}}, 200);
  CHECK(s.call("GET", "/v1/sessions/crash/report", nullptr, 200)["trace"].size() == 4);

  s.child.signal(SIGTERM);
  CHECK(s.child.wait() == 0);
}
