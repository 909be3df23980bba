#include <doctest.h>

#include <fstream>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "mentalgen/ingest/dataset.hpp"
#include "mentalgen/session/log.hpp"
#include "mentalgen/session/report.hpp"
#include "process.hpp"

using nlohmann::json;
using namespace mentalgen;

namespace {

proc::Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), MENTALGEN_BIN);
  return proc::run(args);
}

json ok_json(const proc::Result& r) {
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("cluster-eval recovers five blobs") {
  fixture::TempDir dir;
  const auto pts = (dir / "blobs.json").string();
  ok_json(cli({"--seed", "11", "synth", "blobs", "--out", pts, "--k", "5"}));
  auto a = ok_json(cli({"cluster-eval", "--points", pts}));
  auto b = ok_json(cli({"cluster-eval", "--points", pts}));
  CHECK(a["best_k"] == 5);
  CHECK(a["table"] == b["table"]);
}

TEST_CASE("train then predict") {
  fixture::TempDir dir;
  const auto data = (dir / "data").string();
  const auto model = (dir / "model.json").string();
  ok_json(cli({"--seed", "4", "synth", "commands", "--out", data, "--n-per-class", "15", "--noise", "0.5"}));
  auto trained = ok_json(cli({"train", "--dataset", data, "--out", model, "--folds", "5"}));
  CHECK(trained["cv"]["overall_accuracy"].get<double>() >= 0.9);
  CHECK(trained["provenance"]["command"] == "train");

  const auto participant = ingest::list_participants(data).front();
  const auto set = ingest::load_segment_set(participant);
  const auto labels = json::parse(std::ifstream(participant / "labels.json"));
  int correct = 0;
  for (std::size_t i : {0u, 20u, 40u}) {
    const std::string file = labels["segments"][i]["file"];
    auto p = ok_json(cli({"predict", "--model", model, "--in", (participant / file).string()}));
    correct += p["prediction"]["command"] == labels["segments"][i]["label"];
    CHECK(p["prediction"]["confidence"].get<double>() > 1.0 / 3.0);
  }
  CHECK(correct == 3);

  auto missing = cli({"--json", "predict", "--model", (dir / "none.json").string(), "--in", "x.csv"});
  CHECK(missing.exit_code == 1);
  CHECK(json::parse(missing.err)["error"]["code"] == "not_found");
  CHECK(cli({"train", "--dataset", data}).exit_code == 2);
}

TEST_CASE("simulate writes a replayable log") {
  fixture::TempDir dir;
  const auto art = (dir / "art").string();
  auto out = ok_json(cli({"--seed", "9", "simulate", "--artifacts", art, "--rounds", "8"}));
  CHECK(out["report"]["round_count"] == 8);
  CHECK(out["report"]["trace"].size() == 8);
  CHECK(out["report"]["status"] == "finalized");

  std::ifstream in(out["log"].get<std::string>());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK_NOTHROW(session::event_from_json(json::parse(line)));
  }
  CHECK(lines > 8);
  const auto replayed = session::replay(session::read_log(out["log"].get<std::string>()).events);
  CHECK(session::to_json(session::session_report(replayed)).dump() == out["report"].dump());

  auto again = ok_json(cli({"--seed", "9", "simulate", "--artifacts", (dir / "art2").string(), "--rounds", "8"}));
  CHECK(again["report"] == out["report"]);
  CHECK(cli({"simulate", "--artifacts", art, "--rounds", "3"}).exit_code != 0);
}
