#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "mentalgen/core/error.hpp"
#include "mentalgen/ingest/synth.hpp"
#include "mentalgen/intent/model.hpp"
#include "mentalgen/intent/persistence.hpp"
#include "mentalgen/intent/pipeline.hpp"
#include "mentalgen/intent/svm.hpp"
#include "oracles.hpp"

using namespace mentalgen;
using namespace mentalgen::intent;

namespace {

struct Problem {
  Matrix x;
  std::vector<int> y;
};

Problem random_problem(std::mt19937_64& rng) {
  const std::size_t n = 10 + rng() % 50, d = 1 + rng() % 5;
  std::normal_distribution<double> g;
  Problem p{Matrix(n, d), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    p.y[i] = i % 2 ? 1 : -1;
    for (std::size_t j = 0; j < d; ++j) p.x(i, j) = g(rng) + (j == 0 ? 0.8 * p.y[i] : 0.0);
  }
  return p;
}

TrainingSet training_from(const ingest::LabeledSegmentSet& set) {
  return training_set(set, spectral::FeatureConfig{});
}

}  // namespace

TEST_CASE("binary svm separates two clouds") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 0.3);
  Matrix x(30, 2);
  std::vector<int> y(30);
  for (std::size_t i = 0; i < 30; ++i) {
    y[i] = i < 15 ? 1 : -1;
    x(i, 0) = 2.0 * y[i] + g(rng);
    x(i, 1) = g(rng);
  }
  auto m = train_binary_svm(x, y, 1.0, 0.5);
  for (std::size_t i = 0; i < 30; ++i) CHECK((m.decision(x.row(i)) > 0) == (y[i] > 0));
}

TEST_CASE("XOR is separable with an RBF kernel") {
  auto x = Matrix::from_rows({{0, 0}, {1, 1}, {0, 1}, {1, 0}});
  const std::vector<int> y{1, 1, -1, -1};
  auto m = train_binary_svm(x, y, 10.0, 1.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(y[i] * m.decision(x.row(i)) > 0);
  for (double c : m.dual_coef) CHECK(std::fabs(c) <= 10.0 + 1e-12);
}

TEST_CASE("binary svm preconditions") {
  auto x = Matrix::from_rows({{0.0}, {1.0}});
  CHECK_THROWS_AS(train_binary_svm(x, std::vector<int>{1, 1}, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(train_binary_svm(x, std::vector<int>{1, -1}, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(train_binary_svm(x, std::vector<int>{1, -1}, 1, -1), InvalidArgument);
  CHECK_THROWS_AS(train_binary_svm(x, std::vector<int>{1, 2}, 1, 1), InvalidArgument);
}

TEST_CASE("SMO solutions satisfy KKT on random problems") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 100; ++t) {
    auto p = random_problem(rng);
    const double C = std::pow(10.0, static_cast<double>(rng() % 4) - 1.0);
    const double gamma = 0.1 + static_cast<double>(rng() % 20) / 10.0;
    auto m = train_binary_svm(p.x, p.y, C, gamma);
    const double v = oracle::kkt_violation(p.x, p.y, m.support_vectors, m.dual_coef, m.support_indices, m.bias,
                                           m.gamma, m.C);
    REQUIRE(v <= 1e-3);
    CHECK(max_kkt_violation(m, p.x, p.y) == doctest::Approx(v).epsilon(1e-6));
  }
}

TEST_CASE("prediction from decision values") {
  auto p = prediction_from_decisions({2.0, 0.5, -1.0});
  CHECK(p.command == Command::IncreaseTransparency);
  const double e = std::exp(2.0) / (std::exp(2.0) + std::exp(0.5) + std::exp(-1.0));
  CHECK(p.confidence == doctest::Approx(e).epsilon(1e-12));
  CHECK(p.confidence == doctest::Approx(0.787).epsilon(1e-3));

  auto tie = prediction_from_decisions({0.3, 0.3, 0.3});
  CHECK(tie.command == Command::IncreaseTransparency);
  CHECK(tie.confidence == doctest::Approx(1.0 / 3));

  CHECK(prediction_from_decisions({0.0, 1.0, 1.0}).command == Command::MoreLuxuriousDecoration);
}

TEST_CASE("softmax is shift invariant and matches the naive form") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 200; ++t) {
    std::array<double, 3> v{u(rng), u(rng), u(rng)};
    const double shift = u(rng) * 100;
    std::array<double, 3> s{v[0] + shift, v[1] + shift, v[2] + shift};
    const auto a = softmax(v), b = softmax(s);
    const auto o = oracle::softmax_naive(v);
    for (int i = 0; i < 3; ++i) {
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
      CHECK(a[i] == doctest::Approx(o[i]).epsilon(1e-12));
    }
    CHECK(prediction_from_decisions(v).command == prediction_from_decisions(s).command);
  }
}

TEST_CASE("stratified folds keep class proportions") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t folds = 2 + rng() % 9;
    std::vector<std::size_t> classes;
    std::map<std::size_t, std::size_t> total;
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t n = folds + rng() % 40;
      for (std::size_t i = 0; i < n; ++i) classes.push_back(c);
      total[c] = n;
    }
    std::shuffle(classes.begin(), classes.end(), rng);
    const auto f = stratified_folds(classes, folds, rng());
    for (std::size_t k = 0; k < folds; ++k)
      for (auto [c, n] : total) {
        std::size_t in = 0;
        for (std::size_t i = 0; i < classes.size(); ++i) in += f[i] == k && classes[i] == c;
        const double expected = static_cast<double>(n) / static_cast<double>(folds);
        CHECK(std::fabs(static_cast<double>(in) - expected) < 1.0);
      }
  }
}

TEST_CASE("high SNR synthetic set trains above 0.9") {
  auto set = ingest::synth_generate(ingest::command_synth_spec(20, 0.5, 3));
  auto ts = training_from(set);
  std::vector<int> y;
  for (auto c : ts.labels) y.push_back(static_cast<int>(index_of(c)));
  CHECK(oracle::nearest_centroid_cv(ts.features, y, 10) >= 0.90);
  TrainOptions opts;
  opts.seed = 1;
  auto model = train_intent_model(ts, opts);
  CHECK(model.cv.overall_accuracy >= 0.90);
  CHECK(model.cv.folds == 10);
  CHECK(model.cv.fold_accuracy.size() == 10);
  for (double a : model.cv.per_command) CHECK(a >= 0.0);
  std::size_t total = 0;
  for (auto& r : model.cv.confusion)
    for (auto c : r) total += c;
  CHECK(total == ts.labels.size());

  auto again = train_intent_model(ts, opts);
  CHECK(again.cv.overall_accuracy == model.cv.overall_accuracy);
  for (std::size_t i = 0; i < ts.features.rows(); i += 7)
    CHECK(predict(again, ts.features.row(i)).decision_values == predict(model, ts.features.row(i)).decision_values);
}

TEST_CASE("shuffled labels score near chance") {
  auto set = ingest::synth_generate(ingest::command_synth_spec(20, 0.5, 4));
  auto ts = training_from(set);
  std::mt19937_64 rng(10);
  std::shuffle(ts.labels.begin(), ts.labels.end(), rng);
  TrainOptions opts;
  auto model = train_intent_model(ts, opts);
  CHECK(model.cv.overall_accuracy >= 0.20);
  CHECK(model.cv.overall_accuracy <= 0.47);
}

TEST_CASE("training preconditions") {
  TrainingSet ts;
  ts.features = Matrix(12, 2, 1.0);
  for (std::size_t i = 0; i < 12; ++i) ts.labels.push_back(kAllCommands[i / 4]);
  for (std::size_t i = 0; i < 12; ++i) ts.features(i, 0) = static_cast<double>(i);
  TrainOptions opts;
  CHECK_THROWS_AS(train_intent_model(ts, opts), InvalidArgument);
  opts.folds = 1;
  CHECK_THROWS_AS(train_intent_model(ts, opts), InvalidArgument);
  opts.folds = 3;
  CHECK_NOTHROW(train_intent_model(ts, opts));

  TrainingSet two = ts;
  for (auto& l : two.labels)
    if (l == Command::MoreLuxuriousDecoration) l = Command::MoreClassicalStyle;
  CHECK_THROWS_AS(train_intent_model(two, opts), InvalidArgument);
  ts.features(0, 1) = NAN;
  CHECK_THROWS_AS(train_intent_model(ts, opts), InvalidArgument);
}

TEST_CASE("predict rejects bad input") {
  auto set = ingest::synth_generate(ingest::command_synth_spec(10, 0.5, 5));
  TrainOptions opts;
  opts.folds = 5;
  auto model = train_intent_model(training_from(set), opts);
  std::vector<double> wrong(model.dims() + 1, 0.0);
  CHECK_THROWS_AS(predict(model, wrong), InvalidArgument);
  std::vector<double> bad(model.dims(), 0.0);
  bad[0] = INFINITY;
  CHECK_THROWS_AS(predict(model, bad), NonFiniteError);
  std::vector<double> ok(model.dims(), 0.0);
  auto p = predict(model, ok);
  auto s = softmax(p.decision_values);
  CHECK(p.confidence == doctest::Approx(*std::max_element(s.begin(), s.end())));
}

TEST_CASE("training reports progress and honours cancellation") {
  auto ts = training_from(ingest::synth_generate(ingest::command_synth_spec(10, 0.5, 6)));
  TrainOptions opts;
  opts.folds = 5;
  std::vector<std::size_t> seen;
  opts.progress = [&](const TrainProgress& p) { seen.push_back(p.fold); };
  train_intent_model(ts, opts);
  CHECK(seen.size() == 6);
  CHECK(seen.back() == 6);

  std::stop_source src;
  src.request_stop();
  opts.stop = src.get_token();
  CHECK_THROWS_AS(train_intent_model(ts, opts), CancelledError);
}

TEST_CASE("model save and load reproduce predictions") {
  fixture::TempDir dir;
  auto ts = training_from(ingest::synth_generate(ingest::command_synth_spec(10, 1.0, 7)));
  TrainOptions opts;
  opts.folds = 5;
  auto model = train_intent_model(ts, opts);
  save_model(model, dir / "m.json", {{"note", "x"}});
  auto back = load_model(dir / "m.json");
  CHECK(back.cv.overall_accuracy == model.cv.overall_accuracy);
  CHECK(back.norm == model.norm);
  for (std::size_t i = 0; i < ts.features.rows(); ++i)
    REQUIRE(predict(back, ts.features.row(i)).decision_values == predict(model, ts.features.row(i)).decision_values);
  CHECK_THROWS_AS(load_model(dir / "missing.json"), NotFoundError);
  std::ofstream(dir / "bad.json") << "{\"format\": \"other\"}";
  CHECK_THROWS_AS(load_model(dir / "bad.json"), ParseError);
}

TEST_CASE("pipeline round trip and window prediction") {
  fixture::TempDir dir;
  auto set = ingest::synth_generate(ingest::command_synth_spec(15, 0.5, 8));
  TrainOptions opts;
  opts.folds = 5;
  auto pipe = train_pipeline(set, {}, opts);
  CHECK(pipe.model.feature_fingerprint == pipe.features.fingerprint());
  save_pipeline(pipe, dir / "p.json");
  auto back = load_pipeline(dir / "p.json");
  CHECK(back.features.fingerprint() == pipe.features.fingerprint());

  auto held = ingest::synth_generate(ingest::command_synth_spec(2, 0.5, 999));
  for (const auto& seg : held.segments) {
    const auto p = predict_window(back, seg.recording);
    CHECK(p.command == std::get<Command>(seg.label));
    CHECK(p.decision_values == predict_window(pipe, seg.recording).decision_values);
  }

  auto j = to_json(pipe.model);
  j["features"] = to_json(spectral::FeatureConfig{});
  j["features"]["kind"] = "log_psd_bins";
  std::ofstream(dir / "mismatch.json") << j.dump();
  CHECK_THROWS_AS(load_pipeline(dir / "mismatch.json"), ParseError);
}
