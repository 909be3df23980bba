#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mentalgen/cluster/kmeans.hpp"
#include "mentalgen/cluster/metrics.hpp"
#include "mentalgen/cluster/report.hpp"
#include "mentalgen/core/error.hpp"
#include "mentalgen/ingest/synth.hpp"
#include "oracles.hpp"

using namespace mentalgen;
using namespace mentalgen::cluster;

namespace {

Matrix two_blobs(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  Matrix m(40, 2);
  for (std::size_t i = 0; i < 40; ++i) {
    const double c = i < 20 ? 0.0 : 100.0;
    m(i, 0) = c + g(rng);
    m(i, 1) = c + g(rng);
  }
  return m;
}

WeightedLabelSet make_labels(std::span<const int> dirs, std::span<const double> w) {
  WeightedLabelSet out;
  for (std::size_t i = 0; i < dirs.size(); ++i) out.push_back({dirs[i] ? Direction::negative : Direction::positive, w[i]});
  return out;
}

}  // namespace

TEST_CASE("kmeans separates two far blobs") {
  auto m = two_blobs(1);
  auto c = kmeans(m, 2, 42);
  for (std::size_t i = 1; i < 20; ++i) CHECK(c.assignments[i] == c.assignments[0]);
  for (std::size_t i = 21; i < 40; ++i) CHECK(c.assignments[i] == c.assignments[20]);
  CHECK(c.assignments[0] != c.assignments[20]);
  CHECK(c.inertia == doctest::Approx(inertia(m, c.assignments, c.centroids)));
  auto again = kmeans(m, 2, 42);
  CHECK(again.assignments == c.assignments);
  CHECK(again.centroids == c.centroids);
}

TEST_CASE("kmeans edge cases") {
  Matrix same(6, 3, 2.5);
  CHECK(kmeans(same, 1, 0).inertia == 0.0);
  CHECK_THROWS_AS(kmeans(Matrix(3, 2), 5, 0), InvalidArgument);
  CHECK_THROWS_AS(kmeans(Matrix(3, 2), 0, 0), InvalidArgument);
}

TEST_CASE("silhouette and Calinski-Harabasz against direct evaluation") {
  auto m = two_blobs(2);
  auto c = kmeans(m, 2, 1);
  const double s = silhouette(m, c);
  CHECK(s > 0.9);
  CHECK(s == doctest::Approx(oracle::silhouette_direct(m, c.assignments)).epsilon(1e-12));
  CHECK(calinski_harabasz(m, c) == doctest::Approx(oracle::calinski_harabasz_direct(m, c.assignments)).epsilon(1e-10));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Matrix blob(400, 2);
  for (double& v : blob.flat()) v = g(rng);
  std::vector<std::size_t> random_labels(400);
  for (auto& a : random_labels) a = rng() % 2;
  const double sr = silhouette(blob, random_labels, 2);
  CHECK(std::fabs(sr) <= 0.1);
  CHECK(sr == doctest::Approx(oracle::silhouette_direct(blob, random_labels)).epsilon(1e-12));

  std::vector<std::size_t> one(40, 0);
  CHECK_THROWS_AS(silhouette(m, one, 1), InvalidArgument);
  CHECK_THROWS_AS(calinski_harabasz(m, one, 1), InvalidArgument);
  CHECK_THROWS_AS(silhouette(m, one, 2), InvalidArgument);
}

TEST_CASE("weighted purity hand case") {
  const std::vector<std::size_t> a{0, 0, 0, 1, 1, 1};
  const std::vector<int> d{0, 0, 1, 1, 1, 0};
  const std::vector<double> w{0.4, 0.6, 0.2, 1.0, 0.8, 0.2};
  const auto labels = make_labels(d, w);
  CHECK(weighted_purity(a, labels) == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(oracle::purity_brute_force(a, d, w) == doctest::Approx(0.875).epsilon(1e-12));

  const auto v = v_measure(a, labels);
  const auto o = oracle::v_measure_mi(a, d, w);
  CHECK(std::fabs(v.v - o.v) < 1e-9);
  CHECK(std::fabs(v.homogeneity - o.homogeneity) < 1e-9);
  CHECK(std::fabs(v.completeness - o.completeness) < 1e-9);

  auto padded_a = a;
  auto padded = labels;
  padded_a.push_back(1);
  padded.push_back({Direction::positive, 0.0});
  CHECK(weighted_purity(padded_a, padded) == doctest::Approx(0.875).epsilon(1e-12));
}

TEST_CASE("weighted purity and V-measure edge cases") {
  const std::vector<std::size_t> a{0, 0, 1, 1};
  CHECK(weighted_purity(a, make_labels(std::vector<int>{0, 0, 0, 0}, std::vector<double>{0.2, 1, 0.4, 0.6})) == 1.0);
  CHECK_THROWS_AS(weighted_purity(a, make_labels(std::vector<int>{0, 1, 0, 1}, std::vector<double>{0, 0, 0, 0})),
                  InvalidArgument);
  CHECK_THROWS_AS(weighted_purity(a, make_labels(std::vector<int>{0, 1}, std::vector<double>{1, 1})), InvalidArgument);
  CHECK_THROWS_AS(v_measure(a, make_labels(std::vector<int>{0, 1}, std::vector<double>{1, 1})), InvalidArgument);

  auto exact = v_measure(a, make_labels(std::vector<int>{0, 0, 1, 1}, std::vector<double>{1, 1, 1, 1}));
  CHECK(exact.v == doctest::Approx(1.0));
  const std::vector<std::size_t> single{0, 0, 0, 0};
  auto split = v_measure(single, make_labels(std::vector<int>{0, 1, 0, 1}, std::vector<double>{1, 1, 1, 1}));
  CHECK(split.homogeneity == doctest::Approx(0.0));
  CHECK(split.v == doctest::Approx(0.0));
}

TEST_CASE("weighted label mapping") {
  CHECK(weighted_label(3).direction == Direction::positive);
  CHECK(weighted_label(3).weight == doctest::Approx(0.6));
  CHECK(weighted_label(-5).direction == Direction::negative);
  CHECK(weighted_label(-5).weight == doctest::Approx(1.0));
  CHECK(weighted_label(0).weight == 0.0);
}

TEST_CASE("metrics match oracles on random small instances") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 30;
    const std::size_t k = 1 + rng() % 6;
    std::vector<std::size_t> a(n);
    std::vector<int> d(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng() % k;
      d[i] = static_cast<int>(rng() % 2);
      w[i] = static_cast<double>(rng() % 6) / 5.0;
    }
    w[rng() % n] = 0.2 + static_cast<double>(rng() % 5) / 5.0;
    const auto labels = make_labels(d, w);
    REQUIRE(std::fabs(weighted_purity(a, labels) - oracle::purity_brute_force(a, d, w)) <= 1e-9);
    const auto v = v_measure(a, labels);
    const auto o = oracle::v_measure_mi(a, d, w);
    REQUIRE(std::fabs(v.v - o.v) <= 1e-9);
    REQUIRE(std::fabs(v.homogeneity - o.homogeneity) <= 1e-9);
    REQUIRE(std::fabs(v.completeness - o.completeness) <= 1e-9);
  }
}

TEST_CASE("metrics match oracles exhaustively at N = 6") {
  const std::size_t n = 6;
  const std::vector<double> w{0.2, 1.0, 0.4, 0.0, 0.8, 0.6};
  std::size_t cases = 0;
  for (std::size_t code = 0; code < 729; ++code) {
    std::vector<std::size_t> a(n);
    for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) a[i] = c % 3;
    for (std::size_t mask = 0; mask < 64; ++mask) {
      std::vector<int> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<int>((mask >> i) & 1U);
      const auto labels = make_labels(d, w);
      REQUIRE(std::fabs(weighted_purity(a, labels) - oracle::purity_brute_force(a, d, w)) <= 1e-12);
      REQUIRE(std::fabs(v_measure(a, labels).v - oracle::v_measure_mi(a, d, w).v) <= 1e-9);
      ++cases;
    }
  }
  CHECK(cases == 729 * 64);
}

TEST_CASE("metrics are permutation invariant and reduce to classical purity") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 5 + rng() % 20;
    std::vector<std::size_t> a(n);
    std::vector<int> d(n);
    std::vector<double> w(n, 0.6);
    for (std::size_t i = 0; i < n; ++i) a[i] = rng() % 4, d[i] = static_cast<int>(rng() % 2);
    const auto labels = make_labels(d, w);
    const double p = weighted_purity(a, labels);
    const auto v = v_measure(a, labels);
    CHECK(p == doctest::Approx(oracle::classical_purity(a, d)).epsilon(1e-12));

    std::vector<std::size_t> relabel{3, 0, 2, 1};
    auto b = a;
    for (auto& x : b) x = relabel[x];
    CHECK(weighted_purity(b, labels) == doctest::Approx(p).epsilon(1e-12));
    CHECK(v_measure(b, labels).v == doctest::Approx(v.v).epsilon(1e-12));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> pa;
    WeightedLabelSet pl;
    for (auto i : order) pa.push_back(a[i]), pl.push_back(labels[i]);
    CHECK(weighted_purity(pa, pl) == doctest::Approx(p).epsilon(1e-12));
    CHECK(v_measure(pa, pl).v == doctest::Approx(v.v).epsilon(1e-12));
  }
}

TEST_CASE("select_k finds the planted cluster count") {
  const auto five = ingest::five_blob_fixture();
  const std::vector<std::size_t> ks{2, 3, 4, 5, 6, 7, 8};
  auto sel = select_k(five.points, ks, 7);
  CHECK(sel.best_k == 5);
  CHECK(sel.table.size() == ks.size());
  CHECK(select_k(five.points, ks, 7).best_k == sel.best_k);

  const std::vector<std::size_t> small{2, 3, 4};
  CHECK(select_k(two_blobs(4), small, 1).best_k == 2);
  CHECK_THROWS_AS(select_k(two_blobs(4), std::vector<std::size_t>{}, 1), InvalidArgument);
  CHECK_THROWS_AS(select_k(two_blobs(4), std::vector<std::size_t>{1}, 1), InvalidArgument);
}

TEST_CASE("rank sum ties resolve to the smaller k") {
  const std::vector<std::size_t> ks{2, 3};
  const std::vector<double> s{0.5, 0.6};
  const std::vector<double> ch{20, 10};
  CHECK(best_by_rank_sum(ks, s, ch) == 0);
  const std::vector<double> s2{0.4, 0.6};
  const std::vector<double> ch2{10, 20};
  CHECK(best_by_rank_sum(ks, s2, ch2) == 1);
}

TEST_CASE("cluster study over synthetic participants") {
  std::vector<ParticipantData> parts;
  for (int p = 0; p < 3; ++p) {
    auto blobs = ingest::gaussian_blobs(3, 10, 4, 8, 1, 100 + p);
    ParticipantData d;
    d.participant_id = "p" + std::to_string(p);
    d.features = blobs.points;
    for (auto t : blobs.truth) {
      FeatureLabels l;
      l.transparency = t == 0 ? 4 : -3;
      l.style = t == 1 ? 5 : -2;
      l.decoration_density = 0;
      l.color_scheme = t == 2 ? -1 : 1;
      d.labels.push_back(l);
    }
    parts.push_back(std::move(d));
  }
  StudyConfig cfg;
  cfg.k_max = 6;
  auto rep = cluster_study(parts, cfg);
  CHECK(rep.chosen_k == 3);
  CHECK(rep.participants.size() == 3);
  REQUIRE(rep.mean_purity[0].has_value());
  CHECK(*rep.mean_purity[0] == doctest::Approx(1.0));
  CHECK_FALSE(rep.mean_purity[2].has_value());
  auto j = to_json(rep);
  CHECK(j["chosen_k"] == 3);
}
