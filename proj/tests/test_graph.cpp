#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tritail/dist.hpp"
#include "tritail/graph.hpp"
#include "tritail/kernel.hpp"
#include "tritail/parallel.hpp"
#include "tritail/rng.hpp"
#include "tritail/stats.hpp"

using namespace tritail;

namespace {

// cubic brute-force count, the primary oracle for the fast counter
std::int64_t oracle_count(const Graph& g) {
  std::int64_t t = 0;
  for (std::int64_t i = 0; i < g.n; ++i)
    for (std::int64_t j = i + 1; j < g.n; ++j) {
      if (!g.has_edge(i, j)) continue;
      for (std::int64_t k = j + 1; k < g.n; ++k)
        if (g.has_edge(j, k) && g.has_edge(i, k)) ++t;
    }
  return t;
}

Graph build(std::int64_t n, const std::vector<std::pair<int, int>>& edges) {
  Graph g;
  g.n = n;
  g.adjacency.resize(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) {
    g.adjacency[static_cast<std::size_t>(u)].push_back(static_cast<std::int32_t>(v));
    g.adjacency[static_cast<std::size_t>(v)].push_back(static_cast<std::int32_t>(u));
  }
  for (auto& a : g.adjacency) std::sort(a.begin(), a.end());
  g.edge_count = static_cast<std::int64_t>(edges.size());
  return g;
}

void check_invariants(const Graph& g) {
  std::int64_t deg_sum = 0;
  for (std::int64_t v = 0; v < g.n; ++v) {
    const auto& a = g.adjacency[static_cast<std::size_t>(v)];
    REQUIRE(std::is_sorted(a.begin(), a.end()));
    REQUIRE(std::adjacent_find(a.begin(), a.end()) == a.end());
    for (std::int32_t u : a) {
      REQUIRE(u != v);
      REQUIRE(u >= 0);
      REQUIRE(u < g.n);
      REQUIRE(g.has_edge(u, v));
    }
    deg_sum += static_cast<std::int64_t>(a.size());
  }
  REQUIRE(deg_sum == 2 * g.edge_count);
}

}  // namespace

TEST_CASE("all-zero weights sample the empty graph") {
  WeightVector wv;
  wv.weights.assign(10, 0.0);
  Graph g = sample_graph(wv, 3.0, 17);
  CHECK(g.n == 10);
  CHECK(g.edge_count == 0);
  for (std::int64_t v = 0; v < g.n; ++v) CHECK(g.degree(v) == 0);
  CHECK(count_triangles(g) == 0);
  check_invariants(g);
}

TEST_CASE("saturated weights sample the complete graph") {
  for (std::int64_t n : {6, 8}) {
    WeightVector wv;
    // w^2 >= mu n makes every pair probability exactly 1
    wv.weights.assign(static_cast<std::size_t>(n), 3.0 * static_cast<double>(n));
    Graph g = sample_graph(wv, 3.0, 99);
    CHECK(g.edge_count == n * (n - 1) / 2);
    for (std::int64_t v = 0; v < n; ++v) CHECK(g.degree(v) == n - 1);
    CHECK(count_triangles(g) == n * (n - 1) * (n - 2) / 6);
    check_invariants(g);
  }
}

TEST_CASE("hand-built graphs count exactly") {
  // star: every edge shares the center, no triangle can close
  std::vector<std::pair<int, int>> star;
  for (int leaf = 1; leaf < 10; ++leaf) star.push_back({0, leaf});
  CHECK(count_triangles(build(10, star)) == 0);

  CHECK(count_triangles(build(4, {{0, 1}, {1, 2}, {2, 3}})) == 0);
  CHECK(count_triangles(build(3, {{0, 1}, {1, 2}, {0, 2}})) == 1);
  // diamond: two triangles sharing the 1-2 edge
  CHECK(count_triangles(build(4, {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}})) == 2);

  std::vector<std::pair<int, int>> k6;
  for (int u = 0; u < 6; ++u)
    for (int v = u + 1; v < 6; ++v) k6.push_back({u, v});
  CHECK(count_triangles(build(6, k6)) == 20);

  CHECK(count_triangles(build(3, {})) == 0);
  CHECK(count_triangles(build(2, {{0, 1}})) == 0);
}

TEST_CASE("random graphs match the cubic counting oracle") {
  PowerLawDist d(1.5);
  std::int64_t total = 0;
  for (std::uint64_t rep = 0; rep < 200; ++rep) {
    WeightVector wv = sample(d, 60, 777, rep);
    Graph g = sample_graph(wv, d.mean(), 1000 + rep);
    std::int64_t fast = count_triangles(g);
    REQUIRE(fast == oracle_count(g));
    total += fast;
    if (rep < 3) check_invariants(g);
  }
  // the batch must actually contain triangles for the agreement to mean much
  CHECK(total > 200);
}

TEST_CASE("per-pair edge frequencies match the connection probabilities") {
  const std::int64_t n = 50;
  const int reps = 10000;
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, n, 424242);
  KernelContext ctx(n, d.mean());

  std::vector<int> hits(static_cast<std::size_t>(n * n), 0);
  for (int rep = 0; rep < reps; ++rep) {
    Graph g = sample_graph(wv, d.mean(), replication_seed(9001, static_cast<std::uint64_t>(rep)));
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int32_t j : g.adjacency[static_cast<std::size_t>(i)])
        if (j > i) hits[static_cast<std::size_t>(i * n + j)] += 1;
  }

  int within = 0, pairs = 0;
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = i + 1; j < n; ++j) {
      double p = edge_prob(ctx, wv.weights[static_cast<std::size_t>(i)],
                           wv.weights[static_cast<std::size_t>(j)]);
      double freq = static_cast<double>(hits[static_cast<std::size_t>(i * n + j)]) / reps;
      double band = 4.0 * std::sqrt(p * (1.0 - p) / reps);
      ++pairs;
      if (std::abs(freq - p) <= band) ++within;
    }
  CHECK(pairs == n * (n - 1) / 2);
  // 4 sigma per pair leaves the expected miss count well under 5 percent
  CHECK(static_cast<double>(within) >= 0.95 * static_cast<double>(pairs));
}

TEST_CASE("replication mean of triangle counts matches the conditional expectation") {
  const std::int64_t n = 100;
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, n, 20240815);
  double target = conditional_mean_triangles(KernelContext(n, d.mean()), wv);

  RunningStats stats;
  for (std::uint64_t rep = 0; rep < 2000; ++rep) {
    Graph g = sample_graph(wv, d.mean(), replication_seed(5150, rep));
    stats.add(static_cast<double>(count_triangles(g)));
  }
  double se = stats.std_error();
  REQUIRE(se > 0.0);
  CHECK(std::abs(stats.mean - target) <= 4.0 * se);
}

TEST_CASE("raising one weight with the same seed only adds edges") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 80, 31337);
  Graph before = sample_graph(wv, d.mean(), 5555);

  WeightVector boosted = wv;
  for (std::size_t idx : {std::size_t(0), std::size_t(17), std::size_t(79)})
    boosted.weights[idx] *= 8.0;
  Graph after = sample_graph(boosted, d.mean(), 5555);

  for (std::int64_t i = 0; i < before.n; ++i)
    for (std::int32_t j : before.adjacency[static_cast<std::size_t>(i)])
      if (j > i) REQUIRE(after.has_edge(i, j));
  CHECK(after.edge_count > before.edge_count);
}

TEST_CASE("planting hubs overwrites only the tail of the vector") {
  WeightVector wv;
  wv.weights = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};

  WeightVector same = plant_hubs(wv, PlantSpec{});
  CHECK(same.weights == wv.weights);

  PlantSpec three{{50.0, 70.0, 90.0}};
  WeightVector planted = plant_hubs(wv, three);
  for (std::size_t i = 0; i < 7; ++i) CHECK(planted.weights[i] == wv.weights[i]);
  CHECK(planted.weights[7] == 50.0);
  CHECK(planted.weights[8] == 70.0);
  CHECK(planted.weights[9] == 90.0);

  PlantSpec all{std::vector<double>(10, 2.0)};
  CHECK(plant_hubs(wv, all).weights == std::vector<double>(10, 2.0));

  PlantSpec too_many{std::vector<double>(11, 2.0)};
  CHECK_THROWS_AS(plant_hubs(wv, too_many), std::invalid_argument);
  CHECK_THROWS_AS(plant_hubs(wv, PlantSpec{{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(plant_hubs(wv, PlantSpec{{-3.0}}), std::invalid_argument);
}

TEST_CASE("a saturating hub connects to everything") {
  const std::int64_t n = 40;
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, n, 2718);
  // hub weight mu n * n saturates against any partner of weight >= 1
  WeightVector planted = plant_hubs(wv, PlantSpec{{d.mean() * n * n}});
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Graph g = sample_graph(planted, d.mean(), seed);
    CHECK(g.degree(n - 1) == n - 1);
  }
  check_invariants(sample_graph(planted, d.mean(), 6));
}

TEST_CASE("weight truncation zeroes exactly the capped entries") {
  WeightVector wv;
  wv.weights = {1.0, 2.5, 4.0, 4.0, 7.0};

  CHECK(truncate_weights(wv, 100.0).weights == wv.weights);
  CHECK(truncate_weights(wv, 4.0).weights == std::vector<double>{1.0, 2.5, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(truncate_weights(wv, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(truncate_weights(wv, -1.0), std::invalid_argument);

  PowerLawDist d(1.5);
  WeightVector sampled = sample(d, 120, 8088);
  // the support starts at x_min, so capping there wipes the whole vector
  WeightVector wiped = truncate_weights(sampled, d.x_min);
  CHECK(std::all_of(wiped.weights.begin(), wiped.weights.end(),
                    [](double w) { return w == 0.0; }));

  KernelContext ctx(120, d.mean());
  WeightVector capped = truncate_weights(sampled, 6.0);
  CHECK(conditional_mean_triangles(ctx, capped) <= conditional_mean_triangles(ctx, sampled));
}

TEST_CASE("edge list export is sorted and complete") {
  CHECK(edge_list(build(3, {})) == "");
  CHECK(edge_list(build(3, {{0, 1}, {1, 2}, {0, 2}})) == "0 1\n0 2\n1 2\n");
  CHECK(edge_list(build(5, {{2, 3}, {4, 0}, {0, 1}})) == "0 1\n0 4\n2 3\n");

  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 30, 13579);
  Graph g = sample_graph(wv, d.mean(), 24680);
  std::istringstream lines(edge_list(g));
  std::vector<std::pair<int, int>> parsed;
  int u, v;
  while (lines >> u >> v) {
    CHECK(u < v);
    parsed.push_back({u, v});
  }
  CHECK(std::is_sorted(parsed.begin(), parsed.end()));
  CHECK(static_cast<std::int64_t>(parsed.size()) == g.edge_count);
  Graph rebuilt = build(g.n, parsed);
  CHECK(rebuilt.adjacency == g.adjacency);
}

TEST_CASE("sampling is deterministic and thread-count independent") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 300, 112233);

  set_thread_count(1);
  Graph one = sample_graph(wv, d.mean(), 445566);
  set_thread_count(4);
  Graph four = sample_graph(wv, d.mean(), 445566);
  set_thread_count(0);
  Graph any = sample_graph(wv, d.mean(), 445566);

  CHECK(one.adjacency == four.adjacency);
  CHECK(one.adjacency == any.adjacency);
  CHECK(one.edge_count == four.edge_count);

  Graph other = sample_graph(wv, d.mean(), 445567);
  CHECK(other.adjacency != one.adjacency);
}

TEST_CASE("sample_graph validates its input") {
  WeightVector one;
  one.weights = {2.0};
  CHECK_THROWS_AS(sample_graph(one, 3.0, 1), std::invalid_argument);

  WeightVector ok;
  ok.weights = {2.0, 2.0};
  CHECK_THROWS_AS(sample_graph(ok, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_graph(ok, -1.0, 1), std::invalid_argument);

  WeightVector neg;
  neg.weights = {2.0, -1.0};
  CHECK_THROWS_AS(sample_graph(neg, 3.0, 1), std::invalid_argument);

  WeightVector bad;
  bad.weights = {2.0, std::nan("")};
  CHECK_THROWS_AS(sample_graph(bad, 3.0, 1), std::invalid_argument);
}
