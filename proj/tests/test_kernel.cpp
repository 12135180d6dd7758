#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tritail/dist.hpp"
#include "tritail/kernel.hpp"
#include "tritail/stats.hpp"

using namespace tritail;

namespace {

// independent nested-loop oracles, written as plainly as possible

double oracle_triangles(const KernelContext& ctx, const WeightVector& wv) {
  double s = 0.0;
  std::size_t n = wv.n();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        s += triangle_kernel(ctx, wv.weights[i], wv.weights[j], wv.weights[k]);
  return s;
}

double oracle_hub_regular(const KernelContext& ctx, const WeightVector& wv,
                          const std::vector<double>& z) {
  double s = 0.0;
  std::size_t n = wv.n();
  for (double zi : z)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        s += triangle_kernel(ctx, wv.weights[j], wv.weights[k], ctx.n * zi);
  return s;
}

double oracle_hub_pairs(const KernelContext& ctx, const WeightVector& wv,
                        const std::vector<double>& z) {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      for (double wk : wv.weights)
        s += triangle_kernel(ctx, wk, ctx.n * z[i], ctx.n * z[j]);
  return s;
}

}  // namespace

TEST_CASE("context construction is validated") {
  CHECK_NOTHROW(KernelContext(3, 1.0));
  CHECK_THROWS_AS(KernelContext(2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelContext(10, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelContext(10, -2.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelContext(10, 1.0, -1), std::invalid_argument);
}

TEST_CASE("edge probability formula") {
  KernelContext ctx(100, 3.0);  // mu*n = 300
  CHECK(edge_prob(ctx, 0.0, 50.0) == 0.0);
  CHECK(edge_prob(ctx, 10.0, 10.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(edge_prob(ctx, 10.0, 30.0) == 1.0);   // exactly at saturation
  CHECK(edge_prob(ctx, 100.0, 100.0) == 1.0); // beyond saturation
  CHECK(edge_prob(ctx, 2.5, 7.0) == edge_prob(ctx, 7.0, 2.5));
  CHECK(edge_prob(ctx, 3.0, 5.0) <= edge_prob(ctx, 4.0, 5.0));
  CHECK_THROWS_AS(edge_prob(ctx, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("triangle kernel is a product of pair probabilities") {
  KernelContext ctx(10, 3.0);  // mu*n = 30
  CHECK(triangle_kernel(ctx, 2.0, 3.0, 0.0) == 0.0);
  CHECK(triangle_kernel(ctx, 2.0, 3.0, 5.0) == doctest::Approx(1.0 / 30.0).epsilon(1e-14));
  CHECK(triangle_kernel(ctx, 10.0, 10.0, 10.0) == 1.0);
  // all six orderings agree
  std::vector<double> t{1.5, 4.0, 2.5};
  std::sort(t.begin(), t.end());
  double ref = triangle_kernel(ctx, t[0], t[1], t[2]);
  do {
    CHECK(triangle_kernel(ctx, t[0], t[1], t[2]) == doctest::Approx(ref).epsilon(1e-15));
  } while (std::next_permutation(t.begin(), t.end()));
  // below every saturation boundary the kernel is the plain product
  double u = 1.2, v = 2.0, w = 3.1;  // all pairwise products < 30
  double mu_n = 30.0;
  CHECK(triangle_kernel(ctx, u, v, w) ==
        doctest::Approx((u * v) * (v * w) * (u * w) / (mu_n * mu_n * mu_n)).epsilon(1e-14));
}

TEST_CASE("three nodes give the single kernel term") {
  KernelContext ctx(3, 2.0);
  WeightVector wv;
  wv.weights = {1.0, 2.0, 4.0};
  CHECK(conditional_mean_triangles(ctx, wv) ==
        doctest::Approx(triangle_kernel(ctx, 1.0, 2.0, 4.0)).epsilon(1e-15));
}

TEST_CASE("saturated weights count every triple") {
  KernelContext ctx(20, 3.0);
  WeightVector wv;
  double big = std::sqrt(3.0 * 20.0) + 1.0;
  wv.weights.assign(20, big);
  CHECK(conditional_mean_triangles(ctx, wv) == doctest::Approx(1140.0));  // C(20,3)
}

TEST_CASE("triangle functional matches the nested-loop oracle") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 30, 11);
  KernelContext ctx(30, d.mean());
  CHECK(conditional_mean_triangles(ctx, wv) ==
        doctest::Approx(oracle_triangles(ctx, wv)).epsilon(1e-10));
}

TEST_CASE("sorted evaluation equals the literal sum") {
  PowerLawDist d(1.3);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    WeightVector wv = sample(d, 200, seed);
    KernelContext exact(200, d.mean());
    KernelContext fast(200, d.mean(), 0);
    double a = conditional_mean_triangles(exact, wv);
    double b = conditional_mean_triangles(fast, wv);
    CHECK(b == doctest::Approx(a).epsilon(1e-10));
  }
  // repeated weights force tie handling through the same code path
  WeightVector ties;
  for (int i = 0; i < 120; ++i) ties.weights.push_back(1.0 + (i % 4));
  KernelContext exact(120, 2.0);
  KernelContext fast(120, 2.0, 0);
  CHECK(conditional_mean_triangles(fast, ties) ==
        doctest::Approx(conditional_mean_triangles(exact, ties)).epsilon(1e-10));
}

TEST_CASE("raising any weight cannot lose triangles") {
  PowerLawDist d(1.6);
  WeightVector wv = sample(d, 40, 5);
  KernelContext ctx(40, d.mean());
  double base = conditional_mean_triangles(ctx, wv);
  for (std::size_t i : {0u, 17u, 39u}) {
    WeightVector up = wv;
    up.weights[i] *= 3.0;
    CHECK(conditional_mean_triangles(ctx, up) >= base - 1e-12);
  }
}

TEST_CASE("triangle functional ignores weight order") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 60, 9);
  KernelContext ctx(60, d.mean());
  double ref = conditional_mean_triangles(ctx, wv);
  WeightVector shuffled = wv;
  std::mt19937 g(4);
  std::shuffle(shuffled.weights.begin(), shuffled.weights.end(), g);
  CHECK(conditional_mean_triangles(ctx, shuffled) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("length mismatch is rejected") {
  KernelContext ctx(10, 3.0);
  WeightVector wv;
  wv.weights.assign(9, 1.0);
  CHECK_THROWS_AS(conditional_mean_triangles(ctx, wv), std::invalid_argument);
  std::vector<double> z{1.0};
  CHECK_THROWS_AS(hub_excess(ctx, wv, z), std::invalid_argument);
}

TEST_CASE("hub excess with no hubs is zero") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 50, 3);
  KernelContext ctx(50, d.mean());
  CHECK(hub_excess(ctx, wv, {}) == 0.0);
}

TEST_CASE("giant hub pair saturates to one triangle per node") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 50, 3);
  KernelContext ctx(50, d.mean());
  std::vector<double> z{1e6, 1e6};
  HubExcessParts parts = hub_excess_parts(ctx, wv, z);
  CHECK(parts.hub_pairs == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(parts.total() > parts.hub_pairs);  // regular pairs add on top
}

TEST_CASE("hub excess matches the nested-loop oracles") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 100, 21);
  KernelContext ctx(100, d.mean());
  std::vector<double> one{0.7};
  CHECK(hub_excess(ctx, wv, one) ==
        doctest::Approx(oracle_hub_regular(ctx, wv, one)).epsilon(1e-10));
  std::vector<double> three{0.4, 1.1, 2.5};
  HubExcessParts parts = hub_excess_parts(ctx, wv, three);
  CHECK(parts.regular_pairs ==
        doctest::Approx(oracle_hub_regular(ctx, wv, three)).epsilon(1e-10));
  CHECK(parts.hub_pairs == doctest::Approx(oracle_hub_pairs(ctx, wv, three)).epsilon(1e-10));
}

TEST_CASE("sorted hub evaluation equals the literal sum") {
  PowerLawDist d(1.2);
  WeightVector wv = sample(d, 300, 8);
  std::vector<double> z{0.3, 1.7};
  KernelContext exact(300, d.mean());
  KernelContext fast(300, d.mean(), 0);
  CHECK(hub_excess(fast, wv, z) == doctest::Approx(hub_excess(exact, wv, z)).epsilon(1e-10));
}

TEST_CASE("hub sizes must be positive") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 10, 1);
  KernelContext ctx(10, d.mean());
  std::vector<double> z{1.0, 0.0};
  CHECK_THROWS_AS(hub_excess(ctx, wv, z), std::invalid_argument);
  std::vector<double> zn{-1.0};
  CHECK_THROWS_AS(hub_excess(ctx, wv, zn), std::invalid_argument);
}

TEST_CASE("absolute-weight wrapper divides by n") {
  PowerLawDist d(1.5);
  WeightVector wv = sample(d, 80, 13);
  KernelContext ctx(80, d.mean());
  std::vector<double> z{0.9, 2.0};
  std::vector<double> h{0.9 * 80.0, 2.0 * 80.0};
  CHECK(hub_excess_absolute(ctx, wv, h) == doctest::Approx(hub_excess(ctx, wv, z)).epsilon(1e-13));
}

TEST_CASE("adding one node splits into base plus excess") {
  PowerLawDist d(1.5);
  const std::int64_t n = 60;
  WeightVector wv = sample(d, n, 17);
  KernelContext ctx(n, d.mean());
  double extra = 25.0;  // the new node's weight
  double base = conditional_mean_triangles(ctx, wv);
  std::vector<double> z{extra / static_cast<double>(n)};
  double excess = hub_excess(ctx, wv, z);
  // same kernel normalization, one more node
  WeightVector grown = wv;
  grown.weights.push_back(extra);
  KernelContext grown_ctx(n + 1, d.mean() * n / (n + 1.0));
  CHECK(conditional_mean_triangles(grown_ctx, grown) ==
        doctest::Approx(base + excess).epsilon(1e-11));
}

TEST_CASE("hub excess concentrates over fresh weight samples") {
  // relative spread decays like n^(1/alpha - 1), so the 5% bar at n=4000
  // needs a tail index near the light end of the window
  PowerLawDist d(1.9);
  const std::int64_t n = 4000;
  KernelContext ctx(n, d.mean());
  std::vector<double> z{3.0, 6.0};
  RunningStats s;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    WeightVector wv = sample(d, n, 1000 + rep);
    s.add(hub_excess(ctx, wv, z));
  }
  CHECK(s.mean > 0.0);
  CHECK(std::sqrt(s.variance()) / s.mean < 0.05);
}
