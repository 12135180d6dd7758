#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "tritail/parallel.hpp"
#include "tritail/rng.hpp"
#include "tritail/stats.hpp"

using namespace tritail;

TEST_CASE("counter hash is a pure function of its key") {
  std::uint64_t a = counter_hash(42, 1, 7, 9);
  std::uint64_t b = counter_hash(42, 1, 7, 9);
  CHECK(a == b);
  CHECK(counter_hash(42, 1, 7, 9) != counter_hash(43, 1, 7, 9));
  CHECK(counter_hash(42, 1, 7, 9) != counter_hash(42, 2, 7, 9));
  CHECK(counter_hash(42, 1, 7, 9) != counter_hash(42, 1, 8, 9));
  CHECK(counter_hash(42, 1, 7, 9) != counter_hash(42, 1, 7, 10));
  // swapping key words must change the value
  CHECK(counter_hash(42, 1, 7, 9) != counter_hash(42, 1, 9, 7));
  CHECK(counter_hash(0, 0, 0, 0) != 0);
}

TEST_CASE("uniform draws land in the right half-open ranges") {
  double lo = 1.0, hi = 0.0;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    double u = uniform_draw(123, Stream::uniforms, 0, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    double v = uniform_draw_positive(123, Stream::uniforms, 1, i);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  // 20000 draws should cover most of the interval
  CHECK(lo < 0.001);
  CHECK(hi > 0.999);
}

TEST_CASE("uniform stream looks uniform in bulk") {
  RunningStats s;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    s.add(uniform_draw(7, Stream::uniforms, 2, i));
  }
  CHECK(std::abs(s.mean - 0.5) < 0.005);
  CHECK(std::abs(s.variance() - 1.0 / 12.0) < 0.002);
}

TEST_CASE("replication seeds are distinct and reproducible") {
  CHECK(replication_seed(99, 0) == replication_seed(99, 0));
  std::vector<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 1000; ++r) seen.push_back(replication_seed(99, r));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("compensated sum beats naive accumulation") {
  // 1 followed by many values that individually vanish against it
  KahanSum k;
  double naive = 0.0;
  k.add(1.0);
  naive += 1.0;
  const int reps = 10000000;
  for (int i = 0; i < reps; ++i) {
    k.add(1e-16);
    naive += 1e-16;
  }
  double expected = 1.0 + reps * 1e-16;
  CHECK(k.value() == doctest::Approx(expected).epsilon(1e-15));
  CHECK(std::abs(naive - expected) > 1e-10);  // the naive sum drops them all
}

TEST_CASE("kahan merge equals sequential accumulation") {
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(std::sin(i) * std::pow(10.0, i % 7));
  KahanSum whole;
  for (double x : xs) whole.add(x);
  KahanSum left, right;
  for (int i = 0; i < 500; ++i) left.add(xs[i]);
  for (int i = 500; i < 1000; ++i) right.add(xs[i]);
  left.merge(right);
  CHECK(left.value() == doctest::Approx(whole.value()).epsilon(1e-13));
}

TEST_CASE("running stats match closed forms on a known sample") {
  RunningStats s;
  for (double x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) s.add(x);
  CHECK(s.count == 8);
  CHECK(s.mean == doctest::Approx(5.0));
  CHECK(s.variance() == doctest::Approx(32.0 / 7.0));
  CHECK(s.std_error() == doctest::Approx(std::sqrt(32.0 / 7.0 / 8.0)));
}

TEST_CASE("running stats merge equals one pass") {
  std::vector<double> xs;
  for (std::uint64_t i = 0; i < 5000; ++i) xs.push_back(uniform_draw(5, Stream::uniforms, 3, i));
  RunningStats whole;
  for (double x : xs) whole.add(x);
  RunningStats a, b, c;
  for (int i = 0; i < 1200; ++i) a.add(xs[i]);
  for (int i = 1200; i < 1201; ++i) b.add(xs[i]);
  for (int i = 1201; i < 5000; ++i) c.add(xs[i]);
  a.merge(b);
  a.merge(c);
  CHECK(a.count == whole.count);
  CHECK(a.mean == doctest::Approx(whole.mean).epsilon(1e-12));
  CHECK(a.variance() == doctest::Approx(whole.variance()).epsilon(1e-10));
  RunningStats empty;
  a.merge(empty);
  CHECK(a.count == whole.count);
}

TEST_CASE("least squares recovers an exact line") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> y;
  for (double v : x) y.push_back(-0.75 * v + 2.5);
  LineFit f = least_squares(x, y);
  CHECK(f.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("least squares rejects bad input") {
  std::vector<double> x{1.0, 1.0, 1.0};
  std::vector<double> y{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(least_squares(x, y), std::invalid_argument);
  std::vector<double> one{1.0};
  CHECK_THROWS_AS(least_squares(one, one), std::invalid_argument);
  std::vector<double> two{1.0, 2.0};
  CHECK_THROWS_AS(least_squares(two, one), std::invalid_argument);
}

TEST_CASE("binomial standard error") {
  CHECK(binomial_std_error(0.5, 100) == doctest::Approx(0.05));
  CHECK(binomial_std_error(0.0, 100) == 0.0);
  CHECK(binomial_std_error(1.0, 100) == 0.0);
  CHECK(binomial_std_error(0.3, 0) == 0.0);
}

TEST_CASE("parallel reduction is identical across thread counts") {
  const std::int64_t n = 1000000;
  auto run = [n]() {
    return parallel_reduce_blocks<KahanSum>(
        n, 4096,
        [](std::int64_t, std::int64_t lo, std::int64_t hi) {
          KahanSum s;
          for (std::int64_t i = lo; i < hi; ++i) {
            s.add(std::sin(static_cast<double>(i)) * 1e-3);
          }
          return s;
        },
        [](KahanSum& acc, const KahanSum& p) { acc.merge(p); });
  };
  std::vector<double> results;
  for (int threads : {1, 4, 8}) {
    set_thread_count(threads);
    results.push_back(run().value());
  }
  set_thread_count(0);
  CHECK(results[0] == results[1]);
  CHECK(results[0] == results[2]);
  // blocked merging is allowed to differ from a flat loop by rounding only
  KahanSum ref;
  for (std::int64_t i = 0; i < n; ++i) ref.add(std::sin(static_cast<double>(i)) * 1e-3);
  CHECK(results[0] == doctest::Approx(ref.value()).epsilon(1e-12));
}

TEST_CASE("parallel sweep covers every index exactly once") {
  const std::int64_t n = 10000;
  std::vector<int> hits(n, 0);
  set_thread_count(8);
  parallel_for_blocks(n, 17, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) hits[i] += 1;
  });
  set_thread_count(0);
  for (std::int64_t i = 0; i < n; ++i) {
    REQUIRE(hits[i] == 1);
  }
}
