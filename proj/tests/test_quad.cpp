#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "tritail/quad.hpp"

using namespace tritail;

namespace {

// integral of x^k over [-1, 1] by a plain rule application
double rule_moment(const GaussRule& g, int k) {
  double s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], k);
  return s;
}

}  // namespace

TEST_CASE("gauss rules have unit-measure weights and symmetric nodes") {
  for (int n : {7, 15}) {
    const GaussRule& g = gauss_legendre(n);
    REQUIRE(g.x.size() == static_cast<size_t>(n));
    double wsum = 0.0;
    for (double w : g.w) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // nodes come in +- pairs
    for (int i = 0; i < n; ++i) {
      CHECK(g.x[i] == doctest::Approx(-g.x[n - 1 - i]).epsilon(1e-13));
      CHECK(std::abs(g.x[i]) < 1.0);
    }
  }
}

TEST_CASE("n-point rule integrates polynomials up to degree 2n-1 exactly") {
  for (int n : {7, 15}) {
    const GaussRule& g = gauss_legendre(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(rule_moment(g, k) == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
    // and degree 2n is the first one it misses
    double exact = 2.0 / (2 * n + 1);
    CHECK(std::abs(rule_moment(g, 2 * n) - exact) > 1e-12);
  }
}

TEST_CASE("smooth integrals converge to known values") {
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  auto r1 = integrate([](double x) { return x * x; }, 0.0, 1.0, opts);
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  auto r2 = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, opts);
  CHECK(r2.converged);
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-12));

  auto r3 = integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, opts);
  CHECK(r3.converged);
  CHECK(r3.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("degenerate and invalid intervals") {
  auto r = integrate([](double x) { return x; }, 2.0, 2.0);
  CHECK(r.converged);
  CHECK(r.value == 0.0);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("kinked integrand with a split hint needs no refinement") {
  // |x - 0.3| on [0, 1]: area 0.3^2/2 + 0.7^2/2
  auto f = [](double x) { return std::abs(x - 0.3); };
  double exact = 0.5 * (0.09 + 0.49);
  std::vector<double> split{0.3};
  auto hinted = integrate(f, 0.0, 1.0, {}, split);
  CHECK(hinted.converged);
  CHECK(hinted.segments == 2);  // piecewise linear pieces are integrated exactly
  CHECK(hinted.value == doctest::Approx(exact).epsilon(1e-13));

  auto blind = integrate(f, 0.0, 1.0, {});
  CHECK(blind.converged);
  CHECK(blind.value == doctest::Approx(exact).epsilon(1e-8));
  CHECK(blind.segments > hinted.segments);
}

TEST_CASE("split hints outside the interval are ignored") {
  std::vector<double> split{-1.0, 0.0, 0.5, 1.0, 2.0};
  auto r = integrate([](double x) { return x; }, 0.0, 1.0, {}, split);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(r.segments == 2);  // only 0.5 was interior
}

TEST_CASE("endpoint singularity handled by the zero map") {
  QuadOptions opts;
  opts.rel_tol = 1e-9;
  // 1/sqrt(x) on (0, 1]
  auto r = integrate_from_zero([](double x) { return 1.0 / std::sqrt(x); }, 1.0, -0.5, opts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
  // x^(-0.9) * cos(x) on (0, 0.5]: compare against a reference computed with
  // the same map at much tighter tolerance
  QuadOptions tight;
  tight.rel_tol = 1e-13;
  auto f = [](double x) { return std::pow(x, -0.9) * std::cos(x); };
  auto ref = integrate_from_zero(f, 0.5, -0.9, tight);
  auto got = integrate_from_zero(f, 0.5, -0.9, opts);
  CHECK(ref.converged);
  CHECK(got.converged);
  CHECK(got.value == doctest::Approx(ref.value).epsilon(1e-8));
}

TEST_CASE("power tails handled by the tail map") {
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  auto r1 = integrate_upper_tail([](double x) { return 1.0 / (x * x); }, 1.0, 2.0, opts);
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-11));

  // integral of x^(-2.5) from 2: 2^(-1.5) / 1.5
  auto r2 = integrate_upper_tail([](double x) { return std::pow(x, -2.5); }, 2.0, 2.5, opts);
  CHECK(r2.converged);
  CHECK(r2.value == doctest::Approx(std::pow(2.0, -1.5) / 1.5).epsilon(1e-11));

  // tail index only has to describe the leading behavior
  auto r3 = integrate_upper_tail([](double x) { return (1.0 + 1.0 / x) / (x * x); }, 1.0, 2.0,
                                 opts);
  CHECK(r3.converged);
  CHECK(r3.value == doctest::Approx(1.5).epsilon(1e-11));
}

TEST_CASE("map preconditions are enforced") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(integrate_upper_tail(f, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_upper_tail(f, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_from_zero(f, 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(integrate_from_zero(f, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("segment budget failure is reported, not hidden") {
  QuadOptions opts;
  opts.rel_tol = 1e-14;
  opts.max_segments = 3;
  // needs far more than 3 segments at this tolerance
  auto r = integrate([](double x) { return std::sqrt(std::abs(x - 0.37)); }, 0.0, 1.0, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.segments == 3);
  CHECK(r.error_estimate > 0.0);
}

TEST_CASE("combining pieces sums values and errors") {
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  auto a = integrate([](double x) { return x; }, 0.0, 1.0, opts);
  auto b = integrate_upper_tail([](double x) { return std::pow(x, -3.0); }, 1.0, 3.0, opts);
  std::vector<QuadResult> parts{a, b};
  auto all = combine(parts);
  CHECK(all.converged);
  CHECK(all.value == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(all.segments == a.segments + b.segments);

  QuadResult bad;
  bad.converged = false;
  std::vector<QuadResult> with_bad{a, bad};
  CHECK_FALSE(combine(with_bad).converged);
}
