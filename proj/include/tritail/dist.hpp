#pragma once

#include <cstdint>
#include <vector>

namespace tritail {

// Pareto tail formulas as pure functions of (alpha, x_min). PowerLawDist
// delegates here; keeping them free lets boundary parameter values be
// evaluated directly where a constructed distribution would be rejected.
double pareto_tail(double alpha, double x_min, double x);
double pareto_quantile(double alpha, double x_min, double u);
double pareto_mean(double alpha, double x_min);

// Pareto weight law P(W > x) = C * x^(-alpha) on [x_min, inf),
// with C = x_min^alpha so the tail is 1 at the left endpoint.
// Only the infinite-variance window 1 < alpha < 2 is accepted.
struct PowerLawDist {
  double alpha;
  double x_min;
  double C;

  explicit PowerLawDist(double alpha, double x_min = 1.0);

  // P(W > x); 1 below the support
  double tail(double x) const;

  // inverse of tail on (0, 1]: the x with tail(x) = u
  double quantile(double u) const;

  // density alpha * C * x^(-alpha-1) on the support, 0 below it
  double density(double x) const;

  // E[W] = alpha * x_min / (alpha - 1)
  double mean() const;

  // E[W^2 1{W <= t}]; 0 for t below the support
  double trunc_second_moment(double t) const;

  // E[W 1{W > t}]; the full mean for t below the support
  double tail_first_moment(double t) const;

  // E[W 1{W <= t}] = mean() - tail_first_moment(t)
  double trunc_first_moment(double t) const;
};

// An i.i.d. weight sample with its empirical tail queries.
struct WeightVector {
  std::vector<double> weights;

  std::size_t n() const { return weights.size(); }

  // number of weights strictly above x
  std::int64_t count_above(double x) const;

  // fraction of weights strictly above x
  double empirical_tail(double x) const;
};

// n i.i.d. draws by inverse transform. Each entry is a pure function of
// (seed, vector_id, index), so the result is identical on any thread count.
WeightVector sample(const PowerLawDist& d, std::int64_t n, std::uint64_t seed,
                    std::uint64_t vector_id = 0);

}  // namespace tritail
