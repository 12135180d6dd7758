#include "tritail/dist.hpp"

#include <cmath>
#include <stdexcept>

#include "tritail/parallel.hpp"
#include "tritail/rng.hpp"

namespace tritail {

double pareto_tail(double alpha, double x_min, double x) {
  if (x < x_min) return 1.0;
  return std::pow(x_min, alpha) * std::pow(x, -alpha);
}

double pareto_quantile(double alpha, double x_min, double u) {
  return x_min * std::pow(u, -1.0 / alpha);
}

double pareto_mean(double alpha, double x_min) { return alpha * x_min / (alpha - 1.0); }

PowerLawDist::PowerLawDist(double alpha_, double x_min_) : alpha(alpha_), x_min(x_min_) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("PowerLawDist: alpha must lie strictly between 1 and 2");
  if (!(x_min > 0.0)) throw std::invalid_argument("PowerLawDist: x_min must be positive");
  C = std::pow(x_min, alpha);
}

double PowerLawDist::tail(double x) const {
  if (!(x >= 0.0)) throw std::invalid_argument("tail: x must be nonnegative");
  return pareto_tail(alpha, x_min, x);
}

double PowerLawDist::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("quantile: u must lie in (0, 1]");
  return pareto_quantile(alpha, x_min, u);
}

double PowerLawDist::density(double x) const {
  if (x < x_min) return 0.0;
  return alpha * C * std::pow(x, -alpha - 1.0);
}

double PowerLawDist::mean() const { return pareto_mean(alpha, x_min); }

double PowerLawDist::trunc_second_moment(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("trunc_second_moment: t must be nonnegative");
  if (t < x_min) return 0.0;
  return alpha * C * (std::pow(t, 2.0 - alpha) - std::pow(x_min, 2.0 - alpha)) / (2.0 - alpha);
}

double PowerLawDist::tail_first_moment(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("tail_first_moment: t must be nonnegative");
  if (t < x_min) return mean();
  return alpha * C * std::pow(t, 1.0 - alpha) / (alpha - 1.0);
}

double PowerLawDist::trunc_first_moment(double t) const { return mean() - tail_first_moment(t); }

std::int64_t WeightVector::count_above(double x) const {
  std::int64_t c = 0;
  for (double w : weights) {
    if (w > x) c += 1;
  }
  return c;
}

double WeightVector::empirical_tail(double x) const {
  if (weights.empty()) return 0.0;
  return static_cast<double>(count_above(x)) / static_cast<double>(weights.size());
}

WeightVector sample(const PowerLawDist& d, std::int64_t n, std::uint64_t seed,
                    std::uint64_t vector_id) {
  if (n < 1) throw std::invalid_argument("sample: need n >= 1");
  WeightVector wv;
  wv.weights.resize(static_cast<std::size_t>(n));
  parallel_for_blocks(n, 8192, [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      double u = uniform_draw_positive(seed, Stream::weights, vector_id,
                                       static_cast<std::uint64_t>(i));
      wv.weights[static_cast<std::size_t>(i)] = d.quantile(u);
    }
  });
  return wv;
}

}  // namespace tritail
