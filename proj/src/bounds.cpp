#include "tritail/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tritail {

double entropy_h(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("entropy_h: needs x > 0");
  return x * (std::log(x) - 1.0) + 1.0;
}

double wellner_bound(std::int64_t n, double y, double lambda) {
  if (n < 1) throw std::invalid_argument("wellner_bound: needs n >= 1");
  if (!(y > 0.0 && y <= 1.0)) throw std::invalid_argument("wellner_bound: needs y in (0, 1]");
  if (!(lambda >= 1.0)) throw std::invalid_argument("wellner_bound: needs lambda >= 1");
  double v = std::exp(-static_cast<double>(n) * y * entropy_h(lambda));
  return std::min(v, 1.0);
}

double binomial_rate(double b) {
  if (!(b > -1.0)) throw std::invalid_argument("binomial_rate: needs b > -1");
  return (1.0 + b) * std::log1p(b) - b;
}

double chatterjee_rate(double zeta) {
  if (!(zeta > 0.0)) throw std::invalid_argument("chatterjee_rate: needs zeta > 0");
  // zeta + 1/(1+zeta) = 1 + zeta^2/(1+zeta); the log1p form keeps the value
  // positive all the way down to tiny zeta
  return (1.0 + zeta) * std::log1p(zeta * zeta / (1.0 + zeta)) / 3.0;
}

EnEventSpec::EnEventSpec(double A_, double c_, double delta_, double alpha)
    : A(A_), c(c_), delta(delta_) {
  if (!(A > 0.0)) throw std::invalid_argument("EnEventSpec: needs A > 0");
  if (!(c > 0.0)) throw std::invalid_argument("EnEventSpec: needs c > 0");
  if (!(delta > 0.0) || !(1.0 / alpha + delta < 1.0))
    throw std::invalid_argument("EnEventSpec: needs delta in (0, 1 - 1/alpha)");
}

double EnEventSpec::lower_cut(const PowerLawDist& d, std::int64_t n) const {
  double nn = static_cast<double>(n);
  return d.quantile(1.0 / nn) * std::pow(nn, -delta);
}

double EnEventSpec::upper_cut(const PowerLawDist& d, std::int64_t n) const {
  double nn = static_cast<double>(n);
  return d.quantile(1.0 / nn) * std::pow(nn, delta);
}

bool check_event_En(const WeightVector& wv, const EnEventSpec& spec, const PowerLawDist& d) {
  const std::int64_t n = static_cast<std::int64_t>(wv.n());
  if (n < 1) throw std::invalid_argument("check_event_En: empty sample");
  if (!(1.0 / d.alpha + spec.delta < 1.0))
    throw std::invalid_argument("check_event_En: delta too large for this alpha");

  const double a = spec.lower_cut(d, n);
  const double b = spec.upper_cut(d, n);
  const double nn = static_cast<double>(n);
  const double cap = 1.0 + spec.A;

  std::vector<double> w(wv.weights);
  std::sort(w.begin(), w.end());

  // Condition 1: empirical over true tail stays below 1+A left of a(n).
  // The empirical tail is flat between sample points while the true tail
  // falls, so the ratio peaks at left limits of sample points and of a(n);
  // those finitely many candidates decide the sup.
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (w[i] < a) {
      double count_ge = static_cast<double>(w.size() - i);
      double r = (count_ge / nn) / d.tail(w[i]);
      worst = std::max(worst, r);
    }
    i = j;
  }
  {
    auto it = std::lower_bound(w.begin(), w.end(), a);
    double count_ge = static_cast<double>(w.end() - it);
    worst = std::max(worst, (count_ge / nn) / d.tail(a));
  }
  if (worst > cap) return false;

  auto count_above = [&](double x) {
    return static_cast<double>(w.end() - std::upper_bound(w.begin(), w.end(), x));
  };

  // condition 2: the empirical tail is nonincreasing, so its sup over the
  // window is its value at a(n)
  if (count_above(a) / nn > cap * d.tail(a)) return false;

  // condition 3: at most c points beyond b(n)
  return count_above(b) <= spec.c;
}

double en_violation_bound(const PowerLawDist& d, const EnEventSpec& spec, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("en_violation_bound: needs n >= 1");
  const double nn = static_cast<double>(n);
  const double ya = nn * d.tail(spec.lower_cut(d, n));
  const double yb = nn * d.tail(spec.upper_cut(d, n));
  double below = std::exp(-ya * entropy_h(1.0 + spec.A));
  double above = std::exp(yb) * std::pow(yb, std::ceil(spec.c));
  return std::min(below + above, 1.0);
}

double hub_count_tail_bound(std::int64_t n, double gamma, double beta, double d, double u,
                            double alpha, double C) {
  if (n < 1) throw std::invalid_argument("hub_count_tail_bound: needs n >= 1");
  if (!(d > 0.0 && u > 0.0))
    throw std::invalid_argument("hub_count_tail_bound: needs d > 0 and u > 0");
  if (!(alpha > 0.0 && C > 0.0))
    throw std::invalid_argument("hub_count_tail_bound: needs alpha > 0 and C > 0");
  if (!(gamma > 1.0 - alpha * beta))
    throw std::invalid_argument("hub_count_tail_bound: needs gamma > 1 - alpha*beta");
  const double logn = std::log(static_cast<double>(n));
  const double count = u * std::exp(gamma * logn);
  double v = std::exp(-count * (gamma - 1.0 + alpha * beta) * logn);
  return std::min(v, 1.0);
}

}  // namespace tritail
