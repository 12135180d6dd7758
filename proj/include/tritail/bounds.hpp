#pragma once

#include <cstdint>

#include "tritail/dist.hpp"

namespace tritail {

// h(x) = x(log x - 1) + 1; nonnegative, zero only at x = 1
double entropy_h(double x);

// Tail bound for the weighted uniform empirical process:
// P(sup over t in [y, 1] of F_n(t)/t >= lambda) <= exp(-n y h(lambda)).
// Requires lambda >= 1 and y in (0, 1]; always lands in (0, 1].
double wellner_bound(std::int64_t n, double y, double lambda);

// Bernoulli-sum deviation rate I_B(b) = (1+b)log(1+b) - b, for
// P(sum > (1+b) mean) <= exp(-mean * I_B(b)); requires b > -1
double binomial_rate(double b);

// J(zeta) = (1+zeta) log(zeta + 1/(1+zeta)) / 3, the upper-tail rate for
// triangle counts in the dense regime; positive for zeta > 0
double chatterjee_rate(double zeta);

// Weight-window event for a size-n sample: the empirical tail stays within a
// factor 1+A of the true tail below lower_cut, stays below (1+A) times the
// true tail at lower_cut across the window, and at most c sample points land
// above upper_cut.
struct EnEventSpec {
  double A;      // relative deviation allowance below the window
  double c;      // point budget above the window
  double delta;  // half-width exponent of the window around the 1/n quantile

  // alpha enters only to validate delta against 1/alpha + delta < 1
  EnEventSpec(double A_, double c_, double delta_, double alpha);

  // a(n) = quantile(1/n) * n^(-delta)
  double lower_cut(const PowerLawDist& d, std::int64_t n) const;
  // b(n) = quantile(1/n) * n^(+delta)
  double upper_cut(const PowerLawDist& d, std::int64_t n) const;
};

bool check_event_En(const WeightVector& wv, const EnEventSpec& spec, const PowerLawDist& d);

// Analytic upper bound for the probability that check_event_En fails on an
// i.i.d. sample of size n: the empirical-process piece below the window plus
// the point-count piece above it, clipped to 1. The middle condition is
// implied by the first, so it adds no term.
double en_violation_bound(const PowerLawDist& d, const EnEventSpec& spec, std::int64_t n);

// P(u n^gamma of the n weights exceed d n^beta)
//   <= exp(-u n^gamma log(n^(gamma - 1 + alpha beta))).
// Requires gamma > 1 - alpha*beta so the log factor is nonnegative; the scale
// constants d and C only move lower-order terms and drop out of the bound.
double hub_count_tail_bound(std::int64_t n, double gamma, double beta, double d, double u,
                            double alpha, double C);

}  // namespace tritail
