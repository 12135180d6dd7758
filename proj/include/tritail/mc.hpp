#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tritail/dist.hpp"
#include "tritail/theory.hpp"

namespace tritail {

// Replicated-estimator result. Each replication is a pure function of the
// master seed and its replication index and partials merge in index order,
// so value and std_error come out bit-identical on any thread count.
// diagnostics carries estimator-specific side measurements keyed by name.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> diagnostics;
};

enum class MeanMode { crude, conditional };

MeanMode parse_mean_mode(const std::string& name);
std::string mean_mode_name(MeanMode mode);

// Mean triangle count. Crude mode samples a graph per replication and counts
// triangles; conditional mode averages the conditional mean given the
// weights, which integrates out the edge noise and can only shrink the
// variance. Both are unbiased for the same quantity.
// per_rep, when given, receives each replication's statistic in order
Estimate estimate_mean_triangles(const PowerLawDist& d, std::int64_t n, std::int64_t reps,
                                 MeanMode mode, std::uint64_t seed,
                                 std::vector<double>* per_rep = nullptr);

// P(triangles > (1+a) * mean) estimated through the one-big-weight channel:
// the last node's weight is drawn from W | W > s by inverse transform and the
// indicator frequency is scaled by n P(W > s). Replications where another
// node also exceeds s are dropped (they contribute zero) and counted in
// diagnostics["second_exceedances"]; their rate gauges the neglected
// two-big-weights channel. diagnostics also reports the raw frequency, the
// scale factor, and the event threshold.
Estimate estimate_tail_single_hub(const PowerLawDist& d, std::int64_t n, double a, double s,
                                  std::int64_t reps, std::uint64_t seed);

// Frequency that k(a) i.i.d. Pareto hubs drawn from threshold b reach the
// limit payoff level a C^3 H. The one-argument form samples at the critical
// threshold b = eta_threshold(a). On the event every hub is >= eta(a), so
// sampling from any lower b and multiplying the frequency by (eta/b)^(k
// alpha) recovers the same probability; the _at form exposes b for that
// check and returns the raw frequency with binomial std_error.
Estimate estimate_boundary_payoff_prob(const TheoryContext& ctx, double a, std::int64_t reps,
                                       std::uint64_t seed);
Estimate estimate_boundary_payoff_prob_at(const TheoryContext& ctx, double a, double b,
                                          std::int64_t reps, std::uint64_t seed);

// Mean of hub_excess / n over fresh weight vectors, to be compared with the
// limit payoff K_l(z); diagnostics reports the target and |mean - target|.
Estimate verify_hub_lln(const PowerLawDist& d, std::int64_t n, std::span<const double> z,
                        std::int64_t reps, std::uint64_t seed);

// Mean of triangles / exact mean with one hub planted at the single-hub
// threshold for level a; the ratio should sit near 1 + a.
Estimate verify_planted_single_hub(const PowerLawDist& d, std::int64_t n, double a,
                                   std::int64_t reps, std::uint64_t seed);

// Frequency that the triangle count reaches (C^3 H + a - slack) n^(3 - 3
// alpha/2) with B = ceil(sqrt(2a) n^(1 - 3 alpha/4)) planted saturated hubs.
// slack < 0 selects the default 0.2 a. deep_saturation plants weight mu n * n
// so the hubs connect with probability one whatever x_min is; pass false for
// the plain mu n construction.
Estimate verify_many_hub_lower_bound(const PowerLawDist& d, std::int64_t n, double a,
                                     std::int64_t reps, std::uint64_t seed, double slack = -1.0,
                                     bool deep_saturation = true);

// one empirical frequency measured against an analytic tail bound
struct BoundCheck {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  bool ok = false;
};

// Runs the registered bound harnesses: the weighted uniform empirical
// process at a tight and a loose operating point, the weight-window event,
// a Bernoulli sum, and the hub-count tail. ok means the observed frequency
// does not exceed the bound by more than 3 binomial std_errors.
std::vector<BoundCheck> verify_bound_frequencies(std::int64_t reps, std::uint64_t seed);

// Importance-sampled estimate of the scaled triangle integral. The proposal
// matches the integrand's band exponents in the two outer coordinates and
// the innermost coordinate is integrated in closed form, so the weights vary
// only by logarithmic factors and the variance is finite.
Estimate estimate_triangle_integral(double alpha, std::int64_t samples, std::uint64_t seed);

}  // namespace tritail
