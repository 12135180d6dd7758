#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>

#include "tritail/dist.hpp"
#include "tritail/quad.hpp"

namespace tritail {

// Deterministic limit quantities for the triangle-count upper tail:
// the triangle constant H, the finite-n mean, the minimal hub size c_a(n),
// the hub payoff K_l with its threshold eta(a), the one- and two-hub tail
// integrals, and the rate exponents of the four large-deviation regimes.

struct TheoryOptions {
  double rel_tol = 1e-6;    // target relative accuracy of every quadrature
  int max_segments = 4000;  // per-axis refinement budget
};

// dimensionless triangle integral
//   I(alpha) = int int int min(uv,1) min(vw,1) min(uw,1) (uvw)^(-alpha-1) du dv dw
// over (0,inf)^3; H = (alpha^3/6) mu^(-3 alpha/2) I(alpha). Exposed separately
// so sampling-based checks can target it directly.
double scaled_triangle_integral(double alpha, const TheoryOptions& opts = {});

// H for the default support point x_min = 1
double triangle_constant(double alpha, const TheoryOptions& opts = {});

struct MeanTriangles {
  double exact;       // C(n,3) E[f_n(W, W', W'')]
  double asymptotic;  // C^3 H n^(3 - 3 alpha/2)
};

enum class Regime { single_hub, many_hub, theta, gamma };

Regime parse_regime(const std::string& name);
std::string regime_name(Regime r);

struct RegimeParams {
  double a = 0.0;      // deviation size, used by many_hub and gamma
  double theta = 0.0;  // threshold growth exponent, theta regime
  double gamma = 0.0;  // deviation growth exponent, gamma regime
};

struct RegimeExponents {
  Regime regime;
  double alpha;
  // polynomial regimes (single_hub, theta): the tail index of the probability.
  // stretched regimes (many_hub, gamma): the constant in front of the
  // sqrt(n^..) log n decay of the log-probability; always negative.
  double exponent;
  bool stretched;            // true when exponent is a log-limit constant
  double beta;               // alpha / (4 (alpha - 1))
  double hub_scale_exponent; // size of the dominant hub as a power of n
};

RegimeExponents regime_exponent(double alpha, Regime regime, const RegimeParams& params = {});

class TheoryContext {
 public:
  PowerLawDist dist;
  double mu;
  double H;
  double C3H;
  TheoryOptions opts;

  explicit TheoryContext(const PowerLawDist& d, const TheoryOptions& o = {});

  // E[min(a1 W, 1)], exact for Pareto
  double capped_moment(double a1) const;

  // E[min(a1 W, 1) min(a2 W, 1)], exact for Pareto
  double capped_pair_moment(double a1, double a2) const;

  // E[f_n(W, W', W'')] over three independent weights
  double mean_kernel(std::int64_t n) const;

  MeanTriangles mean_triangles(std::int64_t n) const;

  // c_a(n): smallest hub weight c whose expected triangle excess
  // n^2 (1/2) int int f_n(x,y,c) dF dF reaches a times the exact mean
  double hub_threshold(std::int64_t n, double a) const;

  // k(a): smallest l with l mu + l(l-1)/2 > a C^3 H
  int hub_count(double a) const;

  // variant using the saturated payoff l mu/2 + l(l-1)/2 instead; kept as a
  // consistency diagnostic next to hub_count (the two differ by the factor
  // of two between l mu and the saturated single-hub payoff mu/2)
  int hub_count_limit(double a) const;

  // K_l for hub sizes z (hubs of weight z_i n)
  double hub_payoff(std::span<const double> z) const;

  // lim of K_k(z,..,z,eta) as the k-1 leading hubs grow without bound:
  // (k-1) mu/2 + (k-1)(k-2)/2 + K_1(eta) + (k-1) E[min(eta W / mu, 1)]
  double hub_payoff_limit_form(int k, double eta) const;

  // eta(a): smallest eta whose limit-form payoff with k(a) hubs reaches
  // a C^3 H; requires the standing condition
  // (k(a)-1) mu + (k(a)-1)(k(a)-2)/2 < a C^3 H
  double eta_threshold(double a) const;

  // S_b(n) = int int_{x<y} f_n(x, y, b) dF dF
  double single_hub_integral(std::int64_t n, double b) const;

  // S_{b,c}(n) = int f_n(x, b, c) dF(x), fully closed form
  double double_hub_integral(std::int64_t n, double b, double c) const;

 private:
  mutable std::mutex cache_mutex_;
  mutable std::map<std::int64_t, double> mean_kernel_cache_;
};

}  // namespace tritail
