#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tritail {

// Adaptive 1-D quadrature used by all the integral evaluations. The strategy
// everywhere in this project is: split the axis where the integrand has kinks
// (the min(...) saturation boundaries), map endpoint power behavior away with
// a power substitution, then refine adaptively inside each smooth cell.

struct QuadOptions {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  int max_segments = 4000;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int segments = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

// nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
// computed once by Newton iteration on the Legendre recurrence
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int n);

// Finite interval [a, b] with optional interior kink locations. The estimate
// on each segment is the 15-point rule; the error estimate is the difference
// against the embedded 7-point rule; the worst segment is bisected until the
// total error estimate meets the tolerance.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts = {},
                     std::span<const double> interior_splits = {});

// Integral of f over [a, inf) where f(x) ~ const * x^(-decay) at infinity,
// decay > 1, a > 0. Substituting x = a * t^(-1/(decay-1)) turns the tail into
// a bounded integrand on (0, 1].
QuadResult integrate_upper_tail(const Integrand& f, double a, double decay,
                                const QuadOptions& opts = {});

// Integral of f over (0, b] where f(x) ~ const * x^power as x -> 0,
// power > -1. Substituting x = b * t^(1/(1+power)) removes the singularity.
QuadResult integrate_from_zero(const Integrand& f, double b, double power,
                               const QuadOptions& opts = {});

// Integral of f over [a, b] with 0 < a <= b, integrated in log scale
// (x = e^s). The right tool when b/a spans many decades and f is roughly
// power-like, where arithmetic bisection would crawl.
QuadResult integrate_log_scaled(const Integrand& f, double a, double b,
                                const QuadOptions& opts = {});

// sum of independently computed pieces; converged only if every piece was
QuadResult combine(std::span<const QuadResult> parts);

}  // namespace tritail
