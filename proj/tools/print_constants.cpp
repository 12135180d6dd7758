// prints the closed-form and quadrature constants over an alpha grid, plus the
// hub machinery at a chosen excess level. handy when eyeballing a new parameter
// range before committing to a long simulation.
//
// usage: print_constants [a] [x_min]

#include <cstdio>
#include <cstdlib>
#include <vector>

#include "tritail/dist.hpp"
#include "tritail/theory.hpp"

using namespace tritail;

int main(int argc, char** argv) {
  double a = argc > 1 ? std::atof(argv[1]) : 1.0;
  double x_min = argc > 2 ? std::atof(argv[2]) : 1.0;

  std::printf("excess level a = %g, x_min = %g\n\n", a, x_min);
  std::printf("%-7s %-10s %-12s %-12s %-8s %-4s %-12s %-12s\n", "alpha", "mu", "H", "C3H", "beta",
              "k", "K_k", "eta");

  const std::vector<double> alphas{1.15, 1.25, 4.0 / 3.0, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9};
  for (double alpha : alphas) {
    PowerLawDist d(alpha, x_min);
    TheoryContext th(d);
    int k = th.hub_count(a);
    std::vector<double> flat(k, 1.0);
    double payoff = th.hub_payoff(flat);
    std::printf("%-7.4f %-10.5f %-12.6g %-12.6g %-8.5f %-4d %-12.6g ", alpha, th.mu, th.H, th.C3H,
                alpha / (4.0 * (alpha - 1.0)), k, payoff);
    try {
      std::printf("%-12.6g\n", th.eta_threshold(a));
    } catch (const std::exception& e) {
      std::printf("n/a (%s)\n", e.what());
    }
  }

  std::printf("\nhub threshold c_a(n) and exact mean at alpha = 1.5:\n");
  std::printf("%-10s %-14s %-14s %-14s %-10s\n", "n", "c_a", "mean_exact", "mean_asym", "ratio");
  PowerLawDist d(1.5, x_min);
  TheoryContext th(d);
  for (std::int64_t n : {std::int64_t{100}, std::int64_t{1000}, std::int64_t{10000},
                         std::int64_t{100000}, std::int64_t{1000000}}) {
    MeanTriangles m = th.mean_triangles(n);
    std::printf("%-10lld %-14.6g %-14.6g %-14.6g %-10.5f\n", static_cast<long long>(n),
                th.hub_threshold(n, a), m.exact, m.asymptotic, m.exact / m.asymptotic);
  }
  return 0;
}
