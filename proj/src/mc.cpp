#include "tritail/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tritail/bounds.hpp"
#include "tritail/graph.hpp"
#include "tritail/kernel.hpp"
#include "tritail/parallel.hpp"
#include "tritail/rng.hpp"
#include "tritail/stats.hpp"

namespace tritail {

namespace {

// replication loops use n_exact = 64 so the quadratic regrouped evaluator
// kicks in for any graph size worth parallelizing over replications
constexpr std::int64_t kReplicatedExactCutoff = 64;

// caps the partial-slot count near 4096 whatever the replication count is
std::int64_t replication_block(std::int64_t reps) {
  std::int64_t b = reps / 4096;
  return b < 1 ? 1 : b;
}

template <class Fn>
RunningStats replicate(std::int64_t reps, Fn&& per_rep) {
  return parallel_reduce_blocks<RunningStats>(
      reps, replication_block(reps),
      [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        RunningStats s;
        for (std::int64_t r = lo; r < hi; ++r) s.add(per_rep(static_cast<std::uint64_t>(r)));
        return s;
      },
      [](RunningStats& acc, const RunningStats& part) { acc.merge(part); });
}

Estimate from_stats(const RunningStats& s, std::int64_t reps, std::uint64_t seed) {
  Estimate e;
  e.value = s.mean;
  e.std_error = s.std_error();
  e.reps = reps;
  e.seed = seed;
  return e;
}

void require_reps(std::int64_t reps, const char* who) {
  if (reps < 1) throw std::invalid_argument(std::string(who) + ": needs reps >= 1");
}

}  // namespace

MeanMode parse_mean_mode(const std::string& name) {
  if (name == "crude") return MeanMode::crude;
  if (name == "conditional") return MeanMode::conditional;
  throw std::invalid_argument("parse_mean_mode: unknown mode '" + name +
                              "' (valid: crude, conditional)");
}

std::string mean_mode_name(MeanMode mode) {
  return mode == MeanMode::crude ? "crude" : "conditional";
}

Estimate estimate_mean_triangles(const PowerLawDist& d, std::int64_t n, std::int64_t reps,
                                 MeanMode mode, std::uint64_t seed, std::vector<double>* per_rep) {
  if (n < 3) throw std::invalid_argument("estimate_mean_triangles: needs n >= 3");
  require_reps(reps, "estimate_mean_triangles");
  const double mu = d.mean();
  const KernelContext ctx(n, mu, kReplicatedExactCutoff);
  if (per_rep) per_rep->assign(static_cast<std::size_t>(reps), 0.0);
  RunningStats stats = replicate(reps, [&](std::uint64_t rep) {
    std::uint64_t rs = replication_seed(seed, rep);
    WeightVector wv = sample(d, n, rs);
    double v;
    if (mode == MeanMode::crude) {
      Graph g = sample_graph(wv, mu, rs);
      v = static_cast<double>(count_triangles(g));
    } else {
      v = conditional_mean_triangles(ctx, wv);
    }
    if (per_rep) (*per_rep)[rep] = v;
    return v;
  });
  return from_stats(stats, reps, seed);
}

Estimate estimate_tail_single_hub(const PowerLawDist& d, std::int64_t n, double a, double s,
                                  std::int64_t reps, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("estimate_tail_single_hub: needs n >= 3");
  require_reps(reps, "estimate_tail_single_hub");
  if (!(a > 0.0)) throw std::invalid_argument("estimate_tail_single_hub: needs a > 0");
  if (!(s >= d.x_min))
    throw std::invalid_argument("estimate_tail_single_hub: needs s >= x_min so the "
                                "conditional tail stays a clean power law");
  TheoryContext theory(d);
  const double mean_ref = theory.mean_triangles(n).exact;
  const double threshold = (1.0 + a) * mean_ref;
  const double mu = d.mean();
  const double inv_alpha = 1.0 / d.alpha;
  std::atomic<std::int64_t> second_exceed{0};
  RunningStats stats = replicate(reps, [&](std::uint64_t rep) {
    std::uint64_t rs = replication_seed(seed, rep);
    WeightVector wv = sample(d, n, rs);
    bool other_big = false;
    for (std::int64_t i = 0; i + 1 < n; ++i) {
      if (wv.weights[static_cast<std::size_t>(i)] > s) {
        other_big = true;
        break;
      }
    }
    if (other_big) {
      second_exceed.fetch_add(1, std::memory_order_relaxed);
      return 0.0;
    }
    double u = uniform_draw_positive(rs, Stream::hub, 0, 0);
    wv.weights[static_cast<std::size_t>(n - 1)] = s * std::pow(u, -inv_alpha);
    Graph g = sample_graph(wv, mu, rs);
    return static_cast<double>(count_triangles(g)) > threshold ? 1.0 : 0.0;
  });
  const double scale = static_cast<double>(n) * d.tail(s);
  Estimate e;
  e.value = scale * stats.mean;
  e.std_error = scale * stats.std_error();
  e.reps = reps;
  e.seed = seed;
  e.diagnostics["raw_frequency"] = stats.mean;
  e.diagnostics["scale_factor"] = scale;
  e.diagnostics["second_exceedances"] = static_cast<double>(second_exceed.load());
  e.diagnostics["threshold"] = threshold;
  e.diagnostics["mean_reference"] = mean_ref;
  return e;
}

Estimate estimate_boundary_payoff_prob_at(const TheoryContext& ctx, double a, double b,
                                          std::int64_t reps, std::uint64_t seed) {
  require_reps(reps, "estimate_boundary_payoff_prob");
  if (!(b > 0.0)) throw std::invalid_argument("estimate_boundary_payoff_prob: needs b > 0");
  const double eta = ctx.eta_threshold(a);  // also enforces the standing condition
  const int k = ctx.hub_count(a);
  const double target = a * ctx.C3H;
  const double inv_alpha = 1.0 / ctx.dist.alpha;
  RunningStats stats = replicate(reps, [&](std::uint64_t rep) {
    std::vector<double> z(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      double u = uniform_draw_positive(seed, Stream::hub, rep, static_cast<std::uint64_t>(i));
      z[static_cast<std::size_t>(i)] = b * std::pow(u, -inv_alpha);
    }
    return ctx.hub_payoff(z) >= target ? 1.0 : 0.0;
  });
  Estimate e;
  e.value = stats.mean;
  e.std_error = binomial_std_error(stats.mean, reps);
  e.reps = reps;
  e.seed = seed;
  e.diagnostics["hub_count"] = static_cast<double>(k);
  e.diagnostics["eta"] = eta;
  e.diagnostics["payoff_target"] = target;
  e.diagnostics["sample_threshold"] = b;
  return e;
}

Estimate estimate_boundary_payoff_prob(const TheoryContext& ctx, double a, std::int64_t reps,
                                       std::uint64_t seed) {
  return estimate_boundary_payoff_prob_at(ctx, a, ctx.eta_threshold(a), reps, seed);
}

Estimate verify_hub_lln(const PowerLawDist& d, std::int64_t n, std::span<const double> z,
                        std::int64_t reps, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("verify_hub_lln: needs n >= 3");
  require_reps(reps, "verify_hub_lln");
  TheoryContext theory(d);
  const double target = z.empty() ? 0.0 : theory.hub_payoff(z);
  const KernelContext ctx(n, d.mean(), kReplicatedExactCutoff);
  RunningStats stats = replicate(reps, [&](std::uint64_t rep) {
    WeightVector wv = sample(d, n, replication_seed(seed, rep));
    return hub_excess(ctx, wv, z) / static_cast<double>(n);
  });
  Estimate e = from_stats(stats, reps, seed);
  e.diagnostics["target"] = target;
  e.diagnostics["abs_error"] = std::fabs(stats.mean - target);
  return e;
}

Estimate verify_planted_single_hub(const PowerLawDist& d, std::int64_t n, double a,
                                   std::int64_t reps, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("verify_planted_single_hub: needs n >= 3");
  require_reps(reps, "verify_planted_single_hub");
  if (!(a > 0.0)) throw std::invalid_argument("verify_planted_single_hub: needs a > 0");
  TheoryContext theory(d);
  const double hub = theory.hub_threshold(n, a);
  const double mean_ref = theory.mean_triangles(n).exact;
  const double mu = d.mean();
  const PlantSpec plant{{hub}};
  RunningStats stats = replicate(reps, [&](std::uint64_t rep) {
    std::uint64_t rs = replication_seed(seed, rep);
    WeightVector wv = plant_hubs(sample(d, n, rs), plant);
    Graph g = sample_graph(wv, mu, rs);
    return static_cast<double>(count_triangles(g)) / mean_ref;
  });
  Estimate e = from_stats(stats, reps, seed);
  e.diagnostics["hub_weight"] = hub;
  e.diagnostics["mean_reference"] = mean_ref;
  return e;
}

Estimate verify_many_hub_lower_bound(const PowerLawDist& d, std::int64_t n, double a,
                                     std::int64_t reps, std::uint64_t seed, double slack,
                                     bool deep_saturation) {
  if (n < 3) throw std::invalid_argument("verify_many_hub_lower_bound: needs n >= 3");
  require_reps(reps, "verify_many_hub_lower_bound");
  if (!(a >= 0.0)) throw std::invalid_argument("verify_many_hub_lower_bound: needs a >= 0");
  if (slack < 0.0) slack = 0.2 * a;
  if (!(slack <= a))
    throw std::invalid_argument("verify_many_hub_lower_bound: needs slack <= a");
  TheoryContext theory(d);
  const double alpha = d.alpha;
  const double dn = static_cast<double>(n);
  const std::int64_t hubs =
      static_cast<std::int64_t>(std::ceil(std::sqrt(2.0 * a) * std::pow(dn, 1.0 - 0.75 * alpha)));
  if (hubs >= n)
    throw std::invalid_argument("verify_many_hub_lower_bound: hub count reached n; "
                                "needs a larger graph for this level a");
  const double mu = d.mean();
  const double hub_weight = deep_saturation ? mu * dn * dn : mu * dn;
  const double threshold =
      (theory.C3H + a - slack) * std::pow(dn, 3.0 - 1.5 * alpha);
  PlantSpec plant;
  plant.hub_weights.assign(static_cast<std::size_t>(hubs), hub_weight);
  RunningStats stats = replicate(reps, [&](std::uint64_t rep) {
    std::uint64_t rs = replication_seed(seed, rep);
    WeightVector wv = sample(d, n, rs);
    if (hubs > 0) wv = plant_hubs(std::move(wv), plant);
    Graph g = sample_graph(wv, mu, rs);
    return static_cast<double>(count_triangles(g)) >= threshold ? 1.0 : 0.0;
  });
  Estimate e;
  e.value = stats.mean;
  e.std_error = binomial_std_error(stats.mean, reps);
  e.reps = reps;
  e.seed = seed;
  e.diagnostics["hub_count"] = static_cast<double>(hubs);
  e.diagnostics["hub_weight"] = hub_weight;
  e.diagnostics["threshold"] = threshold;
  e.diagnostics["slack"] = slack;
  return e;
}

namespace {

// sup over [y, 1] of (empirical cdf of n uniforms) / t; the ratio only drops
// between jumps, so the candidates are t = y and the sample points in (y, 1]
double uniform_ratio_sup(std::vector<double>& u, double y) {
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  std::size_t below = 0;
  while (below < u.size() && u[below] <= y) ++below;
  double sup = static_cast<double>(below) / n / y;
  for (std::size_t i = below; i < u.size(); ++i) {
    if (u[i] > 1.0) break;
    double ratio = static_cast<double>(i + 1) / n / u[i];
    if (ratio > sup) sup = ratio;
  }
  return sup;
}

struct BoundHarness {
  std::string name;
  double bound = 0.0;
  std::function<double(std::uint64_t, std::uint64_t)> trial;  // (harness seed, trial) -> 0/1
};

}  // namespace

std::vector<BoundCheck> verify_bound_frequencies(std::int64_t reps, std::uint64_t seed) {
  require_reps(reps, "verify_bound_frequencies");

  std::vector<BoundHarness> harnesses;

  // weighted uniform empirical process, far tail: the bound is tiny and the
  // event should never fire at this replication budget
  {
    const std::int64_t n = 200;
    const double y = 0.2, lambda = 2.0;
    harnesses.push_back({"uniform-ratio-tight", wellner_bound(n, y, lambda),
                         [n, y, lambda](std::uint64_t hs, std::uint64_t trial) {
                           std::uint64_t ts = replication_seed(hs, trial);
                           std::vector<double> u(static_cast<std::size_t>(n));
                           for (std::int64_t i = 0; i < n; ++i)
                             u[static_cast<std::size_t>(i)] =
                                 uniform_draw(ts, Stream::uniforms, static_cast<std::uint64_t>(i), 0);
                           return uniform_ratio_sup(u, y) >= lambda ? 1.0 : 0.0;
                         }});
  }

  // same process at a soft operating point where the bound is below one but
  // the event actually fires, so the comparison has teeth on both sides
  {
    const std::int64_t n = 200;
    const double y = 0.5, lambda = 1.05;
    harnesses.push_back({"uniform-ratio-loose", wellner_bound(n, y, lambda),
                         [n, y, lambda](std::uint64_t hs, std::uint64_t trial) {
                           std::uint64_t ts = replication_seed(hs, trial);
                           std::vector<double> u(static_cast<std::size_t>(n));
                           for (std::int64_t i = 0; i < n; ++i)
                             u[static_cast<std::size_t>(i)] =
                                 uniform_draw(ts, Stream::uniforms, static_cast<std::uint64_t>(i), 0);
                           return uniform_ratio_sup(u, y) >= lambda ? 1.0 : 0.0;
                         }});
  }

  // weight-window event: frequency of a fresh weight vector leaving the
  // window, against the combined two-tail bound
  {
    const PowerLawDist d(1.5);
    const std::int64_t n = 2000;
    const EnEventSpec spec(0.5, 8.0, (1.0 - 1.0 / d.alpha) * 0.1, d.alpha);
    harnesses.push_back({"weight-window", en_violation_bound(d, spec, n),
                         [d, n, spec](std::uint64_t hs, std::uint64_t trial) {
                           WeightVector wv = sample(d, n, replication_seed(hs, trial));
                           return check_event_En(wv, spec, d) ? 0.0 : 1.0;
                         }});
  }

  // Bernoulli sum doubling its mean, against the Poisson-style rate
  {
    const std::int64_t n = 1000;
    const double p = 0.01, b = 1.0;
    const double mean = static_cast<double>(n) * p;
    harnesses.push_back({"bernoulli-sum", std::exp(-mean * binomial_rate(b)),
                         [n, p, mean, b](std::uint64_t hs, std::uint64_t trial) {
                           std::uint64_t ts = replication_seed(hs, trial);
                           std::int64_t count = 0;
                           for (std::int64_t i = 0; i < n; ++i) {
                             if (uniform_draw(ts, Stream::uniforms, static_cast<std::uint64_t>(i),
                                              0) < p)
                               ++count;
                           }
                           return static_cast<double>(count) > (1.0 + b) * mean ? 1.0 : 0.0;
                         }});
  }

  // two or more weights above a polynomial threshold, against the
  // hub-count tail rate; gamma is tuned so u n^gamma is exactly two
  {
    const PowerLawDist d(1.2);
    const std::int64_t n = 200;
    const double beta = 1.0, dcoef = 1.5, u = 1.0;
    const double gamma = std::log(2.0) / std::log(static_cast<double>(n));
    const double cut = dcoef * std::pow(static_cast<double>(n), beta);
    const double need = u * std::pow(static_cast<double>(n), gamma) - 1e-9;
    harnesses.push_back(
        {"hub-count", hub_count_tail_bound(n, gamma, beta, dcoef, u, d.alpha, d.C),
         [d, n, cut, need](std::uint64_t hs, std::uint64_t trial) {
           WeightVector wv = sample(d, n, replication_seed(hs, trial));
           return static_cast<double>(wv.count_above(cut)) >= need ? 1.0 : 0.0;
         }});
  }

  std::vector<BoundCheck> out;
  out.reserve(harnesses.size());
  for (std::size_t h = 0; h < harnesses.size(); ++h) {
    const std::uint64_t hs = replication_seed(seed, static_cast<std::uint64_t>(h));
    RunningStats stats =
        replicate(reps, [&](std::uint64_t trial) { return harnesses[h].trial(hs, trial); });
    BoundCheck c;
    c.name = harnesses[h].name;
    c.observed = stats.mean;
    c.bound = harnesses[h].bound;
    c.std_error = binomial_std_error(stats.mean, reps);
    c.trials = reps;
    c.ok = c.observed <= c.bound + 3.0 * c.std_error;
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// Proposal for the scaled triangle integral after integrating the innermost
// coordinate in closed form. Outer coordinate u: density proportional to
// u^(1-alpha) on (0,1] and u^(alpha-3) on [1,inf), equal mass each side.
// Middle coordinate v given u: three bands whose exponents match the reduced
// integrand exactly, so the importance weight collapses to a bounded factor
// times 1 + log terms and its variance is finite.
struct IntegralSample {
  RunningStats stats;
  double max_weight = 0.0;
};

double integral_weight_sample(double alpha, std::uint64_t seed, std::uint64_t i) {
  const double two_minus = 2.0 - alpha;
  const double am1 = alpha - 1.0;
  const double c1 = 1.0 / two_minus + 1.0 / am1;
  const double z_u = 2.0 / two_minus;

  const bool lower = uniform_draw(seed, Stream::proposal, i, 0) < 0.5;
  const double u_value = uniform_draw_positive(seed, Stream::proposal, i, 1);
  const double lu = (lower ? 1.0 : -1.0) * std::log(u_value) / two_minus;

  const double band_pick = uniform_draw(seed, Stream::proposal, i, 2);
  const double v_value = uniform_draw_positive(seed, Stream::proposal, i, 3);

  double lv;
  if (lower) {
    // bands (0,u], [u,1/u], [1/u,inf) with shapes v^(1-alpha), 1/v, v^(-2)
    const double w1 = 1.0 / two_minus;
    const double w2 = -2.0 * lu;
    const double w3 = 1.0;
    const double pick = band_pick * (w1 + w2 + w3);
    if (pick < w1) {
      lv = lu + std::log(v_value) / two_minus;
    } else if (pick < w1 + w2) {
      lv = lu * (1.0 - 2.0 * v_value);
    } else {
      lv = -lu - std::log(v_value);
    }
  } else {
    // bands (0,1/u], [1/u,u], [u,inf) with shapes v^(1-alpha), v^(-alpha), v^(-2),
    // band masses normalized by u^(2 alpha - 2) so nothing overflows
    const double inv_t = std::exp(-2.0 * am1 * lu);
    const double w1 = 1.0 / two_minus;
    const double w2 = (1.0 - inv_t) / am1;
    const double w3 = inv_t;
    const double pick = band_pick * (w1 + w2 + w3);
    if (pick < w1) {
      lv = -lu + std::log(v_value) / two_minus;
    } else if (pick < w1 + w2) {
      lv = -lu + std::log1p(-v_value * (-std::expm1(-am1 * 2.0 * lu))) / (1.0 - alpha);
    } else {
      lv = lu - std::log(v_value);
    }
  }

  // bounded bracket from the closed-form innermost integral; depends only on
  // the log gap between the two outer coordinates
  const double gap = std::fabs(lv - lu);
  const double decay = std::exp(-am1 * gap);
  const double bracket = 1.0 / two_minus + (-std::expm1(-am1 * gap)) / am1 + decay / alpha;

  // the proposal shape divides out of the integrand exactly; what is left is
  // the band-mass total, linear in |log u| below one and bounded above one
  double mass;
  if (lower) {
    mass = 1.0 / two_minus + 1.0 - 2.0 * lu;
  } else {
    mass = c1 - (two_minus / am1) * std::exp(-2.0 * am1 * lu);
  }
  return z_u * bracket * mass;
}

}  // namespace

Estimate estimate_triangle_integral(double alpha, std::int64_t samples, std::uint64_t seed) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("estimate_triangle_integral: needs alpha in (1, 2)");
  require_reps(samples, "estimate_triangle_integral");
  IntegralSample total = parallel_reduce_blocks<IntegralSample>(
      samples, replication_block(samples),
      [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        IntegralSample part;
        for (std::int64_t i = lo; i < hi; ++i) {
          double x = integral_weight_sample(alpha, seed, static_cast<std::uint64_t>(i));
          part.stats.add(x);
          if (x > part.max_weight) part.max_weight = x;
        }
        return part;
      },
      [](IntegralSample& acc, const IntegralSample& part) {
        acc.stats.merge(part.stats);
        if (part.max_weight > acc.max_weight) acc.max_weight = part.max_weight;
      });
  Estimate e = from_stats(total.stats, samples, seed);
  e.diagnostics["max_weight"] = total.max_weight;
  return e;
}

}  // namespace tritail
