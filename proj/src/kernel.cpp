#include "tritail/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tritail/parallel.hpp"
#include "tritail/stats.hpp"

namespace tritail {

namespace {

// weights sorted descending with compensated prefix sums and, per position,
// the count of weights large enough to saturate an edge against it
struct SortedView {
  std::vector<double> w;    // descending
  std::vector<double> s1;   // s1[m] = sum of first m weights
  std::vector<double> s2;   // s2[m] = sum of first m squared weights
  std::vector<std::int64_t> sat;  // sat[j] = #{i : w[i] * w[j] >= mu n}
};

SortedView make_sorted_view(const WeightVector& wv, double mu_n) {
  SortedView v;
  v.w = wv.weights;
  std::sort(v.w.begin(), v.w.end(), std::greater<double>());
  std::size_t n = v.w.size();
  v.s1.resize(n + 1);
  v.s2.resize(n + 1);
  KahanSum a1, a2;
  v.s1[0] = 0.0;
  v.s2[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a1.add(v.w[i]);
    a2.add(v.w[i] * v.w[i]);
    v.s1[i + 1] = a1.value();
    v.s2[i + 1] = a2.value();
  }
  v.sat.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double threshold = mu_n / v.w[j];
    auto it = std::partition_point(v.w.begin(), v.w.end(),
                                   [threshold](double x) { return x >= threshold; });
    v.sat[j] = it - v.w.begin();
  }
  return v;
}

double triangles_triple_loop(const KernelContext& ctx, const WeightVector& wv) {
  const std::int64_t n = ctx.n;
  const double mu_n = ctx.mu * static_cast<double>(n);
  const auto& w = wv.weights;
  KahanSum total = parallel_reduce_blocks<KahanSum>(
      n, 64,
      [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        KahanSum s;
        for (std::int64_t i = lo; i < hi; ++i) {
          for (std::int64_t j = i + 1; j < n; ++j) {
            double pij = std::min(w[i] * w[j] / mu_n, 1.0);
            for (std::int64_t k = j + 1; k < n; ++k) {
              double pik = std::min(w[i] * w[k] / mu_n, 1.0);
              double pjk = std::min(w[j] * w[k] / mu_n, 1.0);
              s.add(pij * pik * pjk);
            }
          }
        }
        return s;
      },
      [](KahanSum& acc, const KahanSum& p) { acc.merge(p); });
  return total.value();
}

// Same sum regrouped: for each pair j<k of the descending order, the inner
// sum over i<j splits into a saturated count, a single-factor slab, and a
// fully linear slab, each read off the prefix sums.
double triangles_sorted(const KernelContext& ctx, const WeightVector& wv) {
  const std::int64_t n = ctx.n;
  const double mu_n = ctx.mu * static_cast<double>(n);
  SortedView v = make_sorted_view(wv, mu_n);
  KahanSum total = parallel_reduce_blocks<KahanSum>(
      n, 64,
      [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        KahanSum s;
        for (std::int64_t j = lo; j < hi; ++j) {
          for (std::int64_t k = j + 1; k < n; ++k) {
            double q = std::min(v.w[j] * v.w[k] / mu_n, 1.0);
            std::int64_t both = std::min(v.sat[k], j);
            std::int64_t one = std::min(v.sat[j], j);
            double r = static_cast<double>(both);
            r += v.w[k] / mu_n * (v.s1[one] - v.s1[both]);
            r += v.w[j] * v.w[k] / (mu_n * mu_n) * (v.s2[j] - v.s2[one]);
            s.add(q * r);
          }
        }
        return s;
      },
      [](KahanSum& acc, const KahanSum& p) { acc.merge(p); });
  return total.value();
}

double hub_regular_pairs_direct(const KernelContext& ctx, const WeightVector& wv,
                                std::span<const double> z) {
  const std::int64_t n = ctx.n;
  const auto& w = wv.weights;
  KahanSum total = parallel_reduce_blocks<KahanSum>(
      n, 64,
      [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        KahanSum s;
        for (std::int64_t j = lo; j < hi; ++j) {
          for (std::int64_t k = j + 1; k < n; ++k) {
            for (double zi : z) {
              s.add(triangle_kernel(ctx, w[j], w[k], static_cast<double>(n) * zi));
            }
          }
        }
        return s;
      },
      [](KahanSum& acc, const KahanSum& p) { acc.merge(p); });
  return total.value();
}

double hub_regular_pairs_sorted(const KernelContext& ctx, const WeightVector& wv,
                                std::span<const double> z) {
  const std::int64_t n = ctx.n;
  const double mu_n = ctx.mu * static_cast<double>(n);
  SortedView v = make_sorted_view(wv, mu_n);
  KahanSum grand;
  for (double zi : z) {
    // per-hub attachment probabilities and their weighted prefix sums
    std::vector<double> p1(n + 1), p2(n + 1);
    KahanSum a1, a2;
    p1[0] = 0.0;
    p2[0] = 0.0;
    for (std::int64_t k = 0; k < n; ++k) {
      double a = std::min(v.w[k] * zi / ctx.mu, 1.0);
      a1.add(a);
      a2.add(a * v.w[k]);
      p1[k + 1] = a1.value();
      p2[k + 1] = a2.value();
    }
    KahanSum hub_sum = parallel_reduce_blocks<KahanSum>(
        n, 256,
        [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
          KahanSum s;
          for (std::int64_t j = lo; j < hi; ++j) {
            double aj = std::min(v.w[j] * zi / ctx.mu, 1.0);
            std::int64_t cut = std::max(v.sat[j], j + 1);
            double saturated = p1[cut] - p1[j + 1];
            double linear = v.w[j] / mu_n * (p2[n] - p2[cut]);
            s.add(aj * (saturated + linear));
          }
          return s;
        },
        [](KahanSum& acc, const KahanSum& p) { acc.merge(p); });
    grand.merge(hub_sum);
  }
  return grand.value();
}

}  // namespace

KernelContext::KernelContext(std::int64_t n_, double mu_, std::int64_t n_exact_)
    : n(n_), mu(mu_), n_exact(n_exact_) {
  if (n < 3) throw std::invalid_argument("KernelContext: need n >= 3");
  if (!(mu > 0.0)) throw std::invalid_argument("KernelContext: need mu > 0");
  if (n_exact < 0) throw std::invalid_argument("KernelContext: need n_exact >= 0");
}

double edge_prob(const KernelContext& ctx, double h, double h2) {
  if (!(h >= 0.0 && h2 >= 0.0)) throw std::invalid_argument("edge_prob: weights must be >= 0");
  return std::min(h * h2 / (ctx.mu * static_cast<double>(ctx.n)), 1.0);
}

double triangle_kernel(const KernelContext& ctx, double u, double v, double w) {
  return edge_prob(ctx, u, v) * edge_prob(ctx, v, w) * edge_prob(ctx, u, w);
}

double conditional_mean_triangles(const KernelContext& ctx, const WeightVector& wv) {
  if (static_cast<std::int64_t>(wv.n()) != ctx.n)
    throw std::invalid_argument("conditional_mean_triangles: weight count must equal ctx.n");
  if (ctx.n <= ctx.n_exact) return triangles_triple_loop(ctx, wv);
  return triangles_sorted(ctx, wv);
}

HubExcessParts hub_excess_parts(const KernelContext& ctx, const WeightVector& wv,
                                std::span<const double> z) {
  if (static_cast<std::int64_t>(wv.n()) != ctx.n)
    throw std::invalid_argument("hub_excess: weight count must equal ctx.n");
  for (double zi : z) {
    if (!(zi > 0.0)) throw std::invalid_argument("hub_excess: hub sizes must be positive");
  }
  HubExcessParts parts;
  if (z.empty()) return parts;

  const std::int64_t n = ctx.n;
  if (n <= ctx.n_exact) {
    parts.regular_pairs = hub_regular_pairs_direct(ctx, wv, z);
  } else {
    parts.regular_pairs = hub_regular_pairs_sorted(ctx, wv, z);
  }

  const std::size_t l = z.size();
  KahanSum hub_pairs;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i + 1; j < l; ++j) {
      double hi = static_cast<double>(n) * z[i];
      double hj = static_cast<double>(n) * z[j];
      double edge = edge_prob(ctx, hi, hj);
      KahanSum inner = parallel_reduce_blocks<KahanSum>(
          n, 8192,
          [&](std::int64_t, std::int64_t lo, std::int64_t hi_k) {
            KahanSum s;
            for (std::int64_t k = lo; k < hi_k; ++k) {
              s.add(edge_prob(ctx, wv.weights[k], hi) * edge_prob(ctx, wv.weights[k], hj));
            }
            return s;
          },
          [](KahanSum& acc, const KahanSum& p) { acc.merge(p); });
      hub_pairs.add(edge * inner.value());
    }
  }
  parts.hub_pairs = hub_pairs.value();
  return parts;
}

double hub_excess(const KernelContext& ctx, const WeightVector& wv, std::span<const double> z) {
  return hub_excess_parts(ctx, wv, z).total();
}

double hub_excess_absolute(const KernelContext& ctx, const WeightVector& wv,
                           std::span<const double> hub_weights) {
  std::vector<double> z;
  z.reserve(hub_weights.size());
  for (double h : hub_weights) z.push_back(h / static_cast<double>(ctx.n));
  return hub_excess(ctx, wv, z);
}

}  // namespace tritail
