#include "tritail/quad.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "tritail/stats.hpp"

namespace tritail {

namespace {

// Legendre polynomial P_n and its derivative at x, by the three-term recurrence.
void legendre(int n, double x, double* p, double* dp) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  *p = p1;
  // derivative identity, valid away from x = +-1; nodes are interior so fine
  *dp = n * (x * p1 - p0) / (x * x - 1.0);
}

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based starting guess, then Newton to machine precision
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p = 0.0;
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, &p, &dp);
      double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    legendre(n, x, &p, &dp);
    rule.x[i] = x;
    rule.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

// 15-point estimate plus error against the 7-point rule on [a, b]
Segment evaluate_segment(const Integrand& f, double a, double b) {
  const GaussRule& g7 = gauss_legendre(7);
  const GaussRule& g15 = gauss_legendre(15);
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double s7 = 0.0;
  for (size_t i = 0; i < g7.x.size(); ++i) s7 += g7.w[i] * f(mid + half * g7.x[i]);
  double s15 = 0.0;
  for (size_t i = 0; i < g15.x.size(); ++i) s15 += g15.w[i] * f(mid + half * g15.x[i]);
  s7 *= half;
  s15 *= half;
  return Segment{a, b, s15, std::abs(s15 - s7)};
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opts,
                     std::span<const double> interior_splits) {
  if (!(a <= b)) throw std::invalid_argument("integrate: need a <= b");
  if (a == b) return QuadResult{0.0, 0.0, 0, true};

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double s : interior_splits) {
    if (s > a && s < b) cuts.push_back(s);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Segment> segs;
  segs.reserve(cuts.size() - 1);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    segs.push_back(evaluate_segment(f, cuts[i], cuts[i + 1]));
  }

  // smallest width still worth bisecting, relative to the interval scale
  double min_width = (std::abs(a) + std::abs(b) + 1.0) * 1e-14;

  auto totals = [&segs]() {
    KahanSum v;
    KahanSum e;
    for (const Segment& s : segs) {
      v.add(s.value);
      e.add(s.error);
    }
    return std::pair<double, double>(v.value(), e.value());
  };

  while (true) {
    auto [total, err] = totals();
    double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (err <= tol) {
      return QuadResult{total, err, static_cast<int>(segs.size()), true};
    }
    if (static_cast<int>(segs.size()) >= opts.max_segments) {
      return QuadResult{total, err, static_cast<int>(segs.size()), false};
    }
    size_t worst = 0;
    double worst_err = -1.0;
    bool splittable = false;
    for (size_t i = 0; i < segs.size(); ++i) {
      if (segs[i].b - segs[i].a <= min_width) continue;
      splittable = true;
      if (segs[i].error > worst_err) {
        worst_err = segs[i].error;
        worst = i;
      }
    }
    if (!splittable) {
      return QuadResult{total, err, static_cast<int>(segs.size()), false};
    }
    Segment parent = segs[worst];
    double mid = 0.5 * (parent.a + parent.b);
    segs[worst] = evaluate_segment(f, parent.a, mid);
    segs.push_back(evaluate_segment(f, mid, parent.b));
  }
}

QuadResult integrate_upper_tail(const Integrand& f, double a, double decay,
                                const QuadOptions& opts) {
  if (!(a > 0.0)) throw std::invalid_argument("integrate_upper_tail: need a > 0");
  if (!(decay > 1.0)) throw std::invalid_argument("integrate_upper_tail: need decay > 1");
  double p = 1.0 / (decay - 1.0);
  // x = a * t^(-p), dx = a * p * t^(-p-1) dt, t in (0, 1]
  auto g = [&f, a, p](double t) {
    double x = a * std::pow(t, -p);
    return f(x) * a * p * std::pow(t, -p - 1.0);
  };
  return integrate(g, 0.0, 1.0, opts);
}

QuadResult integrate_from_zero(const Integrand& f, double b, double power,
                               const QuadOptions& opts) {
  if (!(b > 0.0)) throw std::invalid_argument("integrate_from_zero: need b > 0");
  if (!(power > -1.0)) throw std::invalid_argument("integrate_from_zero: need power > -1");
  double q = 1.0 / (1.0 + power);
  // x = b * t^q, dx = b * q * t^(q-1) dt, t in (0, 1]
  auto g = [&f, b, q](double t) {
    double x = b * std::pow(t, q);
    return f(x) * b * q * std::pow(t, q - 1.0);
  };
  return integrate(g, 0.0, 1.0, opts);
}

QuadResult integrate_log_scaled(const Integrand& f, double a, double b,
                                const QuadOptions& opts) {
  if (!(a > 0.0)) throw std::invalid_argument("integrate_log_scaled: need a > 0");
  if (!(b >= a)) throw std::invalid_argument("integrate_log_scaled: need b >= a");
  double lo = std::log(a);
  double hi = std::log(b);
  // x = e^s, dx = e^s ds
  auto g = [&f](double s) {
    double x = std::exp(s);
    return f(x) * x;
  };
  return integrate(g, lo, hi, opts);
}

QuadResult combine(std::span<const QuadResult> parts) {
  QuadResult out;
  out.converged = true;
  KahanSum v;
  KahanSum e;
  for (const QuadResult& r : parts) {
    v.add(r.value);
    e.add(r.error_estimate);
    out.segments += r.segments;
    out.converged = out.converged && r.converged;
  }
  out.value = v.value();
  out.error_estimate = e.value();
  return out;
}

}  // namespace tritail
