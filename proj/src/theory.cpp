#include "tritail/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tritail {

namespace {

void require_alpha_window(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw std::invalid_argument("alpha must lie strictly between 1 and 2");
}

[[noreturn]] void quadrature_failure(const char* what, const QuadResult& r) {
  std::ostringstream os;
  os << what << ": quadrature tolerance not reached, achieved error estimate " << r.error_estimate
     << " on value " << r.value << " after " << r.segments << " segments";
  throw std::runtime_error(os.str());
}

void check_converged(const char* what, const QuadResult& r) {
  if (!r.converged) quadrature_failure(what, r);
}

}  // namespace

double scaled_triangle_integral(double alpha, const TheoryOptions& opts) {
  require_alpha_window(alpha);
  // inner errors act as evaluation noise for the outer adaptive pass, so the
  // inner tolerance has to sit well below the outer one or the outer error
  // estimate plateaus just above its own target
  QuadOptions inner_opts;
  inner_opts.rel_tol = opts.rel_tol * 0.01;
  inner_opts.max_segments = opts.max_segments;
  QuadOptions outer_opts;
  outer_opts.rel_tol = opts.rel_tol * 0.5;
  outer_opts.max_segments = opts.max_segments;

  bool inner_ok = true;
  double worst_inner_error = 0.0;

  // with the w axis integrated in closed form, the remaining integrand over
  // (u, v) is min(uv,1) (uv)^(-alpha-1) times the w integral. Expanded on
  // each v band (split where the mins saturate and where u and v swap
  // roles) it is a sum of two pure power terms; evaluating those terms
  // directly keeps every pow within double range, where the factored
  // product overflows once uv drops below ~1e-162
  const double c1 = 1.0 / (2.0 - alpha) + 1.0 / (alpha - 1.0);
  const double c2 = 1.0 / (alpha * (alpha - 1.0));

  auto inner_over_v = [&](double u) {
    double lo = std::min(u, 1.0 / u);
    double hi = std::max(u, 1.0 / u);

    // v in (0, lo]: v is the smaller argument and uv <= 1
    double low_lin = c1 / u;
    double low_flat = c2 * std::pow(u, -alpha);
    auto g_low = [&](double v) { return low_lin * std::pow(v, 1.0 - alpha) - low_flat; };

    // v in [lo, hi]: below u = 1 the product uv stays under 1, above it
    // saturates, which swaps which powers of v survive
    double mid_inv, mid_pow;
    if (u <= 1.0) {
      mid_inv = c1 * std::pow(u, 1.0 - alpha);
      mid_pow = -c2;
    } else {
      mid_inv = -c2 * std::pow(u, -alpha - 1.0);
      mid_pow = c1 * std::pow(u, -2.0);
    }
    auto g_mid = [&](double v) { return mid_inv / v + mid_pow * std::pow(v, -alpha); };

    // v in [hi, inf): v is the larger argument and uv >= 1
    double hi_sq = c1 * std::pow(u, -alpha);
    double hi_pow = c2 / u;
    auto g_hi = [&](double v) {
      return hi_sq * std::pow(v, -2.0) - hi_pow * std::pow(v, -alpha - 1.0);
    };

    std::vector<QuadResult> parts;
    parts.push_back(integrate_from_zero(g_low, lo, 1.0 - alpha, inner_opts));
    // the band [lo, hi] spans many decades when u is extreme, which defeats
    // arithmetic bisection; log scale keeps the segment count proportional
    // to the number of decades
    parts.push_back(integrate_log_scaled(g_mid, lo, hi, inner_opts));
    parts.push_back(integrate_upper_tail(g_hi, hi, 2.0, inner_opts));
    QuadResult all = combine(parts);
    if (!all.converged) inner_ok = false;
    worst_inner_error = std::max(worst_inner_error, all.error_estimate);
    return all.value;
  };

  std::vector<QuadResult> parts;
  parts.push_back(integrate_from_zero(inner_over_v, 1.0, 1.0 - alpha, outer_opts));
  // the inner integral falls off like u^(alpha-3) for large u, so the tail
  // map has to be told that decay or it leaves a power singularity at 0
  parts.push_back(integrate_upper_tail(inner_over_v, 1.0, 3.0 - alpha, outer_opts));
  QuadResult total = combine(parts);
  if (!total.converged || !inner_ok) quadrature_failure("scaled_triangle_integral", total);
  return total.value;
}

double triangle_constant(double alpha, const TheoryOptions& opts) {
  require_alpha_window(alpha);
  double mu = pareto_mean(alpha, 1.0);
  return alpha * alpha * alpha / 6.0 * std::pow(mu, -1.5 * alpha) *
         scaled_triangle_integral(alpha, opts);
}

TheoryContext::TheoryContext(const PowerLawDist& d, const TheoryOptions& o)
    : dist(d), mu(d.mean()), opts(o) {
  H = dist.alpha * dist.alpha * dist.alpha / 6.0 * std::pow(mu, -1.5 * dist.alpha) *
      scaled_triangle_integral(dist.alpha, opts);
  C3H = dist.C * dist.C * dist.C * H;
}

double TheoryContext::capped_moment(double a1) const {
  if (!(a1 >= 0.0)) throw std::invalid_argument("capped_moment: coefficient must be >= 0");
  if (a1 == 0.0) return 0.0;
  double t = 1.0 / a1;
  return a1 * dist.trunc_first_moment(t) + dist.tail(t);
}

double TheoryContext::capped_pair_moment(double a1, double a2) const {
  if (!(a1 >= 0.0 && a2 >= 0.0))
    throw std::invalid_argument("capped_pair_moment: coefficients must be >= 0");
  if (a1 == 0.0 || a2 == 0.0) return 0.0;
  double big = std::max(a1, a2);
  double small = std::min(a1, a2);
  double t_big = 1.0 / big;    // the larger coefficient caps first
  double t_small = 1.0 / small;
  return a1 * a2 * dist.trunc_second_moment(t_big) +
         small * (dist.tail_first_moment(t_big) - dist.tail_first_moment(t_small)) +
         dist.tail(t_small);
}

double TheoryContext::mean_kernel(std::int64_t n) const {
  if (n < 3) throw std::invalid_argument("mean_kernel: need n >= 3");
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = mean_kernel_cache_.find(n);
    if (it != mean_kernel_cache_.end()) return it->second;
  }

  const double mn = mu * static_cast<double>(n);
  const double x_min = dist.x_min;
  QuadOptions inner_opts;
  inner_opts.rel_tol = opts.rel_tol * 0.1;
  inner_opts.max_segments = opts.max_segments;
  QuadOptions outer_opts;
  outer_opts.rel_tol = opts.rel_tol * 0.5;
  outer_opts.max_segments = opts.max_segments;

  // both weight axes walk probability scale: x = quantile(s), s in (0,1];
  // the integrand is bounded, and all kinks sit on known curves
  auto to_prob = [&](double x) { return x > x_min ? dist.tail(x) : 1.0; };
  double s_sat = to_prob(mn / x_min);       // x alone saturates against x_min
  double s_diag = to_prob(std::sqrt(mn));   // xy = mn crosses the diagonal

  bool inner_ok = true;
  auto inner_over_y = [&](double s) {
    double x = dist.quantile(s);
    auto g = [&](double t) {
      double y = dist.quantile(t);
      double p = std::min(x * y / mn, 1.0);
      return p * capped_pair_moment(x / mn, y / mn);
    };
    std::vector<double> splits{to_prob(mn / x), s_sat, s_diag, s};
    QuadResult r = integrate(g, 0.0, 1.0, inner_opts, splits);
    if (!r.converged) inner_ok = false;
    return r.value;
  };

  std::vector<double> outer_splits{s_sat, s_diag};
  QuadResult r = integrate(inner_over_y, 0.0, 1.0, outer_opts, outer_splits);
  if (!r.converged || !inner_ok) quadrature_failure("mean_kernel", r);

  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    mean_kernel_cache_.emplace(n, r.value);
  }
  return r.value;
}

MeanTriangles TheoryContext::mean_triangles(std::int64_t n) const {
  if (n < 3) throw std::invalid_argument("mean_triangles: need n >= 3");
  double dn = static_cast<double>(n);
  double triples = dn * (dn - 1.0) * (dn - 2.0) / 6.0;
  MeanTriangles m;
  m.exact = triples * mean_kernel(n);
  m.asymptotic = C3H * std::pow(dn, 3.0 - 1.5 * dist.alpha);
  return m;
}

double TheoryContext::single_hub_integral(std::int64_t n, double b) const {
  if (n < 3) throw std::invalid_argument("single_hub_integral: need n >= 3");
  if (!(b >= 0.0)) throw std::invalid_argument("single_hub_integral: need b >= 0");
  if (b == 0.0) return 0.0;

  const double mn = mu * static_cast<double>(n);
  const double x_min = dist.x_min;
  auto to_prob = [&](double x) { return x > x_min ? dist.tail(x) : 1.0; };

  QuadOptions qopts;
  qopts.rel_tol = opts.rel_tol * 0.5;
  qopts.max_segments = opts.max_segments;

  auto g = [&](double s) {
    double x = dist.quantile(s);
    return 0.5 * std::min(x * b / mn, 1.0) * capped_pair_moment(x / mn, b / mn);
  };
  std::vector<double> splits{to_prob(b), to_prob(mn / b), to_prob(mn / x_min)};
  QuadResult r = integrate(g, 0.0, 1.0, qopts, splits);
  check_converged("single_hub_integral", r);
  return r.value;
}

double TheoryContext::double_hub_integral(std::int64_t n, double b, double c) const {
  if (n < 3) throw std::invalid_argument("double_hub_integral: need n >= 3");
  if (!(b >= 0.0 && c >= 0.0))
    throw std::invalid_argument("double_hub_integral: need b, c >= 0");
  if (b == 0.0 || c == 0.0) return 0.0;
  const double mn = mu * static_cast<double>(n);
  return std::min(b * c / mn, 1.0) * capped_pair_moment(b / mn, c / mn);
}

double TheoryContext::hub_threshold(std::int64_t n, double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("hub_threshold: need a > 0");
  if (n < 3) throw std::invalid_argument("hub_threshold: need n >= 3");

  const double dn = static_cast<double>(n);
  const double goal = a * mean_triangles(n).exact;
  auto excess = [&](double c) { return dn * dn * single_hub_integral(n, c); };

  double lo = dist.x_min;
  double hi = mu * dn * dn;  // both hub edges saturated against every weight
  if (excess(lo) >= goal) return lo;
  if (excess(hi) < goal) {
    std::ostringstream os;
    os << "hub_threshold: no hub weight up to " << hi << " reaches " << goal
       << " expected extra triangles (infeasible at this n)";
    throw std::runtime_error(os.str());
  }
  while (hi - lo > 1e-9 * hi) {
    double mid = 0.5 * (lo + hi);
    if (excess(mid) >= goal) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

int TheoryContext::hub_count(double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("hub_count: need a > 0");
  double target = a * C3H;
  for (int l = 1; l < 100000000; ++l) {
    double dl = static_cast<double>(l);
    if (dl * mu + dl * (dl - 1.0) / 2.0 > target) return l;
  }
  throw std::runtime_error("hub_count: no feasible hub count below 1e8");
}

int TheoryContext::hub_count_limit(double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("hub_count_limit: need a > 0");
  double target = a * C3H;
  for (int l = 1; l < 100000000; ++l) {
    double dl = static_cast<double>(l);
    if (dl * mu / 2.0 + dl * (dl - 1.0) / 2.0 > target) return l;
  }
  throw std::runtime_error("hub_count_limit: no feasible hub count below 1e8");
}

double TheoryContext::hub_payoff(std::span<const double> z) const {
  for (double zi : z) {
    if (!(zi > 0.0)) throw std::invalid_argument("hub_payoff: hub sizes must be positive");
  }
  double solo = 0.0;
  for (double zi : z) {
    double cut = mu / zi;
    double attached = zi / mu * dist.trunc_second_moment(cut) + dist.tail_first_moment(cut);
    solo += attached * attached;
  }
  solo /= 2.0 * mu;
  double pairs = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      pairs += capped_pair_moment(z[i] / mu, z[j] / mu);
    }
  }
  return solo + pairs;
}

double TheoryContext::hub_payoff_limit_form(int k, double eta) const {
  if (k < 1) throw std::invalid_argument("hub_payoff_limit_form: need k >= 1");
  if (!(eta >= 0.0)) throw std::invalid_argument("hub_payoff_limit_form: need eta >= 0");
  double dk = static_cast<double>(k);
  double base = (dk - 1.0) * mu / 2.0 + (dk - 1.0) * (dk - 2.0) / 2.0;
  if (eta == 0.0) return base;
  std::vector<double> single{eta};
  return base + hub_payoff(single) + (dk - 1.0) * capped_moment(eta / mu);
}

double TheoryContext::eta_threshold(double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("eta_threshold: need a > 0");
  int k = hub_count(a);
  double dk = static_cast<double>(k);
  double target = a * C3H;
  double standing = (dk - 1.0) * mu + (dk - 1.0) * (dk - 2.0) / 2.0;
  if (!(standing < target)) {
    std::ostringstream os;
    os << "eta_threshold: standing condition violated: (k-1) mu + (k-1)(k-2)/2 = " << standing
       << " must be < a C^3 H = " << target << " (k = " << k << ")";
    throw std::invalid_argument(os.str());
  }
  if (hub_payoff_limit_form(k, 0.0) >= target) return 0.0;
  // the payoff is exactly flat beyond eta = mu / x_min, where every term
  // saturates; if it cannot reach the target there, no eta will do
  double hi = mu / dist.x_min;
  if (hub_payoff_limit_form(k, hi) < target) {
    std::ostringstream os;
    os << "eta_threshold: saturated payoff " << hub_payoff_limit_form(k, hi)
       << " with k = " << k << " hubs stays below a C^3 H = " << target
       << "; no finite eta reaches the target";
    throw std::runtime_error(os.str());
  }
  double lo = 0.0;
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (hub_payoff_limit_form(k, mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Regime parse_regime(const std::string& name) {
  if (name == "single-hub") return Regime::single_hub;
  if (name == "many-hub") return Regime::many_hub;
  if (name == "theta") return Regime::theta;
  if (name == "gamma") return Regime::gamma;
  throw std::invalid_argument("unknown regime '" + name +
                              "' (expected single-hub, many-hub, theta, or gamma)");
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::single_hub: return "single-hub";
    case Regime::many_hub: return "many-hub";
    case Regime::theta: return "theta";
    case Regime::gamma: return "gamma";
  }
  return "unknown";
}

RegimeExponents regime_exponent(double alpha, Regime regime, const RegimeParams& params) {
  require_alpha_window(alpha);
  RegimeExponents out;
  out.regime = regime;
  out.alpha = alpha;
  out.beta = alpha / (4.0 * (alpha - 1.0));

  switch (regime) {
    case Regime::single_hub: {
      if (!(alpha > 4.0 / 3.0))
        throw std::invalid_argument("single-hub regime needs alpha > 4/3");
      out.exponent = 1.0 - alpha * out.beta;
      out.stretched = false;
      out.hub_scale_exponent = out.beta;
      break;
    }
    case Regime::many_hub: {
      if (!(alpha < 4.0 / 3.0))
        throw std::invalid_argument("many-hub regime needs alpha < 4/3");
      if (!(params.a > 0.0)) throw std::invalid_argument("many-hub regime needs a > 0");
      out.exponent = -std::sqrt(2.0 * params.a) * alpha / 4.0;
      out.stretched = true;
      out.hub_scale_exponent = 1.0;  // hubs of weight proportional to n
      break;
    }
    case Regime::theta: {
      if (!(alpha > 4.0 / 3.0)) throw std::invalid_argument("theta regime needs alpha > 4/3");
      double theta_max = 1.5 * alpha - 2.0;
      // closed endpoints admitted so the boundary identities can be evaluated
      if (!(params.theta >= 0.0 && params.theta <= theta_max)) {
        std::ostringstream os;
        os << "theta regime needs 0 <= theta <= 3 alpha/2 - 2 = " << theta_max;
        throw std::invalid_argument(os.str());
      }
      out.exponent = 1.0 - alpha * out.beta - alpha * params.theta / (2.0 * (alpha - 1.0));
      out.stretched = false;
      out.hub_scale_exponent = (alpha + 2.0 * params.theta) / (4.0 * (alpha - 1.0));
      break;
    }
    case Regime::gamma: {
      if (!(params.a > 0.0)) throw std::invalid_argument("gamma regime needs a > 0");
      double gamma_min = std::max(1.0, 3.0 - 1.5 * alpha);
      if (!(params.gamma >= gamma_min && params.gamma < 3.0)) {
        std::ostringstream os;
        os << "gamma regime needs max(1, 3 - 3 alpha/2) = " << gamma_min
           << " <= gamma < 3";
        throw std::invalid_argument(os.str());
      }
      out.exponent = std::sqrt(2.0 * params.a) * ((3.0 - params.gamma) / 2.0 - alpha);
      out.stretched = true;
      out.hub_scale_exponent = 1.0;  // hubs of weight proportional to n
      break;
    }
  }
  return out;
}

}  // namespace tritail
