#include "tritail/verify.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tritail/commands.hpp"
#include "tritail/config.hpp"
#include "tritail/dist.hpp"
#include "tritail/graph.hpp"
#include "tritail/mc.hpp"
#include "tritail/parallel.hpp"
#include "tritail/quad.hpp"
#include "tritail/rng.hpp"
#include "tritail/stats.hpp"
#include "tritail/theory.hpp"

namespace tritail {

namespace {

struct ItemOutcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// finite-n mean of the hub excess by quadrature, for the hub-LLN item's
// diagnosis: the inner weight of each one-hub term integrates in closed form
// through the truncated Pareto moments, the hub-pair terms are exact
double hub_excess_finite_mean(const PowerLawDist& d, std::int64_t n, std::span<const double> z) {
  const double mu = d.mean();
  const double s = mu * static_cast<double>(n);
  const TheoryContext th(d);
  double total = 0.0;
  for (double zi : z) {
    auto pair_mean = [&](double x) {
      double y_edge = s / x;
      double y_cap = mu / zi;
      double lo = std::min(y_edge, y_cap);
      double hi = std::max(y_edge, y_cap);
      double acc = (x * zi / (s * mu)) * d.trunc_second_moment(lo);
      double ramp = (y_edge <= y_cap) ? zi / mu : x / s;
      acc += ramp * (d.trunc_first_moment(hi) - d.trunc_first_moment(lo));
      acc += d.tail(hi);
      return acc;
    };
    auto outer = [&](double x) { return d.density(x) * std::min(x * zi / mu, 1.0) * pair_mean(x); };
    QuadOptions opts;
    opts.rel_tol = 1e-9;
    total += 0.5 * static_cast<double>(n - 1) *
             integrate_upper_tail(outer, d.x_min, d.alpha + 1.0, opts).value;
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      double hub_edge = std::min(z[i] * z[j] * static_cast<double>(n) / mu, 1.0);
      total += hub_edge * th.capped_pair_moment(z[i] / mu, z[j] / mu);
    }
  }
  return total;
}

// criterion 1: quadrature H against a large independent importance-sampled
// MC of the defining integral, 1% relative at three tail exponents
ItemOutcome item_triangle_constant(double scale) {
  std::ostringstream os;
  bool ok = true;
  int idx = 0;
  for (double alpha : {1.4, 1.6, 1.8}) {
    double hq = triangle_constant(alpha);
    Estimate mc = estimate_triangle_integral(alpha, 10000000, 901 + idx);
    idx += 1;
    double mu = alpha / (alpha - 1.0);
    double hmc = std::pow(alpha, 3.0) / 6.0 * std::pow(mu, -1.5 * alpha) * mc.value;
    double rel = std::abs(hmc - hq) / hq;
    if (!(rel <= 0.01 * scale)) ok = false;
    if (idx > 1) os << "; ";
    os << "alpha " << fmt(alpha) << " rel dev " << fmt(rel);
  }
  os << " (band 1%)";
  return {ok, os.str()};
}

// criterion 2: conditional MC of the mean within 3 stderr of the exact mean
// at three sizes, and the exact/asymptotic ratio walking toward 1
ItemOutcome item_mean_consistency(double scale) {
  PowerLawDist d(1.7, 1.0);
  TheoryContext th(d);
  std::ostringstream os;
  bool ok = true;
  for (std::int64_t n : {200, 500, 1000}) {
    Estimate e = estimate_mean_triangles(d, n, 500, MeanMode::conditional, 202);
    double exact = th.mean_triangles(n).exact;
    double zscore = e.std_error > 0.0 ? (e.value - exact) / e.std_error : 0.0;
    if (!(std::abs(e.value - exact) <= 3.0 * e.std_error * scale)) ok = false;
    os << "n " << n << " z " << fmt(zscore) << "; ";
  }
  double prev_gap = -1.0;
  bool monotone = true;
  os << "ratio path";
  for (double n : {1e3, 1e4, 1e5, 1e6}) {
    MeanTriangles m = th.mean_triangles(static_cast<std::int64_t>(n));
    double gap = std::abs(m.exact / m.asymptotic - 1.0);
    os << " " << fmt(m.exact / m.asymptotic);
    if (prev_gap >= 0.0 && !(gap < prev_gap)) monotone = false;
    prev_gap = gap;
  }
  if (!monotone) ok = false;
  os << (monotone ? " (monotone toward 1)" : " (NOT monotone toward 1)");
  return {ok, os.str()};
}

// criterion 3: fitted log-log slope of the minimal hub size against
// beta = alpha / (4 (alpha - 1)), and the a -> 4a threshold ratio against
// 4^(1/(2(alpha-1))) at the largest size
ItemOutcome item_hub_threshold_index(double scale) {
  std::ostringstream os;
  bool ok = true;
  bool first = true;
  for (double alpha : {1.5, 1.6, 1.8}) {
    PowerLawDist d(alpha, 1.0);
    TheoryContext th(d);
    std::vector<double> log_n;
    std::vector<double> log_c;
    for (double n : {1e3, 1e4, 1e5, 1e6, 1e7}) {
      log_n.push_back(std::log(n));
      log_c.push_back(std::log(th.hub_threshold(static_cast<std::int64_t>(n), 1.0)));
    }
    LineFit fit = least_squares(log_n, log_c);
    double beta = alpha / (4.0 * (alpha - 1.0));
    double slope_dev = std::abs(fit.slope - beta);
    double ratio = th.hub_threshold(10000000, 4.0) / th.hub_threshold(10000000, 1.0);
    double ratio_target = std::pow(4.0, 1.0 / (2.0 * (alpha - 1.0)));
    double ratio_dev = std::abs(ratio / ratio_target - 1.0);
    if (!(slope_dev <= 0.02 * scale)) ok = false;
    if (!(ratio_dev <= 0.05 * scale)) ok = false;
    if (!first) os << "; ";
    first = false;
    os << "alpha " << fmt(alpha) << " slope dev " << fmt(slope_dev) << " (band 0.02), ratio dev "
       << fmt(ratio_dev) << " (band 0.05)";
  }
  os << "; the threshold's slow finite-size drift (saturation window plus bisection on the exact "
        "mean) still moves the fit at n <= 1e7";
  return {ok, os.str()};
}

// criterion 4: planting the unit-excess hub doubles the mean count
ItemOutcome item_planted_hub(double scale) {
  PowerLawDist d(1.7, 1.0);
  Estimate e = verify_planted_single_hub(d, 2000, 1.0, 300, 404);
  bool ok = std::abs(e.value - 2.0) <= 0.1 * scale;
  std::ostringstream os;
  os << "mean ratio " << fmt(e.value) << " stderr " << fmt(e.std_error)
     << " (band 2 +- 0.1); the per-replication ratio is heavy-tailed (weights above the "
        "one-hub threshold land in roughly one replication in eight at this n), so the fixed "
        "window spans about one stderr at 300 replications and a correct run clears it only "
        "about four times in five";
  return {ok, os.str()};
}

// criterion 5: sample mean of the hub excess against the limit payoff K_l
ItemOutcome item_hub_lln(double scale) {
  PowerLawDist d(4.0 / 3.0, 1.0);
  TheoryContext th(d);
  std::vector<double> z{1.0, 2.0};
  double target = th.hub_payoff(z);
  Estimate e = verify_hub_lln(d, 4000, z, 200, 505);
  double band = std::max(3.0 * e.std_error, 0.05 * target) * scale;
  double gap = std::abs(e.value - target);
  bool ok = gap <= band;
  double finite = hub_excess_finite_mean(d, 4000, z);
  std::ostringstream os;
  os << "mean " << fmt(e.value) << " vs limit payoff " << fmt(target) << ", gap " << fmt(gap)
     << " band " << fmt(band) << "; finite-n quadrature of the same excess gives " << fmt(finite)
     << " (edge saturation deficit, shrinking like n^(-1/3) log n), matching the sample mean";
  return {ok, os.str()};
}

// criterion 6: eta root residual and the threshold-change self-consistency
// of the boundary payoff probability
ItemOutcome item_payoff_threshold_change(double scale) {
  PowerLawDist d(4.0 / 3.0, 1.0);
  TheoryContext th(d);
  double a = 4.0;
  int k = th.hub_count(a);
  double eta = th.eta_threshold(a);
  double residual = std::abs(th.hub_payoff_limit_form(k, eta) - a * th.C3H);
  bool ok = residual <= 1e-6 * scale;

  Estimate at_eta = estimate_boundary_payoff_prob(th, a, 100000, 606);
  Estimate at_half = estimate_boundary_payoff_prob_at(th, a, eta / 2.0, 100000, 607);
  double factor = std::pow(2.0, static_cast<double>(k) * d.alpha);
  double combined = std::sqrt(at_eta.std_error * at_eta.std_error +
                              factor * factor * at_half.std_error * at_half.std_error);
  double diff = std::abs(at_eta.value - factor * at_half.value);
  if (!(diff <= 3.0 * combined * scale)) ok = false;
  std::ostringstream os;
  os << "eta " << fmt(eta) << " residual " << fmt(residual) << " (band 1e-6); threshold-change |"
     << fmt(at_eta.value) << " - " << fmt(factor) << " * " << fmt(at_half.value) << "| = "
     << fmt(diff) << " vs 3 combined stderr " << fmt(3.0 * combined);
  return {ok, os.str()};
}

// criterion 7: planted saturated hubs push the count over the reduced
// target essentially always
ItemOutcome item_many_hub(double scale) {
  PowerLawDist d(1.2, 1.0);
  Estimate e = verify_many_hub_lower_bound(d, 3000, 1.0, 100, 707);
  bool ok = e.value >= 1.0 - 0.05 * scale;
  std::ostringstream os;
  os << "hit frequency " << fmt(e.value) << " with " << fmt(e.diagnostics.at("hub_count"))
     << " hubs, target count " << fmt(e.diagnostics.at("threshold")) << " (needs >= 0.95)";
  return {ok, os.str()};
}

// criterion 8: log-log slopes of the one- and two-hub tail integrals with
// b(n) = n^0.7 against their predicted indices
ItemOutcome item_s_integral_indices(double scale) {
  double alpha = 1.6;
  PowerLawDist d(alpha, 1.0);
  TheoryContext th(d);
  std::vector<double> log_n;
  std::vector<double> log_sb;
  std::vector<double> log_sbb;
  for (double n : {1e3, 1e4, 1e5, 1e6}) {
    auto ni = static_cast<std::int64_t>(n);
    double b = std::pow(n, 0.7);
    log_n.push_back(std::log(n));
    log_sb.push_back(std::log(th.single_hub_integral(ni, b)));
    log_sbb.push_back(std::log(th.double_hub_integral(ni, b, b)));
  }
  double sb_slope = least_squares(log_n, log_sb).slope;
  double sbb_slope = least_squares(log_n, log_sbb).slope;
  double sb_target = -(2.0 * (alpha - 1.0) * 0.3 + 1.0);
  double sbb_target = -(alpha * 0.3);
  double sb_dev = std::abs(sb_slope - sb_target);
  double sbb_dev = std::abs(sbb_slope - sbb_target);
  bool ok = sb_dev <= 0.05 * scale && sbb_dev <= 0.05 * scale;
  std::ostringstream os;
  os << "one-hub slope " << fmt(sb_slope) << " vs " << fmt(sb_target) << " dev " << fmt(sb_dev)
     << "; two-hub slope " << fmt(sbb_slope) << " vs " << fmt(sbb_target) << " dev "
     << fmt(sbb_dev) << " (bands 0.05); the one-hub integral still carries its saturation-window "
        "transient over n <= 1e6";
  return {ok, os.str()};
}

// criterion 9: empirical violation frequencies stay under the analytic
// bounds at ten thousand trials
ItemOutcome item_concentration_bounds(double scale) {
  std::vector<BoundCheck> checks = verify_bound_frequencies(10000, 909);
  bool ok = true;
  std::ostringstream os;
  bool first = true;
  for (const BoundCheck& c : checks) {
    bool this_ok = c.observed <= c.bound + 3.0 * c.std_error * scale;
    if (!this_ok) ok = false;
    if (!first) os << "; ";
    first = false;
    os << c.name << " " << fmt(c.observed) << " <= " << fmt(c.bound)
       << (this_ok ? "" : " VIOLATED");
  }
  return {ok, os.str()};
}

// criterion 10: closed-form regime exponents meet at the family boundaries
ItemOutcome item_exponent_algebra(double scale) {
  bool ok = true;
  std::ostringstream os;
  bool first = true;
  for (double alpha : {1.5, 1.7}) {
    RegimeParams tp;
    tp.theta = 1.5 * alpha - 2.0;
    RegimeExponents theta_top = regime_exponent(alpha, Regime::theta, tp);
    RegimeParams gp;
    gp.a = 0.5;  // sqrt(2a) = 1 puts both families on the same deviation scale
    gp.gamma = 1.0;
    RegimeExponents gamma_entry = regime_exponent(alpha, Regime::gamma, gp);
    double boundary_diff = std::abs(theta_top.exponent - gamma_entry.exponent);

    RegimeParams t0;
    t0.theta = 0.0;
    double origin_diff = std::abs(regime_exponent(alpha, Regime::theta, t0).exponent -
                                  regime_exponent(alpha, Regime::single_hub).exponent);
    if (!(boundary_diff <= 1e-12 * scale && origin_diff <= 1e-12 * scale)) ok = false;
    if (!first) os << "; ";
    first = false;
    os << "alpha " << fmt(alpha) << " boundary diff " << fmt(boundary_diff) << ", origin diff "
       << fmt(origin_diff);
  }
  os << " (bands 1e-12)";
  return {ok, os.str()};
}

// criterion 11: the tilted single-hub tail estimator against a large crude
// MC. The tilt conditions on exactly one weight above s, so the crude side
// classifies each replication by its exceedance count and the comparison
// runs on the shared one-exceedance channel; the other channels are
// reported alongside.
ItemOutcome item_tail_cross_validation(double scale) {
  PowerLawDist d(1.7, 1.0);
  TheoryContext th(d);
  const std::int64_t n = 40;
  const double a = 4.0;
  const double s = 0.8 * th.hub_threshold(n, a);
  const double threshold = (1.0 + a) * th.mean_triangles(n).exact;
  const double mu = d.mean();

  Estimate tilted = estimate_tail_single_hub(d, n, a, s, 1000000, 1111);

  struct Split {
    std::int64_t ex0 = 0;
    std::int64_t ex1 = 0;
    std::int64_t ex2 = 0;
    void merge(const Split& o) {
      ex0 += o.ex0;
      ex1 += o.ex1;
      ex2 += o.ex2;
    }
  };
  const std::int64_t crude_reps = 10000000;
  Split split = parallel_reduce_blocks<Split>(
      crude_reps, 4096,
      [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
        Split part;
        for (std::int64_t rep = lo; rep < hi; ++rep) {
          std::uint64_t rs = replication_seed(1112, static_cast<std::uint64_t>(rep));
          WeightVector wv = sample(d, n, rs);
          std::int64_t exceed = wv.count_above(s);
          Graph g = sample_graph(wv, mu, rs);
          if (static_cast<double>(count_triangles(g)) <= threshold) continue;
          if (exceed == 0) part.ex0 += 1;
          else if (exceed == 1) part.ex1 += 1;
          else part.ex2 += 1;
        }
        return part;
      },
      [](Split& acc, const Split& p) { acc.merge(p); });

  double denom = static_cast<double>(crude_reps);
  double crude_p = static_cast<double>(split.ex1) / denom;
  double crude_se = std::sqrt(crude_p * (1.0 - crude_p) / denom);
  double combined = std::sqrt(crude_se * crude_se + tilted.std_error * tilted.std_error);
  double diff = std::abs(tilted.value - crude_p);
  bool ok = diff <= 3.0 * combined * scale;
  double p_any = static_cast<double>(split.ex0 + split.ex1 + split.ex2) / denom;
  std::ostringstream os;
  os << "one-exceedance channel: tilted " << fmt(tilted.value) << " (" << fmt(tilted.std_error)
     << ") vs crude " << fmt(crude_p) << " (" << fmt(crude_se) << "), diff " << fmt(diff)
     << " vs 3 combined stderr " << fmt(3.0 * combined) << "; unrestricted P(event) " << fmt(p_any)
     << " splits " << split.ex0 << "/" << split.ex1 << "/" << split.ex2
     << " by exceedance count 0/1/2+";
  return {ok, os.str()};
}

// criterion 12: the simulate command's value fields are byte-identical
// across thread counts
ItemOutcome item_simulate_determinism(double) {
  auto outputs_dump = [](const ExperimentConfig& cfg) {
    CommandOutcome oc = run_simulate(cfg);
    return record_to_json(oc.record)["outputs"].dump();
  };

  ExperimentConfig mean_cfg;
  mean_cfg.alpha = 1.5;
  mean_cfg.n_grid = {200};
  mean_cfg.reps = 60;
  mean_cfg.seed = 12;
  mean_cfg.mode = "conditional";

  ExperimentConfig tail_cfg;
  tail_cfg.alpha = 1.7;
  tail_cfg.n_grid = {60};
  tail_cfg.a = 1.0;
  tail_cfg.s = 5.0;
  tail_cfg.reps = 2000;
  tail_cfg.seed = 12;
  tail_cfg.mode = "tail";

  bool ok = true;
  std::ostringstream os;
  bool first = true;
  for (ExperimentConfig* cfg : {&mean_cfg, &tail_cfg}) {
    cfg->threads = 1;
    std::string one = outputs_dump(*cfg);
    cfg->threads = 4;
    std::string four = outputs_dump(*cfg);
    cfg->threads = 8;
    std::string eight = outputs_dump(*cfg);
    bool same = one == four && four == eight;
    if (!same) ok = false;
    if (!first) os << "; ";
    first = false;
    os << cfg->mode << " outputs " << (same ? "identical" : "DIFFER") << " at threads {1,4,8}";
  }
  set_thread_count(0);
  return {ok, os.str()};
}

struct ItemSpec {
  int id;
  const char* name;
  bool theory_only;
  ItemOutcome (*fn)(double);
};

const ItemSpec kItems[] = {
    {1, "triangle-constant-mc-cross", false, item_triangle_constant},
    {2, "mean-consistency", false, item_mean_consistency},
    {3, "hub-threshold-index", true, item_hub_threshold_index},
    {4, "planted-hub-doubling", false, item_planted_hub},
    {5, "hub-lln", false, item_hub_lln},
    {6, "payoff-threshold-change", false, item_payoff_threshold_change},
    {7, "many-hub-certificate", false, item_many_hub},
    {8, "s-integral-indices", true, item_s_integral_indices},
    {9, "concentration-bounds", false, item_concentration_bounds},
    {10, "exponent-algebra", true, item_exponent_algebra},
    {11, "tail-estimator-cross-validation", false, item_tail_cross_validation},
    {12, "simulate-determinism", false, item_simulate_determinism},
};

std::vector<int> parse_subset(const std::string& subset) {
  std::vector<int> ids;
  std::string trimmed;
  for (char ch : subset) {
    if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
  }
  if (trimmed.empty() || trimmed == "all") {
    for (const ItemSpec& it : kItems) ids.push_back(it.id);
    return ids;
  }
  if (trimmed == "theory-only") {
    for (const ItemSpec& it : kItems) {
      if (it.theory_only) ids.push_back(it.id);
    }
    return ids;
  }
  if (trimmed == "simulation-only") {
    for (const ItemSpec& it : kItems) {
      if (!it.theory_only) ids.push_back(it.id);
    }
    return ids;
  }
  std::stringstream ss(trimmed);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int id = 0;
    try {
      id = std::stoi(part);
    } catch (const std::exception&) {
      throw std::invalid_argument("verify subset: '" + part + "' is not an item id");
    }
    bool known = false;
    for (const ItemSpec& it : kItems) known = known || it.id == id;
    if (!known)
      throw std::invalid_argument("verify subset: no item with id " + std::to_string(id) +
                                  " (valid: 1..12)");
    ids.push_back(id);
  }
  if (ids.empty()) throw std::invalid_argument("verify subset: empty selection");
  return ids;
}

}  // namespace

std::vector<std::pair<int, std::string>> acceptance_items() {
  std::vector<std::pair<int, std::string>> out;
  for (const ItemSpec& it : kItems) out.emplace_back(it.id, it.name);
  return out;
}

std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& opts,
                                             const std::string& subset) {
  std::vector<int> ids = parse_subset(subset);
  std::vector<AcceptanceResult> results;
  for (const ItemSpec& it : kItems) {
    if (std::find(ids.begin(), ids.end(), it.id) == ids.end()) continue;
    set_thread_count(0);
    auto t0 = std::chrono::steady_clock::now();
    ItemOutcome outcome = it.fn(opts.tolerance_scale);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    AcceptanceResult r;
    r.id = it.id;
    r.name = it.name;
    r.passed = outcome.passed;
    r.seconds = secs;
    r.detail = outcome.detail;
    results.push_back(r);
    if (opts.log) {
      char head[96];
      std::snprintf(head, sizeof(head), "criterion %2d [%s] %s (%.1f s): ", it.id,
                    outcome.passed ? "pass" : "FAIL", it.name, secs);
      (*opts.log) << head << outcome.detail << "\n";
    }
  }
  return results;
}

bool all_passed(const std::vector<AcceptanceResult>& results) {
  for (const AcceptanceResult& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace tritail
