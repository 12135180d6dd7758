#include "tritail/commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tritail/dist.hpp"
#include "tritail/mc.hpp"
#include "tritail/parallel.hpp"
#include "tritail/stats.hpp"
#include "tritail/theory.hpp"
#include "tritail/verify.hpp"

namespace tritail {

namespace {

ResultRecord base_record(const std::string& command, const ExperimentConfig& c) {
  ResultRecord r;
  r.command = command;
  r.artifact_version = kArtifactVersion;
  r.timestamp = iso_timestamp_utc();
  r.config = c;
  return r;
}

nlohmann::json estimate_to_json(const Estimate& e) {
  nlohmann::json j;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["reps"] = e.reps;
  j["seed"] = e.seed;
  j["diagnostics"] = e.diagnostics;
  return j;
}

nlohmann::json regime_or_error(double alpha, Regime regime, const RegimeParams& params) {
  try {
    RegimeExponents ex = regime_exponent(alpha, regime, params);
    nlohmann::json j;
    j["exponent"] = ex.exponent;
    j["beta"] = ex.beta;
    j["stretched"] = ex.stretched;
    j["hub_scale_exponent"] = ex.hub_scale_exponent;
    return j;
  } catch (const std::invalid_argument& e) {
    return nlohmann::json{{"error", e.what()}};
  }
}

void push_long_row(std::vector<std::vector<std::string>>& rows, const std::string& n,
                   const std::string& quantity, double value) {
  rows.push_back({n, quantity, table_double(value)});
}

}  // namespace

CommandOutcome run_theory(const ExperimentConfig& c) {
  validate_config(c);
  set_thread_count(c.threads);
  PowerLawDist d(c.alpha, c.x_min);
  TheoryContext th(d);

  CommandOutcome oc;
  oc.record = base_record("theory", c);
  nlohmann::json& out = oc.record.outputs;
  out["mu"] = th.mu;
  out["H"] = th.H;
  out["C3H"] = th.C3H;
  out["scaled_integral"] = th.H / (std::pow(c.alpha, 3.0) / 6.0 * std::pow(th.mu, -1.5 * c.alpha));
  out["hub_count"] = th.hub_count(c.a);
  out["hub_count_limit"] = th.hub_count_limit(c.a);
  out["hub_payoff"] = {{"z", c.z}, {"value", th.hub_payoff(c.z)}};
  try {
    out["eta"] = th.eta_threshold(c.a);
  } catch (const std::runtime_error& e) {
    out["eta_error"] = e.what();
  }

  std::vector<std::vector<std::string>> rows;
  nlohmann::json grid = nlohmann::json::array();
  std::vector<double> log_n;
  std::vector<double> log_c;
  for (std::int64_t n : c.n_grid) {
    MeanTriangles m = th.mean_triangles(n);
    nlohmann::json g;
    g["n"] = n;
    g["mean_exact"] = m.exact;
    g["mean_asymptotic"] = m.asymptotic;
    g["mean_ratio"] = m.exact / m.asymptotic;
    std::string ns = std::to_string(n);
    push_long_row(rows, ns, "mean_exact", m.exact);
    push_long_row(rows, ns, "mean_asymptotic", m.asymptotic);
    push_long_row(rows, ns, "mean_ratio", m.exact / m.asymptotic);
    try {
      double ca = th.hub_threshold(n, c.a);
      g["hub_threshold"] = ca;
      push_long_row(rows, ns, "hub_threshold", ca);
      log_n.push_back(std::log(static_cast<double>(n)));
      log_c.push_back(std::log(ca));
    } catch (const std::runtime_error& e) {
      g["hub_threshold_error"] = e.what();
      rows.push_back({ns, "hub_threshold", ""});
    }
    grid.push_back(g);
  }
  out["grid"] = grid;

  if (log_n.size() >= 2) {
    LineFit fit = least_squares(log_n, log_c);
    double beta = c.alpha / (4.0 * (c.alpha - 1.0));
    out["hub_threshold_slope"] = {{"value", fit.slope},
                                  {"target_beta", beta},
                                  {"abs_dev", std::abs(fit.slope - beta)}};
  }

  RegimeParams params;
  params.a = c.a;
  params.theta = c.theta;
  params.gamma = c.gamma;
  out["regimes"] = {{"single_hub", regime_or_error(c.alpha, Regime::single_hub, params)},
                    {"many_hub", regime_or_error(c.alpha, Regime::many_hub, params)},
                    {"theta", regime_or_error(c.alpha, Regime::theta, params)},
                    {"gamma", regime_or_error(c.alpha, Regime::gamma, params)}};

  oc.table_csv = csv_table({"n", "quantity", "value"}, rows);
  out["table_csv"] = oc.table_csv;
  return oc;
}

CommandOutcome run_simulate(const ExperimentConfig& c) {
  validate_config(c);
  if (c.reps < 1) throw std::invalid_argument("simulate: reps must be at least 1");
  if (!c.trace.empty() && c.mode != "crude" && c.mode != "conditional")
    throw std::invalid_argument(
        "simulate: per-replication traces only cover the mean estimators (crude, conditional)");
  set_thread_count(c.threads);
  PowerLawDist d(c.alpha, c.x_min);

  CommandOutcome oc;
  oc.record = base_record("simulate", c);
  nlohmann::json& out = oc.record.outputs;
  out["mode"] = c.mode;

  std::vector<std::vector<std::string>> rows;
  auto push_estimate_rows = [&](const std::string& ns, const Estimate& e) {
    push_long_row(rows, ns, "value", e.value);
    push_long_row(rows, ns, "std_error", e.std_error);
  };

  std::string trace_text;

  if (c.mode == "crude" || c.mode == "conditional") {
    TheoryContext th(d);
    MeanMode mode = parse_mean_mode(c.mode);
    nlohmann::json estimates = nlohmann::json::array();
    for (std::int64_t n : c.n_grid) {
      std::vector<double> per_rep;
      Estimate e = estimate_mean_triangles(d, n, c.reps, mode, c.seed,
                                           c.trace.empty() ? nullptr : &per_rep);
      double exact = th.mean_triangles(n).exact;
      double z = e.std_error > 0.0 ? (e.value - exact) / e.std_error : 0.0;
      nlohmann::json j = estimate_to_json(e);
      j["n"] = n;
      j["mean_exact"] = exact;
      j["z_score"] = z;
      j["within_three_stderr"] = std::abs(e.value - exact) <= 3.0 * e.std_error;
      estimates.push_back(j);
      push_estimate_rows(std::to_string(n), e);
      for (std::size_t r = 0; r < per_rep.size(); ++r) {
        nlohmann::json line;
        line["mode"] = c.mode;
        line["n"] = n;
        line["rep"] = r;
        line["value"] = per_rep[r];
        trace_text += line.dump() + "\n";
      }
    }
    out["estimates"] = estimates;
  } else if (c.mode == "tail") {
    TheoryContext th(d);
    nlohmann::json estimates = nlohmann::json::array();
    for (std::int64_t n : c.n_grid) {
      double s_eff = c.s > 0.0 ? c.s : 0.8 * th.hub_threshold(n, c.a);
      Estimate e = estimate_tail_single_hub(d, n, c.a, s_eff, c.reps, c.seed);
      nlohmann::json j = estimate_to_json(e);
      j["n"] = n;
      j["s"] = s_eff;
      estimates.push_back(j);
      push_estimate_rows(std::to_string(n), e);
    }
    out["estimates"] = estimates;
  } else if (c.mode == "payoff") {
    TheoryContext th(d);
    Estimate e = c.b > 0.0 ? estimate_boundary_payoff_prob_at(th, c.a, c.b, c.reps, c.seed)
                           : estimate_boundary_payoff_prob(th, c.a, c.reps, c.seed);
    out["estimates"] = nlohmann::json::array({estimate_to_json(e)});
    push_estimate_rows("", e);
  } else if (c.mode == "planted") {
    nlohmann::json estimates = nlohmann::json::array();
    for (std::int64_t n : c.n_grid) {
      Estimate e = verify_planted_single_hub(d, n, c.a, c.reps, c.seed);
      nlohmann::json j = estimate_to_json(e);
      j["n"] = n;
      estimates.push_back(j);
      push_estimate_rows(std::to_string(n), e);
    }
    out["estimates"] = estimates;
  } else if (c.mode == "many-hub") {
    nlohmann::json estimates = nlohmann::json::array();
    for (std::int64_t n : c.n_grid) {
      Estimate e = verify_many_hub_lower_bound(d, n, c.a, c.reps, c.seed, c.slack);
      nlohmann::json j = estimate_to_json(e);
      j["n"] = n;
      estimates.push_back(j);
      push_estimate_rows(std::to_string(n), e);
    }
    out["estimates"] = estimates;
  } else if (c.mode == "hub-lln") {
    nlohmann::json estimates = nlohmann::json::array();
    for (std::int64_t n : c.n_grid) {
      Estimate e = verify_hub_lln(d, n, c.z, c.reps, c.seed);
      nlohmann::json j = estimate_to_json(e);
      j["n"] = n;
      estimates.push_back(j);
      push_estimate_rows(std::to_string(n), e);
    }
    out["estimates"] = estimates;
  } else if (c.mode == "bounds") {
    nlohmann::json checks = nlohmann::json::array();
    for (const BoundCheck& b : verify_bound_frequencies(c.reps, c.seed)) {
      nlohmann::json j;
      j["name"] = b.name;
      j["observed"] = b.observed;
      j["bound"] = b.bound;
      j["std_error"] = b.std_error;
      j["trials"] = b.trials;
      j["ok"] = b.ok;
      checks.push_back(j);
      rows.push_back({"", "violation_frequency:" + b.name, table_double(b.observed)});
      rows.push_back({"", "violation_bound:" + b.name, table_double(b.bound)});
    }
    out["bound_checks"] = checks;
  } else if (c.mode == "integral") {
    Estimate e = estimate_triangle_integral(c.alpha, c.reps, c.seed);
    out["estimates"] = nlohmann::json::array({estimate_to_json(e)});
    push_estimate_rows("", e);
  } else {
    throw std::invalid_argument("simulate: unhandled mode '" + c.mode + "'");
  }

  if (!c.trace.empty()) {
    write_text_file(c.trace, trace_text);
    out["trace_path"] = c.trace;
  }

  oc.table_csv = csv_table({"n", "quantity", "value"}, rows);
  out["table_csv"] = oc.table_csv;
  return oc;
}

CommandOutcome run_verify(const ExperimentConfig& c) {
  validate_config(c);
  set_thread_count(c.threads);

  AcceptanceOptions opts;
  opts.tolerance_scale = c.tolerance_scale;
  opts.log = &std::cerr;

  auto t0 = std::chrono::steady_clock::now();
  std::vector<AcceptanceResult> results = run_acceptance(opts, c.subset);
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  CommandOutcome oc;
  oc.record = base_record("verify", c);
  std::vector<std::vector<std::string>> rows;
  int failed = 0;
  for (const AcceptanceResult& r : results) {
    VerifyItem item;
    item.id = r.id;
    item.name = r.name;
    item.passed = r.passed;
    item.seconds = r.seconds;
    item.detail = r.detail;
    oc.record.verify_items.push_back(item);
    if (!r.passed) failed += 1;
    rows.push_back({std::to_string(r.id), r.name, r.passed ? "pass" : "fail",
                    table_double(r.seconds)});
  }
  oc.record.outputs["items_run"] = static_cast<int>(results.size());
  oc.record.outputs["items_failed"] = failed;
  oc.record.outputs["total_seconds"] = total;
  oc.table_csv = csv_table({"id", "name", "status", "seconds"}, rows);
  oc.record.outputs["table_csv"] = oc.table_csv;
  oc.exit_code = failed == 0 ? 0 : 1;
  return oc;
}

}  // namespace tritail
