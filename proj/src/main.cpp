#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tritail/commands.hpp"
#include "tritail/config.hpp"
#include "tritail/record.hpp"

namespace {

// flags shared by every subcommand; only explicitly given ones override the
// config file, so file values survive unless the command line says otherwise
struct FlagValues {
  std::string config_path;
  double alpha = 0.0;
  double x_min = 0.0;
  std::vector<std::int64_t> n_grid;
  double a = 0.0;
  double theta = 0.0;
  double gamma = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  std::string mode;
  std::string out;
  std::string trace;
  int threads = 0;
  std::string subset;
  double s = 0.0;
  double b = 0.0;
  double slack = 0.0;
  std::vector<double> z;
  double tolerance_scale = 0.0;
};

void add_common_flags(CLI::App* sub, FlagValues& f) {
  sub->add_option("--config", f.config_path, "key = value run description file");
  sub->add_option("--alpha", f.alpha, "weight tail exponent, open interval (1, 2)");
  sub->add_option("--n", f.n_grid, "graph size, or comma list for a grid")->delimiter(',');
  sub->add_option("--a", f.a, "deviation size");
  sub->add_option("--theta", f.theta, "threshold growth exponent");
  sub->add_option("--gamma", f.gamma, "deviation growth exponent");
  sub->add_option("--reps", f.reps, "replications (sample count for mode integral)");
  sub->add_option("--seed", f.seed, "master seed; fixed seed means identical output");
  sub->add_option("--mode", f.mode,
                  "estimator: crude, conditional, tail, payoff, planted, many-hub, hub-lln, "
                  "bounds, integral");
  sub->add_option("--out", f.out, "output stem; writes <stem>.json and <stem>.csv");
  sub->add_option("--trace", f.trace, "per-replication JSONL trace path (mean modes only)");
  sub->add_option("--threads", f.threads, "worker threads, 0 means hardware parallelism");
  sub->add_option("--subset", f.subset,
                  "verify selection: all, theory-only, simulation-only, or comma list of ids");
  sub->add_option("--x_min", f.x_min, "weight distribution left endpoint");
  sub->add_option("--s", f.s, "tail mode conditioning threshold; 0 picks one from n and a");
  sub->add_option("--b", f.b, "payoff mode hub size; 0 means the computed threshold");
  sub->add_option("--slack", f.slack, "many-hub target reduction; negative means 0.2 a");
  sub->add_option("--z", f.z, "hub sizes as fractions of n, comma list")->delimiter(',');
  sub->add_option("--tolerance_scale", f.tolerance_scale,
                  "multiplies every verify band; 1 is the shipped gate");
}

tritail::ExperimentConfig merge_config(const CLI::App* sub, const FlagValues& f) {
  tritail::ExperimentConfig cfg;
  if (sub->count("--config") > 0) cfg = tritail::load_config(f.config_path);
  if (sub->count("--alpha") > 0) cfg.alpha = f.alpha;
  if (sub->count("--n") > 0) cfg.n_grid = f.n_grid;
  if (sub->count("--a") > 0) cfg.a = f.a;
  if (sub->count("--theta") > 0) cfg.theta = f.theta;
  if (sub->count("--gamma") > 0) cfg.gamma = f.gamma;
  if (sub->count("--reps") > 0) cfg.reps = f.reps;
  if (sub->count("--seed") > 0) cfg.seed = f.seed;
  if (sub->count("--mode") > 0) cfg.mode = f.mode;
  if (sub->count("--out") > 0) cfg.out = f.out;
  if (sub->count("--trace") > 0) cfg.trace = f.trace;
  if (sub->count("--threads") > 0) cfg.threads = f.threads;
  if (sub->count("--subset") > 0) cfg.subset = f.subset;
  if (sub->count("--x_min") > 0) cfg.x_min = f.x_min;
  if (sub->count("--s") > 0) cfg.s = f.s;
  if (sub->count("--b") > 0) cfg.b = f.b;
  if (sub->count("--slack") > 0) cfg.slack = f.slack;
  if (sub->count("--z") > 0) cfg.z = f.z;
  if (sub->count("--tolerance_scale") > 0) cfg.tolerance_scale = f.tolerance_scale;
  return cfg;
}

std::string output_stem(const std::string& out) {
  const std::string suffix = ".json";
  if (out.size() > suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out.substr(0, out.size() - suffix.size());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triangle statistics of heavy-tailed random graphs: theory, simulation, checks"};
  app.require_subcommand(1);

  FlagValues flags;
  CLI::App* theory = app.add_subcommand("theory", "closed-form and quadrature outputs");
  CLI::App* simulate = app.add_subcommand("simulate", "run the selected estimator");
  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  add_common_flags(theory, flags);
  add_common_flags(simulate, flags);
  add_common_flags(verify, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = theory->parsed() ? theory : simulate->parsed() ? simulate : verify;
  try {
    tritail::ExperimentConfig cfg = merge_config(sub, flags);
    tritail::CommandOutcome oc;
    if (theory->parsed()) {
      oc = tritail::run_theory(cfg);
    } else if (simulate->parsed()) {
      oc = tritail::run_simulate(cfg);
    } else {
      oc = tritail::run_verify(cfg);
    }
    std::cout << tritail::render_record(oc.record);
    if (!cfg.out.empty()) {
      std::string stem = output_stem(cfg.out);
      tritail::write_text_file(stem + ".json", tritail::render_record(oc.record));
      if (!oc.table_csv.empty()) tritail::write_text_file(stem + ".csv", oc.table_csv);
    }
    return oc.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
