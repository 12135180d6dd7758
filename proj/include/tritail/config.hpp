#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tritail {

// One run description shared by every subcommand. A config file is plain
// key = value text (comma lists for grids); command-line flags override file
// values. serialize_config writes every field back out with full precision,
// so parse(serialize(c)) == c holds exactly.
struct ExperimentConfig {
  double alpha = 1.5;
  double x_min = 1.0;
  std::vector<std::int64_t> n_grid{1000};
  double a = 1.0;
  double theta = 0.2;
  double gamma = 0.1;
  std::int64_t reps = 1000;
  std::uint64_t seed = 1;
  std::string mode = "conditional";
  std::string out;
  std::string trace;
  int threads = 0;
  std::string subset;
  // estimator-specific knobs without dedicated flags; settable from the file
  double s = 0.0;      // tail conditioning threshold, 0 picks 0.8 c_a(n)
  double b = 0.0;      // payoff sampling threshold, 0 picks eta(a)
  double slack = -1.0; // many-hub target reduction, negative picks 0.2 a
  std::vector<double> z{1.0, 2.0};
  double tolerance_scale = 1.0;

  bool operator==(const ExperimentConfig&) const = default;
};

// parse key = value text; '#' starts a comment, blank lines are skipped,
// unknown keys and malformed values raise invalid_argument naming the line
ExperimentConfig parse_config_text(const std::string& text);

ExperimentConfig load_config(const std::string& path);

std::string serialize_config(const ExperimentConfig& c);

// range checks shared by every command; messages quote the violated window
void validate_config(const ExperimentConfig& c);

const std::vector<std::string>& known_modes();

}  // namespace tritail
