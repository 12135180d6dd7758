#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace tritail {

// knobs for the acceptance run. tolerance_scale multiplies every tolerance
// band, so 1 is the shipped gate and 0 makes every comparison fail on
// purpose. Items carry their own reference seeds; the run is deterministic.
struct AcceptanceOptions {
  double tolerance_scale = 1.0;
  std::ostream* log = nullptr;  // per-item pass/fail lines as they finish
};

struct AcceptanceResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;  // measured numbers and the band they were held to
};

// stable id -> name listing of every acceptance item
std::vector<std::pair<int, std::string>> acceptance_items();

// subset selects what runs: "" or "all", "theory-only" (closed-form and
// quadrature items), "simulation-only", or a comma list of item ids
std::vector<AcceptanceResult> run_acceptance(const AcceptanceOptions& opts = {},
                                             const std::string& subset = "");

bool all_passed(const std::vector<AcceptanceResult>& results);

}  // namespace tritail
