// runs the acceptance checklist end to end: one pass/fail line per item as
// it finishes, then a summary. Exit status 0 only if every selected item
// passed. An optional first argument selects a subset (all, theory-only,
// simulation-only, or a comma list of ids).
#include <cstdio>
#include <iostream>
#include <string>

#include "tritail/verify.hpp"

int main(int argc, char** argv) {
  std::string subset = argc > 1 ? argv[1] : "";
  tritail::AcceptanceOptions opts;
  opts.log = &std::cout;
  std::vector<tritail::AcceptanceResult> results;
  try {
    results = tritail::run_acceptance(opts, subset);
  } catch (const std::exception& e) {
    std::cerr << "acceptance run failed to start: " << e.what() << "\n";
    return 2;
  }
  int passed = 0;
  double total = 0.0;
  for (const tritail::AcceptanceResult& r : results) {
    if (r.passed) passed += 1;
    total += r.seconds;
  }
  std::printf("%d of %zu items passed in %.1f s\n", passed, results.size(), total);
  return tritail::all_passed(results) ? 0 : 1;
}
