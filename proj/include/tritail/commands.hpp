#pragma once

#include <string>

#include "tritail/config.hpp"
#include "tritail/record.hpp"

namespace tritail {

// what a subcommand hands back to main: the record (also printed to stdout),
// the plot-ready table, and the process exit code
struct CommandOutcome {
  ResultRecord record;
  std::string table_csv;
  int exit_code = 0;
};

// closed-form and quadrature outputs for one parameter set: constants, the
// mean over the n grid with the hub threshold and its fitted log slope,
// hub counts and payoff values, and the regime exponents
CommandOutcome run_theory(const ExperimentConfig& c);

// dispatches config.mode to the matching estimator and records every
// Estimate field; optional per-replication JSONL trace for the mean modes
CommandOutcome run_simulate(const ExperimentConfig& c);

// runs the acceptance items (optionally a subset); exit code 1 iff any fail
CommandOutcome run_verify(const ExperimentConfig& c);

}  // namespace tritail
