#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace bneck {

// One CLI invocation. Unset optionals fall back to the instance file's "run"
// block, then to built-in defaults.
struct RunConfig {
  std::string command;
  std::string instance_path;  // empty: built-in linear example
  std::string output_dir = ".";
  std::optional<double> tol;
  std::optional<long long> grid;
  std::optional<long long> days;
  std::optional<double> epsilon;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<long long> knots;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> alpha;
  std::optional<long long> snapshot_every;
  std::optional<std::uint64_t> seed;
  bool no_timestamp = false;
};

enum ExitCode : int { ok = 0, validation_failure = 2, solver_failure = 3, dynamics_infeasible = 4 };

// Runs one command; a one-line JSON summary goes to `out`, error JSON to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace bneck
