#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sphspec::cli {

enum ExitCode { ok = 0, malformed_config = 1, validation_failure = 2, numerical_failure = 3 };

// Parsed command line; numeric parameters stay as decimal text until run().
struct RunConfig {
  std::string command;
  std::string l = "0";
  std::string potential;  // empty: q = 0
  std::string bc = "dirichlet";
  std::string alpha = "inf";
  std::string beta = "0";
  int n_max = 10;
  std::string tol = "1e-13";
  std::string out;  // empty: standard output
  std::string format = "csv";
  int mesh = 0;  // oracle grid size; 0 picks it from the step 5e-5
  std::string delta = "1e-4";
  // export-data
  std::string kind = "two-spectra";
  std::string which;  // value | derivative; empty picks by beta
  // mfun
  std::string z_from = "-1e4";
  std::string z_to = "-1e2";
  int points = 25;
  // verify-bounds
  std::string bound = "all";
};

extern const std::vector<std::string> kCommands;

// Runs one command; diagnostics go to err.
int run(const RunConfig& cfg, std::ostream& err);
// Same, with the output stream given (out is ignored).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace sphspec::cli
