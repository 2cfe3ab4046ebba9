#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mallows/permutation.hpp"

namespace mallows::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  std::string kind;  // oracle, sample, arcs, invariants, verify-thm11, verify-thm131, verify-thm12
  ModelParams params{1, 1.0};
  bool has_n = false;     // --n given
  bool has_beta = false;  // --beta / --saturation-beta given
  std::vector<double> beta_grid;
  std::vector<int> n_grid;
  std::optional<std::int64_t> burnin;  // unset: the experiment's default
  std::optional<std::int64_t> thin;
  std::optional<std::int64_t> samples;
  std::optional<int> chains;
  std::optional<int> s;
  std::optional<std::uint64_t> seed;  // unset: drawn from entropy and reported
  std::string emit = "perms";         // sample: perms | stats
  std::string format = "json";        // report format: json | csv
  std::string out_path;               // empty: stdout
  bool trace = false;                 // arcs: emit the event stream only
  int replays = 1000;
  double beta_exponent = -0.6;
};

// Strict parse; throws UsageError on unknown flags, malformed values, or beta <= 0.
ExperimentSpec parse_args(int argc, const char* const* argv);

// Executes the spec, writing the report or dump to `out` (or spec.out_path).
// Returns the process exit status: 0 iff every criterion passed.
int run(const ExperimentSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace mallows::cli
