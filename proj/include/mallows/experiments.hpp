#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mallows/permutation.hpp"
#include "mallows/sampler.hpp"

namespace mallows {

inline constexpr const char* kReportSchema = "mallows-report/1";

// One checked quantity: passes iff |observed - expected| <= tolerance.
// Range criteria [lo, hi] are stored as expected = midpoint, tolerance = half width.
struct CriterionRecord {
  std::string criterion;
  double observed = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

CriterionRecord within(std::string name, double observed, double expected, double tolerance, std::string detail = {});
CriterionRecord in_range(std::string name, double observed, double lo, double hi, std::string detail = {});
CriterionRecord at_most(std::string name, double observed, double bound, std::string detail = {});

struct Report {
  std::string kind;
  nlohmann::json spec = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<CriterionRecord> criteria;
  nlohmann::json data = nlohmann::json::object();
  double wall_seconds = 0.0;

  bool pass() const;
  // Timing lives under "timing" only; everything else is a function of the spec and seed.
  nlohmann::json to_json() const;
};

// ---- exact oracle -------------------------------------------------------

// z, E|C_s|, E diameter_s and E H for every s, and P(|D_j| >= r) for every j.
Report oracle_report(const ModelParams& params);

// Closed-form partition functions at n = 2, 3 and normalization over S_6.
Report check_oracle_exactness();

// ---- sampler validation -------------------------------------------------

struct StationarityRun {
  int n = 5;
  std::vector<double> betas{0.3, 1.0};
  int chains = 4;
  std::int64_t samples_per_chain = 250000;
  double max_tvd = 0.02;
};
Report check_stationarity(const StationarityRun& run, std::uint64_t seed, int threads = 1);

struct ExpectationRun {
  int n = 8;
  std::vector<double> betas{0.25, 1.0, 2.0};
  std::vector<int> points{1, 4};
  int chains = 16;
  std::int64_t samples = 400000;
  double num_se = 3.0;
};
Report check_exact_expectations(const ExpectationRun& run, std::uint64_t seed, int threads = 1);

// ---- pathwise and law invariants ---------------------------------------

struct InvariantsRun {
  std::vector<int> replay_sizes{20, 200};
  int replays = 1000;
  double replay_beta = 0.3;
  std::vector<double> law_betas{0.5, 4.0};
  std::int64_t law_draws = 100000;
  int tail_n = 8;
  std::vector<double> tail_betas{1.0, 2.0};
};
Report run_invariants(const InvariantsRun& run, std::uint64_t seed, int threads = 1);

// ---- theorem experiments -----------------------------------------------

struct ChainPlan {
  std::int64_t burnin = 0;
  std::int64_t thin = 1;
  std::int64_t samples = 1;
  int chains = 1;
};

struct Thm11Run {
  int n = 50000;
  std::vector<double> betas{0.02, 0.04, 0.08};
  ChainPlan plan{500, 10, 400, 8};
  double slope_lo = -2.4;
  double slope_hi = -1.6;

  std::vector<int> saturation_sizes{200, 400, 800};
  double saturation_beta = 0.001;
  ChainPlan saturation_plan{-1, 5, 2000, 8};  // burnin < 0: default_burnin(n)
  double ratio_lo = 0.2;
  double ratio_hi = 0.9;
  double growth_lo = 1.6;
  double growth_hi = 2.4;
};
Report verify_thm11(const Thm11Run& run, std::uint64_t seed, int threads = 1);

struct Thm131Run {
  int n = 100;
  int s = 50;
  std::vector<double> betas{1.5, 2.0, 2.5, 3.0};
  ChainPlan plan{-1, 1, 1000000, 8};
  double slope_lo = -2.5;
  double slope_hi = -1.5;
};
Report verify_thm131(const Thm131Run& run, std::uint64_t seed, int threads = 1);

struct Thm12Run {
  int n = 10000;
  double beta_exponent = -0.6;  // beta_n = n^exponent
  ChainPlan plan{500, 20, 2000, 8};
  int reference_samples = 2000;
  double max_ks_uniform = 0.06;
  double moment_tolerance = 0.05;
  double max_ks_largest = 0.08;
};
Report verify_thm12(const Thm12Run& run, std::uint64_t seed, int threads = 1);

}  // namespace mallows
