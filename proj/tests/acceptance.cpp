// Runs the full acceptance suite at its pinned parameters and prints one
// PASS/FAIL line per criterion. Exit status is 0 iff every criterion passes.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mallows/experiments.hpp"
#include "mallows/sampler.hpp"

using namespace mallows;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::string summary;
};

// Folds the matching records of a report into one verdict.
Outcome fold(const Report& report, const std::function<bool(const std::string&)>& select) {
  Outcome out;
  int used = 0;
  for (const auto& c : report.criteria) {
    if (!select(c.criterion)) continue;
    ++used;
    if (!c.pass) {
      out.pass = false;
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s%s: observed %.6g", out.summary.empty() ? "" : "; ", c.criterion.c_str(),
                    c.observed);
      out.summary += buf;
    }
  }
  if (used == 0) {
    out.pass = false;
    out.summary = "no matching records";
  } else if (out.pass) {
    out.summary = std::to_string(used) + " checks";
  }
  return out;
}

Outcome all_of(const Report& report) {
  return fold(report, [](const std::string&) { return true; });
}

auto contains(std::string needle) {
  return [needle](const std::string& name) { return name.find(needle) != std::string::npos; };
}

std::string first_observed(const Report& report, const std::string& needle) {
  for (const auto& c : report.criteria)
    if (c.criterion.find(needle) != std::string::npos) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4f", c.observed);
      return buf;
    }
  return "n/a";
}

class Suite {
 public:
  void record(int id, const std::string& title, Outcome outcome, double seconds, double limit_seconds) {
    std::string note = outcome.summary;
    if (limit_seconds > 0.0 && seconds >= limit_seconds) {
      outcome.pass = false;
      note += "; runtime over the " + std::to_string(static_cast<int>(limit_seconds)) + " s limit";
    }
    std::printf("[%s] criterion %2d  %-44s %8.2f s  %s\n", outcome.pass ? "PASS" : "FAIL", id, title.c_str(), seconds,
                note.c_str());
    std::fflush(stdout);
    failures_ += outcome.pass ? 0 : 1;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

double since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
  const int threads = worker_threads(8);
  std::printf("acceptance suite: seed %llu, %d worker thread(s)\n", static_cast<unsigned long long>(kSeed), threads);
  Suite suite;
  using clock = std::chrono::steady_clock;

  {
    const auto t0 = clock::now();
    const auto report = check_oracle_exactness();
    suite.record(1, "oracle exactness", all_of(report), since(t0), 1.0);
  }
  {
    const auto t0 = clock::now();
    const auto report = check_stationarity(StationarityRun{}, kSeed, threads);
    auto outcome = all_of(report);
    if (outcome.pass) outcome.summary += ", worst TVD " + first_observed(report, "beta=0.3");
    suite.record(2, "sampler stationarity (TVD <= 0.02)", outcome, since(t0), 120.0);
  }
  {
    const auto t0 = clock::now();
    const auto report = check_exact_expectations(ExpectationRun{}, kSeed, threads);
    suite.record(3, "exact expectation match (3 SE)", all_of(report), since(t0), 300.0);
  }

  Thm11Run exponent_run;
  exponent_run.saturation_sizes.clear();
  Thm11Run saturation_run;
  saturation_run.betas.clear();
  {
    const auto t0 = clock::now();
    const auto report = verify_thm11(exponent_run, kSeed, threads);
    auto outcome = all_of(report);
    outcome.summary += ", slope " + first_observed(report, "slope");
    suite.record(4, "cycle length exponent in beta", outcome, since(t0), 1800.0);
  }
  {
    const auto t0 = clock::now();
    const auto report = verify_thm11(saturation_run, kSeed, threads);
    suite.record(5, "cycle length saturation at n", all_of(report), since(t0), 0.0);
  }
  {
    const auto t0 = clock::now();
    const auto report = verify_thm131(Thm131Run{}, kSeed, threads);
    auto outcome = all_of(report);
    outcome.summary += ", slope " + first_observed(report, "slope");
    suite.record(6, "large-beta diameter decay", outcome, since(t0), 1200.0);
  }
  {
    const auto t0 = clock::now();
    const auto report = verify_thm12(Thm12Run{}, kSeed, threads);
    const double seconds = since(t0);
    auto uniform = fold(report, contains("U(0,1)"));
    uniform.summary += ", D " + first_observed(report, "U(0,1)");
    suite.record(7, "uniform limit of |C_s|/n (KS)", uniform, seconds, 0.0);
    auto pd = fold(report, [](const std::string& name) {
      return name.find("sum (l_i/n)^2") != std::string::npos || name.find("PD(1)") != std::string::npos;
    });
    pd.summary += ", moment " + first_observed(report, "sum (l_i/n)^2") + ", D " + first_observed(report, "PD(1)");
    suite.record(8, "Poisson-Dirichlet moment and largest cycle", pd, seconds, 0.0);
  }
  {
    const auto t0 = clock::now();
    const auto report = run_invariants(InvariantsRun{}, kSeed, threads);
    const double seconds = since(t0);
    suite.record(9, "arc invariants over replays", fold(report, [](const std::string& name) {
                   return name.find("arc partition") != std::string::npos ||
                          name.find("walk terminal") != std::string::npos ||
                          name.find("cutoff floor") != std::string::npos;
                 }),
                 seconds, 0.0);
    suite.record(10, "cutoff law at three quantiles", fold(report, contains("P(b_j")), seconds, 0.0);
    suite.record(11, "exact tail decay ratio", fold(report, contains("max tail(r+1)/tail(r)")), seconds, 0.0);
  }

  std::printf("%s: %d failing criteria\n", suite.failures() == 0 ? "ALL PASS" : "FAILURES", suite.failures());
  return suite.failures() == 0 ? 0 : 1;
}
