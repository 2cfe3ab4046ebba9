#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mallows/permutation.hpp"
#include "mallows/rng.hpp"
#include "mallows/sampler.hpp"

namespace mallows {

struct CycleSummary {
  int n = 0;
  std::vector<int> sorted_lengths;  // nonincreasing, sums to n
  int s = 0;
  int len_at_s = 0;       // |C_s|
  int diameter_at_s = 0;  // max C_s - min C_s
};

CycleSummary summarize(const Permutation& sigma, int s);

// count / sum / sum of squares; merges associatively.
class MomentAccumulator {
 public:
  void add(double x) {
    ++count_;
    sum_ += x;
    sum_sq_ += x * x;
  }
  void merge(const MomentAccumulator& other) {
    count_ += other.count_;
    sum_ += other.sum_;
    sum_sq_ += other.sum_sq_;
  }
  std::int64_t count() const { return count_; }
  double mean() const { return count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_); }
  // Unbiased sample variance; 0 for fewer than two observations.
  double variance() const;

 private:
  std::int64_t count_ = 0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t count = 0;
};

// Pooled mean of all observations with a standard error taken from the
// spread of the per-group (per-chain) means. One group gives std_error 0.
EstimateWithError between_group_estimate(std::span<const MomentAccumulator> groups);

// Plain mean and SE of iid observations.
EstimateWithError iid_estimate(const MomentAccumulator& acc);

// Monte Carlo mean of f over the chain samples, SE across chains.
EstimateWithError estimate_statistic(const ChainConfig& config, const Statistic& f, int threads = 1);
EstimateWithError estimate_cycle_length(const ChainConfig& config, int s, int threads = 1);
EstimateWithError estimate_cycle_diameter(const ChainConfig& config, int s, int threads = 1);

// Row i holds l_k(sigma_i) / n for k = 1..K, zero padded.
std::vector<std::vector<double>> normalized_sorted_lengths(std::span<const Permutation> samples, int k);
std::vector<double> normalized_sorted_lengths(const Permutation& sigma, int k);

// GEM(1) stick-breaking masses U_i * prod_{j<i} (1 - U_j) in stick order,
// stopping once the residual mass drops below `residual`.
std::vector<double> gem_sticks(CounterRng& rng, double residual = 1e-12);
// Same masses sorted nonincreasing: a Poisson-Dirichlet(1) sample.
std::vector<double> gem_stick_breaking(CounterRng& rng, double residual = 1e-12);

// Fisher-Yates uniform permutation.
Permutation uniform_permutation(int n, CounterRng& rng);
CycleSummary uniform_permutation_reference(int n, CounterRng& rng, int s = 1);

struct KsResult {
  double d = 0.0;
  double p_value = 1.0;
};

// Kolmogorov's limiting survival function Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2), 40 terms.
double kolmogorov_survival(double lambda);

KsResult ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);
KsResult ks_uniform(std::span<const double> sample);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probabilities);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of y on x. Needs at least two distinct x.
SlopeFit least_squares_slope(std::span<const double> x, std::span<const double> y);

// Slope of log y against log x. Coordinates must be positive.
SlopeFit loglog_slope(std::span<const std::pair<double, double>> points);

// Slope of log y against x (exponential-rate fit). y must be positive.
SlopeFit semilog_slope(std::span<const std::pair<double, double>> points);

}  // namespace mallows
