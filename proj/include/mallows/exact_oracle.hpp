#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mallows/errors.hpp"
#include "mallows/permutation.hpp"

namespace mallows {

inline constexpr int kOracleMaxN = 10;
inline constexpr int kOracleTableMaxN = 8;

// Visits every sigma in S_n with its unnormalized weight exp(-beta H(sigma, id)).
// Heap's algorithm; H is updated per transposition. Throws CapabilityError for n > 10.
void for_each_weighted(const ModelParams& params, const std::function<void(const Permutation&, double)>& visit);

// Z = sum over S_n of exp(-beta H(sigma, id)), compensated.
double partition_function(const ModelParams& params);

double exact_probability(const Permutation& sigma, const ModelParams& params);

// E[f(sigma)] under the model, streamed.
double exact_expectation(const ModelParams& params, const Statistic& f);

// Several expectations from one enumeration pass.
std::vector<double> exact_expectations(const ModelParams& params, std::span<const Statistic> stats);

// tail[r] = P(|D_j(sigma)| >= r) for r = 0, ..., n + 1.
std::vector<double> exact_tail_distribution_D(const ModelParams& params, int j);

// Partition function plus, for n <= 8, the full probability table.
class ExactModel {
 public:
  explicit ExactModel(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  double z() const { return z_; }
  bool has_table() const { return table_.has_value(); }
  // Throws CapabilityError when the table was not materialized.
  const std::map<Permutation, double>& table() const;
  double probability(const Permutation& sigma) const;

 private:
  ModelParams params_;
  double z_;
  std::optional<std::map<Permutation, double>> table_;
};

// (1/2) sum_sigma |counts(sigma)/N - p(sigma)|, over all of S_n.
double total_variation_distance(const std::map<Permutation, std::int64_t>& empirical, const ExactModel& exact);

}  // namespace mallows
