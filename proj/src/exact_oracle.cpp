#include "mallows/exact_oracle.hpp"

#include <cmath>
#include <string>

#include "mallows/numeric.hpp"

namespace mallows {
namespace {

void require_enumerable(const ModelParams& params) {
  params.validate();
  if (params.n > kOracleMaxN)
    throw CapabilityError("exact oracle enumerates S_n only for n <= " + std::to_string(kOracleMaxN) +
                          " (requested n = " + std::to_string(params.n) + "); use the sampler instead");
}

// exp(-beta h) for h = 0 .. max H over S_n.
std::vector<double> weight_table(const ModelParams& params) {
  const int max_h = params.n * params.n / 2;
  std::vector<double> w(static_cast<std::size_t>(max_h) + 1);
  for (int h = 0; h <= max_h; ++h) w[static_cast<std::size_t>(h)] = std::exp(-params.beta * h);
  return w;
}

}  // namespace

void for_each_weighted(const ModelParams& params, const std::function<void(const Permutation&, double)>& visit) {
  require_enumerable(params);
  const int n = params.n;
  const auto weights = weight_table(params);
  std::vector<int> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = i + 1;
  int h = 0;

  auto emit = [&] { visit(Permutation::from_trusted(a), weights[static_cast<std::size_t>(h)]); };
  auto swap_positions = [&](int p, int q) {
    auto& x = a[static_cast<std::size_t>(p)];
    auto& y = a[static_cast<std::size_t>(q)];
    h -= std::abs(x - (p + 1)) + std::abs(y - (q + 1));
    std::swap(x, y);
    h += std::abs(x - (p + 1)) + std::abs(y - (q + 1));
  };

  // Iterative Heap's algorithm: consecutive permutations differ by one swap.
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  emit();
  int i = 1;
  while (i < n) {
    auto& ci = c[static_cast<std::size_t>(i)];
    if (ci < i) {
      swap_positions(i % 2 == 0 ? 0 : ci, i);
      emit();
      ++ci;
      i = 1;
    } else {
      ci = 0;
      ++i;
    }
  }
}

double partition_function(const ModelParams& params) {
  CompensatedSum z;
  for_each_weighted(params, [&](const Permutation&, double w) { z += w; });
  return z.value();
}

double exact_probability(const Permutation& sigma, const ModelParams& params) {
  if (sigma.size() != params.n) throw std::invalid_argument("exact_probability: permutation size differs from n");
  const double z = partition_function(params);
  return std::exp(-params.beta * static_cast<double>(l1_to_identity(sigma))) / z;
}

std::vector<double> exact_expectations(const ModelParams& params, std::span<const Statistic> stats) {
  CompensatedSum z;
  std::vector<CompensatedSum> acc(stats.size());
  for_each_weighted(params, [&](const Permutation& sigma, double w) {
    z += w;
    for (std::size_t k = 0; k < stats.size(); ++k) acc[k] += w * stats[k](sigma);
  });
  std::vector<double> out(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) out[k] = acc[k].value() / z.value();
  return out;
}

double exact_expectation(const ModelParams& params, const Statistic& f) {
  return exact_expectations(params, std::span<const Statistic>(&f, 1)).front();
}

std::vector<double> exact_tail_distribution_D(const ModelParams& params, int j) {
  require_enumerable(params);
  const int n = params.n;
  if (j < 1 || j > n) throw std::invalid_argument("exact_tail_distribution_D: j outside [n]");
  CompensatedSum z;
  std::vector<CompensatedSum> mass(static_cast<std::size_t>(n) + 2);
  for_each_weighted(params, [&](const Permutation& sigma, double w) {
    z += w;
    mass[static_cast<std::size_t>(displacement_count(sigma, j).below)] += w;
  });
  std::vector<double> tail(static_cast<std::size_t>(n) + 2, 0.0);
  CompensatedSum running;
  for (int r = n + 1; r >= 0; --r) {
    running += mass[static_cast<std::size_t>(r)].value();
    tail[static_cast<std::size_t>(r)] = running.value() / z.value();
  }
  tail[0] = 1.0;
  return tail;
}

ExactModel::ExactModel(const ModelParams& params) : params_(params) {
  require_enumerable(params);
  CompensatedSum z;
  if (params.n <= kOracleTableMaxN) {
    std::map<Permutation, double> table;
    for_each_weighted(params, [&](const Permutation& sigma, double w) {
      z += w;
      table.emplace(sigma, w);
    });
    z_ = z.value();
    for (auto& [sigma, p] : table) p /= z_;
    table_ = std::move(table);
  } else {
    for_each_weighted(params, [&](const Permutation&, double w) { z += w; });
    z_ = z.value();
  }
}

const std::map<Permutation, double>& ExactModel::table() const {
  if (!table_)
    throw CapabilityError("probability table is materialized only for n <= " + std::to_string(kOracleTableMaxN));
  return *table_;
}

double ExactModel::probability(const Permutation& sigma) const {
  if (sigma.size() != params_.n) throw std::invalid_argument("ExactModel::probability: size mismatch");
  return std::exp(-params_.beta * static_cast<double>(l1_to_identity(sigma))) / z_;
}

double total_variation_distance(const std::map<Permutation, std::int64_t>& empirical, const ExactModel& exact) {
  const auto& table = exact.table();
  std::int64_t total = 0;
  for (const auto& [sigma, count] : empirical) {
    if (sigma.size() != exact.params().n) throw std::invalid_argument("total_variation_distance: n mismatch");
    if (count < 0) throw std::invalid_argument("total_variation_distance: negative frequency");
    total += count;
  }
  if (total == 0) throw std::invalid_argument("total_variation_distance: empty empirical distribution");
  CompensatedSum dist;
  for (const auto& [sigma, p] : table) {
    const auto it = empirical.find(sigma);
    const double q = it == empirical.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
    dist += std::abs(q - p);
  }
  return 0.5 * dist.value();
}

}  // namespace mallows
