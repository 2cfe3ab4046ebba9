#include "mallows/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

namespace mallows {
namespace {

// Integer level of a cutoff: the largest symbol k <= n with b >= k.
inline int level_of(double b, int n) {
  if (b >= static_cast<double>(n)) return n;
  return static_cast<int>(std::floor(b));
}

// Fills y[k-1] = Y_k. Places enter the eligible pool when the symbol being
// placed drops to their level; a uniform pool member is drawn and swap-removed.
// `start` needs n + 2 slots, `by_level` n slots.
void place(std::span<const double> b, CounterRng& rng, std::vector<int>& start, std::vector<int>& by_level,
           std::vector<int>& pool, std::span<int> y) {
  const int n = static_cast<int>(b.size());
  start.assign(static_cast<std::size_t>(n) + 2, 0);
  by_level.resize(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const int lv = level_of(b[static_cast<std::size_t>(i - 1)], n);
    if (lv < 1) throw InvariantError("cutoff below 1: place " + std::to_string(i) + " can receive no symbol");
    ++start[static_cast<std::size_t>(lv) + 1];
  }
  for (int lv = 1; lv <= n; ++lv) start[static_cast<std::size_t>(lv) + 1] += start[static_cast<std::size_t>(lv)];
  // start[lv] is now the offset of bucket lv; fill in increasing place order.
  // Counting sort of places by level; pool doubles as the cursor array.
  pool.assign(start.begin(), start.end());
  for (int i = 1; i <= n; ++i) {
    const int lv = level_of(b[static_cast<std::size_t>(i - 1)], n);
    by_level[static_cast<std::size_t>(pool[static_cast<std::size_t>(lv)]++)] = i;
  }
  pool.clear();
  for (int k = n; k >= 1; --k) {
    for (int idx = start[static_cast<std::size_t>(k)]; idx < start[static_cast<std::size_t>(k) + 1]; ++idx)
      pool.push_back(by_level[static_cast<std::size_t>(idx)]);
    if (pool.empty())
      throw InvariantError("no eligible place for symbol " + std::to_string(k) + " (some b_j < j)");
    const auto pick = static_cast<std::size_t>(rng.below(pool.size()));
    y[static_cast<std::size_t>(k - 1)] = pool[pick];
    pool[pick] = pool.back();
    pool.pop_back();
  }
}

}  // namespace

Bounds bounds_from_draws(const Permutation& sigma0, double beta, std::span<const double> unit_exponentials) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  const int n = sigma0.size();
  if (static_cast<int>(unit_exponentials.size()) != n)
    throw std::invalid_argument("bounds_from_draws: need one exponential draw per place");
  Bounds out;
  out.b.resize(static_cast<std::size_t>(n));
  const double scale = 1.0 / (2.0 * beta);
  for (int j = 1; j <= n; ++j) {
    const double e = unit_exponentials[static_cast<std::size_t>(j - 1)];
    if (!(e >= 0.0)) throw std::invalid_argument("bounds_from_draws: exponential draws must be >= 0");
    out.b[static_cast<std::size_t>(j - 1)] = static_cast<double>(std::max(j, sigma0(j))) + e * scale;
  }
  out.counts = counts_from_bounds(out.b);
  return out;
}

Bounds sample_bounds(const Permutation& sigma0, double beta, CounterRng& rng) {
  std::vector<double> draws(static_cast<std::size_t>(sigma0.size()));
  for (auto& d : draws) d = rng.exponential();
  return bounds_from_draws(sigma0, beta, draws);
}

std::vector<int> counts_from_bounds(std::span<const double> b) {
  const int n = static_cast<int>(b.size());
  // at_level[lv] = #{k : level(b_k) == lv}; suffix sums give #{k : b_k >= j}.
  std::vector<int> at_level(static_cast<std::size_t>(n) + 2, 0);
  for (int k = 1; k <= n; ++k) {
    const double bk = b[static_cast<std::size_t>(k - 1)];
    if (!(bk >= static_cast<double>(k)))
      throw InvariantError("counts_from_bounds: b_" + std::to_string(k) + " < " + std::to_string(k));
    ++at_level[static_cast<std::size_t>(level_of(bk, n))];
  }
  std::vector<int> counts(static_cast<std::size_t>(n));
  int at_least = 0;
  for (int j = n; j >= 1; --j) {
    at_least += at_level[static_cast<std::size_t>(j)];
    counts[static_cast<std::size_t>(j - 1)] = at_least - n + j;
  }
  return counts;
}

PlacementTrace place_symbols(std::span<const double> b, CounterRng& rng) {
  const int n = static_cast<int>(b.size());
  if (n < 1) throw std::invalid_argument("place_symbols: empty cutoff vector");
  std::vector<int> start, by_level, pool;
  std::vector<int> y(static_cast<std::size_t>(n));
  place(b, rng, start, by_level, pool, y);
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) images[static_cast<std::size_t>(y[static_cast<std::size_t>(k - 1)] - 1)] = k;
  return PlacementTrace{std::move(y), Permutation::from_trusted(std::move(images))};
}

Permutation hit_and_run_step(const Permutation& sigma, double beta, CounterRng& rng) {
  HitAndRunKernel kernel(sigma.size(), beta);
  std::vector<int> images(sigma.images().begin(), sigma.images().end());
  kernel.step(images, rng);
  return Permutation::from_trusted(std::move(images));
}

HitAndRunKernel::HitAndRunKernel(int n, double beta)
    : n_(n), inv_two_beta_(1.0 / (2.0 * beta)), beta_(beta) {
  ModelParams{n, beta}.validate();
  b_.resize(static_cast<std::size_t>(n));
  y_.resize(static_cast<std::size_t>(n));
}

void HitAndRunKernel::step(std::vector<int>& images, CounterRng& rng) {
  assert(static_cast<int>(images.size()) == n_);
  for (int i = 1; i <= n_; ++i) {
    const int floor_i = std::max(i, images[static_cast<std::size_t>(i - 1)]);
    b_[static_cast<std::size_t>(i - 1)] = static_cast<double>(floor_i) + rng.exponential() * inv_two_beta_;
  }
  place(b_, rng, bucket_start_, by_level_, pool_, y_);
  for (int k = 1; k <= n_; ++k) images[static_cast<std::size_t>(y_[static_cast<std::size_t>(k - 1)] - 1)] = k;
}

void ChainConfig::validate() const {
  params.validate();
  if (burnin < 0) throw std::invalid_argument("burnin must be >= 0");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (chains < 1) throw std::invalid_argument("chains must be >= 1");
}

std::int64_t ChainConfig::samples_for_chain(int chain) const {
  const std::int64_t base = samples / chains;
  return base + (chain < samples % chains ? 1 : 0);
}

std::int64_t default_burnin(int n) {
  const auto logn = static_cast<std::int64_t>(std::ceil(std::log2(static_cast<double>(n) + 1.0)));
  return 10 * static_cast<std::int64_t>(n) * logn;
}

void for_each_sample(const ChainConfig& config, const SampleObserver& observe, int threads) {
  config.validate();
  const int n = config.params.n;
  auto run_one = [&](int chain) {
    HitAndRunKernel kernel(n, config.params.beta);
    std::vector<int> images(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i + 1;
    std::int64_t t = 0;
    auto advance = [&] {
      ++t;
      CounterRng rng = CounterRng::stream(config.master_seed, static_cast<std::uint64_t>(chain), static_cast<std::uint64_t>(t));
      kernel.step(images, rng);
    };
    for (std::int64_t i = 0; i < config.burnin; ++i) advance();
    const std::int64_t want = config.samples_for_chain(chain);
    for (std::int64_t emitted = 0; emitted < want; ++emitted) {
      for (std::int64_t i = 0; i < config.thin; ++i) advance();
      observe(chain, t, Permutation::from_trusted(images));
    }
  };

  threads = std::clamp(threads, 1, config.chains);
  if (threads == 1) {
    for (int c = 0; c < config.chains; ++c) run_one(c);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int c = next++; c < config.chains; c = next++) {
        try {
          run_one(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<ChainSample> run_chain(const ChainConfig& config, int threads) {
  std::vector<std::vector<ChainSample>> per_chain(static_cast<std::size_t>(std::max(config.chains, 1)));
  for_each_sample(
      config,
      [&](int chain, std::int64_t step, const Permutation& state) {
        per_chain[static_cast<std::size_t>(chain)].push_back(ChainSample{chain, step, state});
      },
      threads);
  std::vector<ChainSample> out;
  out.reserve(static_cast<std::size_t>(config.samples));
  for (auto& chain : per_chain)
    for (auto& s : chain) out.push_back(std::move(s));
  return out;
}

int worker_threads(int cap) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("MALLOWS_THREADS")) {
    const int requested = std::atoi(env);
    if (requested >= 1) hw = std::min(hw, requested);
  }
  return std::clamp(cap, 1, hw);
}

}  // namespace mallows
