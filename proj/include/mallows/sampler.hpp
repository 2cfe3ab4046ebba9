#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mallows/errors.hpp"
#include "mallows/permutation.hpp"
#include "mallows/rng.hpp"

namespace mallows {

// Randomized cutoffs of one hit-and-run step: place i may receive any symbol
// k <= b[i]. counts[j-1] = N_j, the number of eligible unused places when
// symbol j is placed.
struct Bounds {
  std::vector<double> b;
  std::vector<int> counts;
};

// y[k-1] = Y_k, the place receiving symbol k; result(Y_k) = k.
struct PlacementTrace {
  std::vector<int> y;
  Permutation result;
};

// b_j = max{j, sigma0(j)} + E_j / (2 beta), E_j iid Exp(1). Same law as drawing
// u_j ~ U[0, exp(-2 beta (sigma0(j) - j)_+)] and setting b_j = j - log(u_j) / (2 beta),
// without underflow at large beta * displacement.
Bounds sample_bounds(const Permutation& sigma0, double beta, CounterRng& rng);

// Deterministic core of sample_bounds for fixed unit-rate exponential draws.
Bounds bounds_from_draws(const Permutation& sigma0, double beta, std::span<const double> unit_exponentials);

// N_j = |{k : b_k >= j}| - n + j. Throws InvariantError if some b_j < j.
std::vector<int> counts_from_bounds(std::span<const double> b);

// Places symbols n, n-1, ..., 1, each uniformly among the unused places i with
// b_i >= symbol. The result is uniform on {tau : tau(i) <= b_i for all i}.
PlacementTrace place_symbols(std::span<const double> b, CounterRng& rng);

Permutation hit_and_run_step(const Permutation& sigma, double beta, CounterRng& rng);

// Allocation-free hit-and-run transition for chain loops. One kernel per chain.
class HitAndRunKernel {
 public:
  HitAndRunKernel(int n, double beta);

  int size() const { return n_; }
  double beta() const { return beta_; }

  // Advances `images` (one-based values, bijection of [n]) by one step in place.
  void step(std::vector<int>& images, CounterRng& rng);

  // Cutoffs drawn by the last step().
  std::span<const double> last_bounds() const { return b_; }
  // Places chosen by the last step(): y[k-1] = Y_k.
  std::span<const int> last_placement() const { return y_; }

 private:
  int n_;
  double inv_two_beta_;
  double beta_;
  std::vector<double> b_;
  std::vector<int> bucket_start_;
  std::vector<int> by_level_;
  std::vector<int> pool_;
  std::vector<int> y_;
};

struct ChainConfig {
  ModelParams params;
  std::int64_t burnin = 0;
  std::int64_t thin = 1;
  std::int64_t samples = 1;
  std::uint64_t master_seed = 0;
  int chains = 1;

  void validate() const;
  // Samples produced by chain c: the total is split as evenly as possible,
  // lower chain ids taking the remainder.
  std::int64_t samples_for_chain(int chain) const;
};

// 10 * n * ceil(log2(n + 1)).
std::int64_t default_burnin(int n);

struct ChainSample {
  int chain;
  std::int64_t step;
  Permutation state;
};

// Observer invoked once per emitted state. Calls for one chain are sequential
// and in step order; different chains may be observed from different threads.
using SampleObserver = std::function<void(int chain, std::int64_t step, const Permutation& state)>;

// Runs `config.chains` independent chains from the identity. Each chain applies
// `burnin` steps, then emits the state after every further `thin` steps. Step t
// of chain c draws from CounterRng::stream(master_seed, c, t), so the emitted
// states do not depend on `threads`.
void for_each_sample(const ChainConfig& config, const SampleObserver& observe, int threads = 1);

// All samples ordered by (chain, step).
std::vector<ChainSample> run_chain(const ChainConfig& config, int threads = 1);

// Thread count from MALLOWS_THREADS, capped by hardware concurrency and `cap`.
int worker_threads(int cap);

}  // namespace mallows
