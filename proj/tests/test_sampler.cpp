#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mallows/exact_oracle.hpp"
#include "mallows/sampler.hpp"
#include "mallows/stats.hpp"

using namespace mallows;

TEST_SUITE("sampler") {
  TEST_CASE("bounds from fixed exponential draws") {
    const std::vector<double> draws{1.0, 1.0};
    const auto bounds = bounds_from_draws(Permutation(2), 0.5, draws);
    CHECK(bounds.b == std::vector<double>{2.0, 3.0});
    CHECK(bounds.counts == std::vector<int>{1, 2});

    const auto shifted = bounds_from_draws(Permutation({3, 1, 2}), 1.0, std::vector<double>{0.0, 0.0, 0.0});
    CHECK(shifted.b == std::vector<double>{3.0, 2.0, 3.0});
    CHECK_THROWS_AS(bounds_from_draws(Permutation(2), 0.5, std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(bounds_from_draws(Permutation(2), 0.0, draws), std::invalid_argument);
  }

  TEST_CASE("cutoffs respect the floor max{j, sigma0(j)}") {
    const Permutation sigma0({4, 1, 5, 2, 3});
    for (std::uint64_t t = 0; t < 200; ++t) {
      CounterRng rng = CounterRng::stream(3, 0, t);
      const auto bounds = sample_bounds(sigma0, 0.8, rng);
      for (int j = 1; j <= 5; ++j) CHECK(bounds.b[static_cast<std::size_t>(j - 1)] >= std::max(j, sigma0(j)));
    }
  }

  TEST_CASE("large beta forces the identity") {
    CounterRng rng(17);
    const auto bounds = sample_bounds(Permutation(6), 1e6, rng);
    for (int j = 1; j <= 6; ++j) CHECK(bounds.b[static_cast<std::size_t>(j - 1)] < j + 1e-3);
    CHECK(place_symbols(bounds.b, rng).result.is_identity());
  }

  TEST_CASE("b_1 - 1 has mean 1/(2 beta)") {
    MomentAccumulator acc;
    for (std::uint64_t t = 0; t < 100000; ++t) {
      CounterRng rng = CounterRng::stream(9, 1, t);
      acc.add(sample_bounds(Permutation(1), 1.0, rng).b[0] - 1.0);
    }
    const auto est = iid_estimate(acc);
    CHECK(std::abs(est.mean - 0.5) <= 3.0 * est.std_error);
  }

  TEST_CASE("survival of b_j matches exp(-2 beta (x - max{j, sigma0(j)})+)") {
    const Permutation sigma0({3, 1, 5, 2, 4});
    const double beta = 0.6;
    constexpr std::int64_t draws = 100000;
    for (int j = 1; j <= 5; ++j) {
      const int floor_j = std::max(j, sigma0(j));
      for (int offset : {0, 1, 3}) {
        const double x = j + offset;
        std::int64_t hits = 0;
        for (std::int64_t t = 0; t < draws; ++t) {
          CounterRng rng = CounterRng::stream(21, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(t));
          if (sample_bounds(sigma0, beta, rng).b[static_cast<std::size_t>(j - 1)] >= x) ++hits;
        }
        const double p = std::exp(-2.0 * beta * std::max(0.0, x - floor_j));
        const double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / draws);
        CHECK(std::abs(static_cast<double>(hits) / draws - p) <= 3.0 * se + 1e-12);
      }
    }
  }

  TEST_CASE("counts_from_bounds examples and identities") {
    CHECK(counts_from_bounds(std::vector<double>{1.2, 2.3}) == std::vector<int>{1, 1});
    CHECK(counts_from_bounds(std::vector<double>{2.5, 2.1}) == std::vector<int>{1, 2});
    CHECK_THROWS_AS(counts_from_bounds(std::vector<double>{0.9, 2.0}), InvariantError);
    CHECK_THROWS_AS(counts_from_bounds(std::vector<double>{1.0, 1.5}), InvariantError);

    CounterRng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(30));
      std::vector<double> b(static_cast<std::size_t>(n));
      for (int j = 1; j <= n; ++j) b[static_cast<std::size_t>(j - 1)] = j + rng.exponential() * 4.0;
      const auto counts = counts_from_bounds(b);
      CHECK(counts[0] == 1);
      for (int j = 1; j <= n; ++j) {
        int earlier = 0;
        int total = 0;
        for (int k = 1; k <= n; ++k) {
          const bool reach = b[static_cast<std::size_t>(k - 1)] >= j;
          total += reach;
          if (k < j) earlier += reach;
        }
        CHECK(counts[static_cast<std::size_t>(j - 1)] == 1 + earlier);
        CHECK(counts[static_cast<std::size_t>(j - 1)] == total - n + j);
      }
    }
  }

  TEST_CASE("place_symbols examples") {
    CounterRng rng(1);
    const auto forced = place_symbols(std::vector<double>{1.2, 2.3}, rng);
    CHECK(forced.y == std::vector<int>{1, 2});
    CHECK(forced.result.is_identity());

    int identity = 0;
    constexpr int draws = 100000;
    const std::vector<double> b{2.5, 2.3};
    for (int t = 0; t < draws; ++t) identity += place_symbols(b, rng).result.is_identity();
    CHECK(std::abs(identity / double(draws) - 0.5) < 0.01);

    CHECK_THROWS_AS(place_symbols(std::vector<double>{1.5, 1.5}, rng), InvariantError);
    CHECK_THROWS_AS(place_symbols(std::vector<double>{}, rng), std::invalid_argument);
  }

  TEST_CASE("placement is feasible and a bijection") {
    CounterRng rng(99);
    for (int trial = 0; trial < 500; ++trial) {
      constexpr int n = 20;
      std::vector<double> b(n);
      for (int j = 1; j <= n; ++j) b[static_cast<std::size_t>(j - 1)] = j + rng.exponential() * 2.5;
      const auto trace = place_symbols(b, rng);
      CHECK(is_bijection(trace.y));
      for (int i = 1; i <= n; ++i) CHECK(trace.result(i) <= b[static_cast<std::size_t>(i - 1)]);
      for (int k = 1; k <= n; ++k) CHECK(trace.result(trace.y[static_cast<std::size_t>(k - 1)]) == k);
    }
  }

  TEST_CASE("placement is uniform on the feasible set") {
    const std::vector<double> b{2.7, 3.1, 4.5, 4.2, 5.0};
    // Enumerate the feasible set directly.
    std::vector<int> a{1, 2, 3, 4, 5};
    std::vector<Permutation> feasible;
    do {
      bool ok = true;
      for (int i = 0; i < 5; ++i) ok = ok && a[static_cast<std::size_t>(i)] <= b[static_cast<std::size_t>(i)];
      if (ok) feasible.emplace_back(a);
    } while (std::next_permutation(a.begin(), a.end()));
    REQUIRE(feasible.size() > 4);

    std::map<Permutation, std::int64_t> counts;
    CounterRng rng(4);
    constexpr int draws = 200000;
    for (int t = 0; t < draws; ++t) ++counts[place_symbols(b, rng).result];
    CHECK(counts.size() == feasible.size());
    std::vector<std::int64_t> observed;
    for (const auto& p : feasible) observed.push_back(counts[p]);
    const std::vector<double> probs(feasible.size(), 1.0 / static_cast<double>(feasible.size()));
    CHECK(chi_square_gof(observed, probs).p_value > 0.001);
  }

  TEST_CASE("hit_and_run_step basics") {
    CounterRng rng(5);
    for (int t = 0; t < 10; ++t) CHECK(hit_and_run_step(Permutation(1), 0.3, rng).is_identity());

    int stayed = 0;
    constexpr int draws = 10000;
    for (int t = 0; t < draws; ++t) stayed += hit_and_run_step(Permutation(8), 10.0, rng).is_identity();
    CHECK(stayed >= 0.99 * draws);
  }

  TEST_CASE("one step preserves the model (n=4, beta=0.7)") {
    const ExactModel exact({4, 0.7});
    std::vector<Permutation> states;
    std::vector<double> cdf;
    double running = 0.0;
    for (const auto& [sigma, p] : exact.table()) {
      states.push_back(sigma);
      running += p;
      cdf.push_back(running);
    }
    HitAndRunKernel kernel(4, 0.7);
    std::map<Permutation, std::int64_t> counts;
    std::vector<int> images(4);
    for (std::uint64_t t = 0; t < 1000000; ++t) {
      CounterRng rng = CounterRng::stream(8, 0, t);
      const double u = rng.uniform() * running;
      const auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      const auto& start = states[std::min(idx, states.size() - 1)];
      std::copy(start.images().begin(), start.images().end(), images.begin());
      kernel.step(images, rng);
      ++counts[Permutation::from_trusted(images)];
    }
    const double tvd = total_variation_distance(counts, exact);
    MESSAGE("one-step TVD " << tvd);
    CHECK(tvd <= 0.01);
  }

  TEST_CASE("chain config") {
    ChainConfig c;
    c.params = {5, 1.0};
    c.samples = 10;
    c.chains = 4;
    CHECK(c.samples_for_chain(0) == 3);
    CHECK(c.samples_for_chain(1) == 3);
    CHECK(c.samples_for_chain(2) == 2);
    CHECK(c.samples_for_chain(3) == 2);
    CHECK(default_burnin(5) == 150);
    CHECK(default_burnin(1) == 10);
    c.thin = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.thin = 1;
    c.burnin = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }

  TEST_CASE("run_chain emits consecutive states") {
    ChainConfig c;
    c.params = {12, 0.4};
    c.samples = 3;
    c.master_seed = 42;
    const auto out = run_chain(c);
    REQUIRE(out.size() == 3);
    std::vector<int> images(12);
    std::iota(images.begin(), images.end(), 1);
    HitAndRunKernel kernel(12, 0.4);
    for (std::int64_t t = 1; t <= 3; ++t) {
      CounterRng rng = CounterRng::stream(42, 0, static_cast<std::uint64_t>(t));
      kernel.step(images, rng);
      CHECK(out[static_cast<std::size_t>(t - 1)].step == t);
      CHECK(out[static_cast<std::size_t>(t - 1)].chain == 0);
      CHECK(out[static_cast<std::size_t>(t - 1)].state == Permutation(images));
    }
  }

  TEST_CASE("run_chain is deterministic and schedule independent") {
    ChainConfig c;
    c.params = {50, 0.01};
    c.burnin = 5;
    c.thin = 2;
    c.samples = 12;
    c.chains = 3;
    c.master_seed = 2024;
    const auto a = run_chain(c, 1);
    const auto b = run_chain(c, 1);
    const auto threaded = run_chain(c, 3);
    REQUIRE(a.size() == 12);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].state == b[i].state);
      CHECK(a[i].state == threaded[i].state);
      CHECK(a[i].step == threaded[i].step);
    }
    CHECK(a[0].chain == 0);
    CHECK(a[4].chain == 1);
    CHECK(a[0].step == 7);
    CHECK(a[0].state != a[4].state);
    CHECK(a[4].state != a[8].state);

    c.master_seed = 2025;
    CHECK(run_chain(c)[0].state != a[0].state);
  }
}
