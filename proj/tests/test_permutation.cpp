#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "mallows/permutation.hpp"
#include "mallows/rng.hpp"

using namespace mallows;

namespace {

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> a(static_cast<std::size_t>(n));
  std::iota(a.begin(), a.end(), 1);
  std::vector<Permutation> out;
  do out.emplace_back(a);
  while (std::next_permutation(a.begin(), a.end()));
  return out;
}

}  // namespace

TEST_SUITE("permutation") {
  TEST_CASE("construction rejects non-bijections") {
    CHECK_THROWS_AS(Permutation(std::vector<int>{1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation(std::vector<int>{0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation(std::vector<int>{1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation(std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation(0), std::invalid_argument);
    CHECK(Permutation(std::vector<int>{2, 3, 1})(1) == 2);
  }

  TEST_CASE("model params regime") {
    CHECK_NOTHROW(ModelParams::make(3, 0.5));
    CHECK_THROWS_AS(ModelParams::make(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::make(3, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::make(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams::make(3, std::nan("")), std::invalid_argument);
  }

  TEST_CASE("l1_distance examples") {
    CHECK(l1_distance(Permutation(3), Permutation(3)) == 0);
    CHECK(l1_distance(Permutation({2, 1}), Permutation({1, 2})) == 2);
    CHECK(l1_distance(Permutation({3, 1, 2}), Permutation({1, 2, 3})) == 4);
    CHECK_THROWS_AS(l1_distance(Permutation(2), Permutation(3)), std::invalid_argument);
  }

  TEST_CASE("cycle_containing examples") {
    CHECK(cycle_containing(Permutation(3), 1) == std::vector<int>{1});
    CHECK(cycle_containing(Permutation({2, 3, 1}), 2) == std::vector<int>{1, 2, 3});
    CHECK(cycle_containing(Permutation({2, 1, 3}), 3) == std::vector<int>{3});
    CHECK_THROWS_AS(cycle_containing(Permutation(3), 0), std::invalid_argument);
    CHECK_THROWS_AS(cycle_containing(Permutation(3), 4), std::invalid_argument);
  }

  TEST_CASE("cycle_decomposition is min-first and ordered") {
    using C = std::vector<std::vector<int>>;
    CHECK(cycle_decomposition(Permutation(3)) == C{{1}, {2}, {3}});
    CHECK(cycle_decomposition(Permutation({2, 1, 3})) == C{{1, 2}, {3}});
    CHECK(cycle_decomposition(Permutation({2, 3, 1})) == C{{1, 2, 3}});
    CHECK(cycle_decomposition(Permutation({3, 4, 1, 5, 2})) == C{{1, 3}, {2, 4, 5}});
    CHECK(sorted_cycle_lengths(Permutation({3, 4, 1, 5, 2})) == std::vector<int>{3, 2});
  }

  TEST_CASE("reverse_conjugate examples") {
    CHECK(reverse_conjugate(Permutation(4)) == Permutation(4));
    CHECK(reverse_conjugate(Permutation({2, 3, 1})) == Permutation({3, 1, 2}));
    for (const auto& sigma : all_permutations(4)) CHECK(reverse_conjugate(reverse_conjugate(sigma)) == sigma);
  }

  TEST_CASE("displacement_count examples") {
    for (int j = 0; j <= 4; ++j) CHECK(displacement_count(Permutation(4), j) == DisplacementCount{0, 0});
    CHECK(displacement_count(Permutation({2, 1}), 1) == DisplacementCount{1, 1});
    CHECK(displacement_count(Permutation({3, 1, 2}), 1) == DisplacementCount{1, 1});
    CHECK(displacement_count(Permutation({3, 1, 2}), 0) == DisplacementCount{0, 0});
    CHECK_THROWS_AS(displacement_count(Permutation(3), -1), std::invalid_argument);
    CHECK_THROWS_AS(displacement_count(Permutation(3), 4), std::invalid_argument);
  }

  TEST_CASE("quadrant_count examples") {
    CHECK(quadrant_count(Permutation(4), 2, 1.0) == QuadrantCount{0, 0});
    CHECK(quadrant_count(Permutation({4, 3, 2, 1}), 2, 1.0) == QuadrantCount{1, 1});
    CHECK(quadrant_count(Permutation({2, 1}), 1, 0.5).lower_right == 0);
    CHECK_THROWS_AS(quadrant_count(Permutation(3), 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(quadrant_count(Permutation(3), 1, -2.0), std::invalid_argument);
  }

  TEST_CASE("text format") {
    CHECK(format_permutation(Permutation({2, 3, 1})) == "2 3 1");
    CHECK(parse_permutation("2 3 1") == Permutation({2, 3, 1}));
    CHECK(parse_permutation("  1\t2 \n") == Permutation(2));
    CHECK_THROWS_AS(parse_permutation("1 1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_permutation("1 x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_permutation(""), std::invalid_argument);
    CounterRng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> a(30);
      std::iota(a.begin(), a.end(), 1);
      std::shuffle(a.begin(), a.end(), rng);
      const Permutation p(a);
      CHECK(parse_permutation(format_permutation(p)) == p);
    }
  }

  TEST_CASE("exhaustive identities over S_5") {
    const auto all = all_permutations(5);
    for (const auto& sigma : all) {
      for (int j = 0; j <= 5; ++j) {
        const auto d = displacement_count(sigma, j);
        CHECK(d.below == d.above);
      }
      CHECK(l1_to_identity(sigma) % 2 == 0);
      CHECK(l1_to_identity(reverse_conjugate(sigma)) == l1_to_identity(sigma));
      CHECK(sigma.compose(sigma.inverse()).is_identity());

      std::vector<int> seen(6, 0);
      for (const auto& cycle : cycle_decomposition(sigma)) {
        CHECK(cycle.front() == *std::min_element(cycle.begin(), cycle.end()));
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          ++seen[static_cast<std::size_t>(cycle[i])];
          CHECK(sigma(cycle[i]) == cycle[(i + 1) % cycle.size()]);
        }
        auto sorted = cycle;
        std::sort(sorted.begin(), sorted.end());
        for (int x : cycle) CHECK(cycle_containing(sigma, x) == sorted);
      }
      for (int x = 1; x <= 5; ++x) CHECK(seen[static_cast<std::size_t>(x)] == 1);
    }
  }

  TEST_CASE("metric axioms on random triples in S_5") {
    const auto all = all_permutations(5);
    CounterRng rng(5);
    for (int trial = 0; trial < 2000; ++trial) {
      const auto& a = all[rng.below(all.size())];
      const auto& b = all[rng.below(all.size())];
      const auto& c = all[rng.below(all.size())];
      CHECK(l1_distance(a, b) == l1_distance(b, a));
      CHECK(l1_distance(a, c) <= l1_distance(a, b) + l1_distance(b, c));
      CHECK((l1_distance(a, b) == 0) == (a == b));
    }
  }
}
