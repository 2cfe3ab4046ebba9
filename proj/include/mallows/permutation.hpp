#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mallows {

// A bijection of [n] = {1, ..., n}. Indices and images are one-based at the
// API boundary; storage is a plain zero-offset vector of the one-based images.
class Permutation {
 public:
  // Identity on [n].
  explicit Permutation(int n);

  // Throws std::invalid_argument unless `images` is a bijection of [n], n >= 1.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n) { return Permutation(n); }

  // Adopts images without validation. For hot paths where bijectivity holds by
  // construction; checked in debug builds.
  static Permutation from_trusted(std::vector<int> images);

  int size() const { return static_cast<int>(images_.size()); }

  // sigma(i) for one-based i. Unchecked.
  int operator()(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }
  int at(int i) const;

  std::span<const int> images() const { return images_; }

  Permutation inverse() const;
  // (this o other)(i) = this(other(i))
  Permutation compose(const Permutation& other) const;

  bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<int> images, Unchecked) : images_(std::move(images)) {}

  std::vector<int> images_;
};

// (n, beta) of the L1 Mallows measure P(sigma) ~ exp(-beta * H(sigma, id)).
// Only the beta > 0 regime is modelled.
struct ModelParams {
  int n = 1;
  double beta = 1.0;

  // Throws std::invalid_argument on n < 1 or beta <= 0 (including NaN).
  static ModelParams make(int n, double beta);
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// A real-valued function of a permutation.
using Statistic = std::function<double(const Permutation&)>;

// True iff `images` is a bijection of [images.size()].
bool is_bijection(std::span<const int> images);

// Spearman's footrule: sum_j |sigma(j) - tau(j)|.
std::int64_t l1_distance(const Permutation& sigma, const Permutation& tau);

// H(sigma, id) without materializing the identity.
std::int64_t l1_to_identity(const Permutation& sigma);

// The cycle of sigma containing s, sorted ascending.
std::vector<int> cycle_containing(const Permutation& sigma, int s);

// Cycles as orbits (s, sigma(s), sigma^2(s), ...) with the minimum element
// first; cycles ordered by their minimum.
std::vector<std::vector<int>> cycle_decomposition(const Permutation& sigma);

// Cycle lengths in nonincreasing order.
std::vector<int> sorted_cycle_lengths(const Permutation& sigma);

// j -> n + 1 - sigma(n + 1 - j). Involutive; preserves the law of the model.
Permutation reverse_conjugate(const Permutation& sigma);

struct DisplacementCount {
  int below;  // |{k <= j : sigma(k) >= j + 1}|
  int above;  // |{k >= j + 1 : sigma(k) <= j}|
  friend bool operator==(const DisplacementCount&, const DisplacementCount&) = default;
};

// Boundary crossings at level j, 0 <= j <= n. Both components are always equal.
DisplacementCount displacement_count(const Permutation& sigma, int j);

struct QuadrantCount {
  int lower_right;  // graph points with x >= j + delta, y <= j - delta
  int upper_left;   // graph points with x <= j - delta, y >= j + delta
  friend bool operator==(const QuadrantCount&, const QuadrantCount&) = default;
};

QuadrantCount quadrant_count(const Permutation& sigma, int j, double delta);

// Single-line, space separated, one-based images: "2 3 1".
std::string format_permutation(const Permutation& sigma);
Permutation parse_permutation(std::string_view text);

}  // namespace mallows
