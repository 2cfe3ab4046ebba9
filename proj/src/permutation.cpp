#include "mallows/permutation.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace mallows {

ModelParams ModelParams::make(int n, double beta) {
  ModelParams p{n, beta};
  p.validate();
  return p;
}

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("model size n must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("beta must be a finite value > 0 (only the beta > 0 regime is supported)");
}

Permutation::Permutation(int n) {
  if (n < 1) throw std::invalid_argument("permutation size must be >= 1");
  images_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) images_[static_cast<std::size_t>(i)] = i + 1;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  if (images_.empty()) throw std::invalid_argument("permutation size must be >= 1");
  if (!is_bijection(images_)) throw std::invalid_argument("images do not form a bijection of [n]");
}

Permutation Permutation::from_trusted(std::vector<int> images) {
  assert(!images.empty() && is_bijection(images));
  return Permutation(std::move(images), Unchecked{});
}

int Permutation::at(int i) const {
  if (i < 1 || i > size()) throw std::out_of_range("permutation index out of range");
  return (*this)(i);
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (int i = 1; i <= size(); ++i) inv[static_cast<std::size_t>((*this)(i) - 1)] = i;
  return Permutation(std::move(inv), Unchecked{});
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size()) throw std::invalid_argument("composition of permutations of different size");
  std::vector<int> out(images_.size());
  for (int i = 1; i <= size(); ++i) out[static_cast<std::size_t>(i - 1)] = (*this)(other(i));
  return Permutation(std::move(out), Unchecked{});
}

bool Permutation::is_identity() const {
  for (int i = 1; i <= size(); ++i)
    if ((*this)(i) != i) return false;
  return true;
}

bool is_bijection(std::span<const int> images) {
  const auto n = static_cast<int>(images.size());
  std::vector<char> seen(images.size(), 0);
  for (int v : images) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) return false;
    seen[static_cast<std::size_t>(v - 1)] = 1;
  }
  return true;
}

std::int64_t l1_distance(const Permutation& sigma, const Permutation& tau) {
  if (sigma.size() != tau.size()) throw std::invalid_argument("l1_distance: size mismatch");
  std::int64_t h = 0;
  for (int j = 1; j <= sigma.size(); ++j) h += std::abs(sigma(j) - tau(j));
  return h;
}

std::int64_t l1_to_identity(const Permutation& sigma) {
  std::int64_t h = 0;
  for (int j = 1; j <= sigma.size(); ++j) h += std::abs(sigma(j) - j);
  return h;
}

std::vector<int> cycle_containing(const Permutation& sigma, int s) {
  if (s < 1 || s > sigma.size()) throw std::invalid_argument("cycle_containing: index out of range");
  std::vector<int> cycle{s};
  for (int k = sigma(s); k != s; k = sigma(k)) cycle.push_back(k);
  std::ranges::sort(cycle);
  return cycle;
}

std::vector<std::vector<int>> cycle_decomposition(const Permutation& sigma) {
  const int n = sigma.size();
  std::vector<char> visited(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::vector<int>> cycles;
  // Scanning starts in increasing order, so each cycle is entered at its minimum.
  for (int start = 1; start <= n; ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    auto& cycle = cycles.emplace_back();
    for (int k = start; !visited[static_cast<std::size_t>(k)]; k = sigma(k)) {
      visited[static_cast<std::size_t>(k)] = 1;
      cycle.push_back(k);
    }
  }
  return cycles;
}

std::vector<int> sorted_cycle_lengths(const Permutation& sigma) {
  const int n = sigma.size();
  std::vector<char> visited(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> lengths;
  for (int start = 1; start <= n; ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    int len = 0;
    for (int k = start; !visited[static_cast<std::size_t>(k)]; k = sigma(k)) {
      visited[static_cast<std::size_t>(k)] = 1;
      ++len;
    }
    lengths.push_back(len);
  }
  std::ranges::sort(lengths, std::greater<>{});
  return lengths;
}

Permutation reverse_conjugate(const Permutation& sigma) {
  const int n = sigma.size();
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) out[static_cast<std::size_t>(j - 1)] = n + 1 - sigma(n + 1 - j);
  return Permutation::from_trusted(std::move(out));
}

DisplacementCount displacement_count(const Permutation& sigma, int j) {
  const int n = sigma.size();
  if (j < 0 || j > n) throw std::invalid_argument("displacement_count: j outside {0, ..., n}");
  DisplacementCount c{0, 0};
  for (int k = 1; k <= n; ++k) {
    if (k <= j && sigma(k) >= j + 1) ++c.below;
    if (k >= j + 1 && sigma(k) <= j) ++c.above;
  }
  return c;
}

QuadrantCount quadrant_count(const Permutation& sigma, int j, double delta) {
  const int n = sigma.size();
  if (j < 1 || j > n) throw std::invalid_argument("quadrant_count: j outside [n]");
  if (!(delta > 0.0)) throw std::invalid_argument("quadrant_count: delta must be positive");
  QuadrantCount c{0, 0};
  for (int x = 1; x <= n; ++x) {
    const int y = sigma(x);
    if (x >= j + delta && y <= j - delta) ++c.lower_right;
    if (x <= j - delta && y >= j + delta) ++c.upper_left;
  }
  return c;
}

std::string format_permutation(const Permutation& sigma) {
  std::string out;
  out.reserve(static_cast<std::size_t>(sigma.size()) * 4);
  for (int i = 1; i <= sigma.size(); ++i) {
    if (i > 1) out.push_back(' ');
    out += std::to_string(sigma(i));
  }
  return out;
}

Permutation parse_permutation(std::string_view text) {
  std::vector<int> images;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (p != end) {
    if (*p == ' ' || *p == '\t' || *p == '\r' || *p == '\n') {
      ++p;
      continue;
    }
    int v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{}) throw std::invalid_argument("malformed permutation text: " + std::string(text));
    images.push_back(v);
    p = next;
  }
  return Permutation(std::move(images));
}

}  // namespace mallows
