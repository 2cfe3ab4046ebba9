#include "mallows/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mallows {

CycleSummary summarize(const Permutation& sigma, int s) {
  if (s < 1 || s > sigma.size()) throw std::invalid_argument("summarize: s outside [n]");
  CycleSummary out;
  out.n = sigma.size();
  out.s = s;
  out.sorted_lengths = sorted_cycle_lengths(sigma);
  int lo = s;
  int hi = s;
  int len = 1;
  for (int k = sigma(s); k != s; k = sigma(k)) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    ++len;
  }
  out.len_at_s = len;
  out.diameter_at_s = hi - lo;
  return out;
}

double MomentAccumulator::variance() const {
  if (count_ < 2) return 0.0;
  const double m = mean();
  const double v = (sum_sq_ - static_cast<double>(count_) * m * m) / static_cast<double>(count_ - 1);
  return std::max(v, 0.0);
}

EstimateWithError between_group_estimate(std::span<const MomentAccumulator> groups) {
  MomentAccumulator pooled;
  MomentAccumulator group_means;
  for (const auto& g : groups) {
    if (g.count() == 0) continue;
    pooled.merge(g);
    group_means.add(g.mean());
  }
  EstimateWithError est;
  est.mean = pooled.mean();
  est.count = pooled.count();
  if (group_means.count() >= 2)
    est.std_error = std::sqrt(group_means.variance() / static_cast<double>(group_means.count()));
  return est;
}

EstimateWithError iid_estimate(const MomentAccumulator& acc) {
  EstimateWithError est;
  est.mean = acc.mean();
  est.count = acc.count();
  if (acc.count() >= 2) est.std_error = std::sqrt(acc.variance() / static_cast<double>(acc.count()));
  return est;
}

EstimateWithError estimate_statistic(const ChainConfig& config, const Statistic& f, int threads) {
  config.validate();
  std::vector<MomentAccumulator> per_chain(static_cast<std::size_t>(config.chains));
  for_each_sample(
      config,
      [&](int chain, std::int64_t, const Permutation& state) {
        per_chain[static_cast<std::size_t>(chain)].add(f(state));
      },
      threads);
  return between_group_estimate(per_chain);
}

EstimateWithError estimate_cycle_length(const ChainConfig& config, int s, int threads) {
  if (s < 1 || s > config.params.n) throw std::invalid_argument("estimate_cycle_length: s outside [n]");
  return estimate_statistic(
      config, [s](const Permutation& p) { return static_cast<double>(summarize(p, s).len_at_s); }, threads);
}

EstimateWithError estimate_cycle_diameter(const ChainConfig& config, int s, int threads) {
  if (s < 1 || s > config.params.n) throw std::invalid_argument("estimate_cycle_diameter: s outside [n]");
  return estimate_statistic(
      config, [s](const Permutation& p) { return static_cast<double>(summarize(p, s).diameter_at_s); }, threads);
}

std::vector<double> normalized_sorted_lengths(const Permutation& sigma, int k) {
  if (k < 1) throw std::invalid_argument("normalized_sorted_lengths: K must be >= 1");
  const auto lengths = sorted_cycle_lengths(sigma);
  std::vector<double> row(static_cast<std::size_t>(k), 0.0);
  const auto n = static_cast<double>(sigma.size());
  for (std::size_t i = 0; i < row.size() && i < lengths.size(); ++i) row[i] = lengths[i] / n;
  return row;
}

std::vector<std::vector<double>> normalized_sorted_lengths(std::span<const Permutation> samples, int k) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& sigma : samples) rows.push_back(normalized_sorted_lengths(sigma, k));
  return rows;
}

std::vector<double> gem_sticks(CounterRng& rng, double residual) {
  if (!(residual > 0.0)) throw std::invalid_argument("gem_sticks: residual threshold must be > 0");
  std::vector<double> masses;
  double remaining = 1.0;
  while (remaining >= residual) {
    const double u = rng.uniform_open_zero();
    masses.push_back(u * remaining);
    remaining *= 1.0 - u;
  }
  return masses;
}

std::vector<double> gem_stick_breaking(CounterRng& rng, double residual) {
  auto masses = gem_sticks(rng, residual);
  std::ranges::sort(masses, std::greater<>{});
  return masses;
}

Permutation uniform_permutation(int n, CounterRng& rng) {
  if (n < 1) throw std::invalid_argument("uniform_permutation: n must be >= 1");
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i + 1;
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(images[static_cast<std::size_t>(i)], images[j]);
  }
  return Permutation::from_trusted(std::move(images));
}

CycleSummary uniform_permutation_reference(int n, CounterRng& rng, int s) {
  return summarize(uniform_permutation(n, rng), s);
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr int kTerms = 40;
  if (lambda < 1.18) {
    // Jacobi-transformed series, accurate where the alternating one converges slowly.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k <= kTerms; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= kTerms; ++k) {
    q += sign * std::exp(-2.0 * k * k * lambda * lambda);
    sign = -sign;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

namespace {

double ks_p_value(double d, double effective_size) {
  const double root = std::sqrt(effective_size);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

KsResult ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::ranges::sort(x);
  const auto m = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / m - f, f - static_cast<double>(i) / m});
  }
  return {d, ks_p_value(d, m)};
}

KsResult ks_uniform(std::span<const double> sample) {
  return ks_statistic(sample, [](double x) { return std::clamp(x, 0.0, 1.0); });
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::ranges::sort(x);
  std::ranges::sort(y);
  const auto na = static_cast<double>(x.size());
  const auto nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probabilities) {
  if (observed.size() != probabilities.size() || observed.size() < 2)
    throw std::invalid_argument("chi_square_gof: need matching observed/probability vectors of size >= 2");
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  ChiSquareResult r;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double expected = total * probabilities[k];
    if (!(expected > 0.0)) throw std::invalid_argument("chi_square_gof: nonpositive expected count");
    const double diff = static_cast<double>(observed[k]) - expected;
    r.statistic += diff * diff / expected;
  }
  r.dof = static_cast<int>(observed.size()) - 1;
  r.p_value = boost::math::gamma_q(0.5 * r.dof, 0.5 * r.statistic);
  return r;
}

SlopeFit least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("least_squares_slope: size mismatch");
  const auto m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (x.size() < 2 || !(sxx > 0.0)) throw std::invalid_argument("least_squares_slope: need at least two distinct x");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ssr += r * r;
    }
    fit.std_error = std::sqrt(ssr / (m - 2.0) / sxx);
  }
  return fit;
}

SlopeFit loglog_slope(std::span<const std::pair<double, double>> points) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("loglog_slope: coordinates must be positive");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
  }
  return least_squares_slope(lx, ly);
}

SlopeFit semilog_slope(std::span<const std::pair<double, double>> points) {
  std::vector<double> xs;
  std::vector<double> ly;
  for (const auto& [x, y] : points) {
    if (!(y > 0.0)) throw std::invalid_argument("semilog_slope: y must be positive");
    xs.push_back(x);
    ly.push_back(std::log(y));
  }
  return least_squares_slope(xs, ly);
}

}  // namespace mallows
