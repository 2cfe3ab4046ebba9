#include "mallows/experiments.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "mallows/arcs.hpp"
#include "mallows/exact_oracle.hpp"
#include "mallows/numeric.hpp"
#include "mallows/stats.hpp"

namespace mallows {
namespace {

using json = nlohmann::json;

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Independent sub-seed for experiment part `tag`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return CounterRng::stream(seed, 0x5eedULL, tag).key();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

ChainConfig make_config(const ModelParams& params, const ChainPlan& plan, std::uint64_t seed) {
  ChainConfig c;
  c.params = params;
  c.burnin = plan.burnin < 0 ? default_burnin(params.n) : plan.burnin;
  c.thin = plan.thin;
  c.samples = plan.samples;
  c.chains = plan.chains;
  c.master_seed = seed;
  c.validate();
  return c;
}

json estimate_json(const EstimateWithError& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"count", e.count}};
}

json plan_json(const ChainConfig& c) {
  return {{"burnin", c.burnin}, {"thin", c.thin}, {"samples", c.samples}, {"chains", c.chains}};
}

}  // namespace

CriterionRecord within(std::string name, double observed, double expected, double tolerance, std::string detail) {
  const bool pass = std::isfinite(observed) && std::abs(observed - expected) <= tolerance;
  return {std::move(name), observed, expected, tolerance, pass, std::move(detail)};
}

CriterionRecord in_range(std::string name, double observed, double lo, double hi, std::string detail) {
  CriterionRecord r{std::move(name), observed, 0.5 * (lo + hi), 0.5 * (hi - lo), false, std::move(detail)};
  r.pass = std::isfinite(observed) && observed >= lo && observed <= hi;
  return r;
}

CriterionRecord at_most(std::string name, double observed, double bound, std::string detail) {
  CriterionRecord r{std::move(name), observed, 0.0, bound, false, std::move(detail)};
  r.pass = std::isfinite(observed) && observed <= bound;
  return r;
}

bool Report::pass() const {
  return std::ranges::all_of(criteria, [](const CriterionRecord& c) { return c.pass; });
}

json Report::to_json() const {
  json crit = json::array();
  for (const auto& c : criteria) {
    json r = {{"criterion", c.criterion},
              {"observed", c.observed},
              {"expected", c.expected},
              {"tolerance", c.tolerance},
              {"pass", c.pass}};
    if (!c.detail.empty()) r["detail"] = c.detail;
    crit.push_back(std::move(r));
  }
  return {{"schema", kReportSchema},
          {"kind", kind},
          {"spec", spec},
          {"seed", seed},
          {"criteria", std::move(crit)},
          {"data", data},
          {"pass", pass()},
          {"timing", {{"wall_seconds", wall_seconds}}}};
}

// ---- exact oracle -------------------------------------------------------

Report oracle_report(const ModelParams& params) {
  Stopwatch clock;
  params.validate();
  const int n = params.n;
  const auto un = static_cast<std::size_t>(n);

  CompensatedSum z;
  CompensatedSum h_acc;
  std::vector<CompensatedSum> len_acc(un);
  std::vector<CompensatedSum> diam_acc(un);
  std::vector<std::vector<CompensatedSum>> d_mass(un, std::vector<CompensatedSum>(un + 2));
  std::vector<int> cycle_len(un);
  std::vector<int> cycle_diam(un);
  std::vector<char> seen(un);

  for_each_weighted(params, [&](const Permutation& sigma, double w) {
    z += w;
    h_acc += w * static_cast<double>(l1_to_identity(sigma));
    std::fill(seen.begin(), seen.end(), 0);
    for (int start = 1; start <= n; ++start) {
      if (seen[static_cast<std::size_t>(start - 1)]) continue;
      int len = 0;
      int lo = start;
      int hi = start;
      for (int k = start; !seen[static_cast<std::size_t>(k - 1)]; k = sigma(k)) {
        seen[static_cast<std::size_t>(k - 1)] = 1;
        ++len;
        lo = std::min(lo, k);
        hi = std::max(hi, k);
      }
      for (int k = start;;) {
        cycle_len[static_cast<std::size_t>(k - 1)] = len;
        cycle_diam[static_cast<std::size_t>(k - 1)] = hi - lo;
        k = sigma(k);
        if (k == start) break;
      }
    }
    for (std::size_t s = 0; s < un; ++s) {
      len_acc[s] += w * cycle_len[s];
      diam_acc[s] += w * cycle_diam[s];
    }
    for (int j = 1; j <= n; ++j)
      d_mass[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(displacement_count(sigma, j).below)] += w;
  });

  Report report;
  report.kind = "oracle";
  report.spec = {{"n", n}, {"beta", params.beta}};
  const double zv = z.value();
  json lens = json::array();
  json diams = json::array();
  for (std::size_t s = 0; s < un; ++s) {
    lens.push_back(len_acc[s].value() / zv);
    diams.push_back(diam_acc[s].value() / zv);
  }
  json tails = json::array();
  for (std::size_t j = 0; j < un; ++j) {
    std::vector<double> tail(un + 2, 0.0);
    CompensatedSum running;
    for (int r = n + 1; r >= 0; --r) {
      running += d_mass[j][static_cast<std::size_t>(r)].value();
      tail[static_cast<std::size_t>(r)] = running.value() / zv;
    }
    tail[0] = 1.0;
    tails.push_back(tail);
  }
  report.data = {{"n", n},
                 {"beta", params.beta},
                 {"z", zv},
                 {"expectations", {{"cycle_length", lens}, {"cycle_diameter", diams}, {"l1", h_acc.value() / zv}}},
                 {"tails", {{"D", tails}}}};
  report.criteria.push_back(at_most("1 - z (z >= 1)", 1.0 - zv, 0.0));
  if (n <= kOracleTableMaxN) {
    const ExactModel model(params);
    CompensatedSum total;
    for (const auto& [sigma, p] : model.table()) total += p;
    report.criteria.push_back(within("probabilities sum to 1", total.value(), 1.0, 1e-10));
  }
  report.wall_seconds = clock.seconds();
  return report;
}

Report check_oracle_exactness() {
  Stopwatch clock;
  Report report;
  report.kind = "oracle-exactness";
  for (double beta : {0.1, 1.0, 5.0}) {
    const double z2 = partition_function({2, beta});
    const double z3 = partition_function({3, beta});
    report.criteria.push_back(within("Z(n=2, beta=" + fmt(beta) + ") = 1 + e^{-2beta}", z2,
                                     1.0 + std::exp(-2.0 * beta), 1e-12));
    report.criteria.push_back(within("Z(n=3, beta=" + fmt(beta) + ") = 1 + 2e^{-2beta} + 3e^{-4beta}", z3,
                                     1.0 + 2.0 * std::exp(-2.0 * beta) + 3.0 * std::exp(-4.0 * beta), 1e-12));
    const ExactModel model({6, beta});
    CompensatedSum total;
    for (const auto& [sigma, p] : model.table()) total += p;
    report.criteria.push_back(within("sum of P over S_6 (beta=" + fmt(beta) + ")", total.value(), 1.0, 1e-10));
  }
  report.wall_seconds = clock.seconds();
  return report;
}

// ---- sampler validation -------------------------------------------------

Report check_stationarity(const StationarityRun& run, std::uint64_t seed, int threads) {
  Stopwatch clock;
  Report report;
  report.kind = "stationarity";
  report.seed = seed;
  report.spec = {{"n", run.n}, {"betas", run.betas}, {"chains", run.chains},
                 {"samples_per_chain", run.samples_per_chain}, {"max_tvd", run.max_tvd}};
  json points = json::array();
  for (std::size_t i = 0; i < run.betas.size(); ++i) {
    const ModelParams params = ModelParams::make(run.n, run.betas[i]);
    const ExactModel exact(params);
    ChainConfig config =
        make_config(params, {-1, 1, run.samples_per_chain * run.chains, run.chains}, derive_seed(seed, i));
    std::vector<std::map<Permutation, std::int64_t>> per_chain(static_cast<std::size_t>(run.chains));
    for_each_sample(
        config, [&](int chain, std::int64_t, const Permutation& s) { ++per_chain[static_cast<std::size_t>(chain)][s]; },
        threads);
    std::map<Permutation, std::int64_t> counts;
    for (const auto& m : per_chain)
      for (const auto& [sigma, c] : m) counts[sigma] += c;
    const double tvd = total_variation_distance(counts, exact);
    points.push_back({{"beta", params.beta}, {"tvd", tvd}, {"chain", plan_json(config)}});
    report.criteria.push_back(at_most("TVD to exact (n=" + std::to_string(run.n) + ", beta=" + fmt(params.beta) + ")",
                                      tvd, run.max_tvd));
  }
  report.data = {{"points", points}};
  report.wall_seconds = clock.seconds();
  return report;
}

Report check_exact_expectations(const ExpectationRun& run, std::uint64_t seed, int threads) {
  Stopwatch clock;
  Report report;
  report.kind = "exact-expectations";
  report.seed = seed;
  report.spec = {{"n", run.n}, {"betas", run.betas}, {"points", run.points}, {"chains", run.chains},
                 {"samples", run.samples}, {"num_se", run.num_se}};
  json rows = json::array();
  for (std::size_t bi = 0; bi < run.betas.size(); ++bi) {
    const ModelParams params = ModelParams::make(run.n, run.betas[bi]);
    std::vector<Statistic> stats;
    for (int s : run.points) {
      stats.emplace_back([s](const Permutation& p) { return static_cast<double>(summarize(p, s).len_at_s); });
      stats.emplace_back([s](const Permutation& p) { return static_cast<double>(summarize(p, s).diameter_at_s); });
    }
    const auto exact = exact_expectations(params, stats);

    const ChainConfig config = make_config(params, {-1, 1, run.samples, run.chains}, derive_seed(seed, bi));
    std::vector<std::vector<MomentAccumulator>> acc(stats.size(),
                                                    std::vector<MomentAccumulator>(static_cast<std::size_t>(run.chains)));
    for_each_sample(
        config,
        [&](int chain, std::int64_t, const Permutation& sigma) {
          for (std::size_t k = 0; k < stats.size(); ++k) acc[k][static_cast<std::size_t>(chain)].add(stats[k](sigma));
        },
        threads);
    for (std::size_t k = 0; k < stats.size(); ++k) {
      const int s = run.points[k / 2];
      const std::string what = k % 2 == 0 ? "E|C_s|" : "E diameter_s";
      const auto est = between_group_estimate(acc[k]);
      const std::string name = what + " (n=" + std::to_string(run.n) + ", beta=" + fmt(params.beta) +
                               ", s=" + std::to_string(s) + ")";
      report.criteria.push_back(within(name, est.mean, exact[k], run.num_se * est.std_error,
                                       "SE=" + fmt(est.std_error)));
      rows.push_back({{"beta", params.beta}, {"s", s}, {"statistic", what}, {"exact", exact[k]},
                      {"estimate", estimate_json(est)}});
    }
  }
  report.data = {{"rows", rows}};
  report.wall_seconds = clock.seconds();
  return report;
}

// ---- pathwise and law invariants ---------------------------------------

namespace {

std::int64_t permutation_property_violations(int n) {
  std::int64_t bad = 0;
  std::vector<Permutation> all;
  for_each_weighted({n, 1.0}, [&](const Permutation& p, double) { all.push_back(p); });
  for (const auto& sigma : all) {
    for (int j = 0; j <= n; ++j) {
      const auto d = displacement_count(sigma, j);
      if (d.below != d.above) ++bad;
    }
    const auto h = l1_to_identity(sigma);
    if (h % 2 != 0) ++bad;
    const auto rev = reverse_conjugate(sigma);
    if (l1_to_identity(rev) != h || reverse_conjugate(rev) != sigma) ++bad;
    if (l1_to_identity(sigma.inverse()) != h) ++bad;
    std::vector<int> cover(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& c : cycle_decomposition(sigma))
      for (int x : c) ++cover[static_cast<std::size_t>(x)];
    for (int x = 1; x <= n; ++x) {
      if (cover[static_cast<std::size_t>(x)] != 1) ++bad;
      if (summarize(sigma, x).len_at_s != summarize(rev, n + 1 - x).len_at_s) ++bad;
      const auto cs = summarize(sigma, x);
      if (cs.len_at_s > cs.diameter_at_s + 1) ++bad;
    }
  }
  for (std::size_t a = 0; a < all.size(); a += 7)
    for (std::size_t b = 0; b < all.size(); b += 11) {
      const auto& x = all[a];
      const auto& y = all[b];
      if (l1_distance(x, y) != l1_distance(y, x)) ++bad;
      const auto& w = all[(a * 31 + b * 17) % all.size()];
      if (l1_distance(x, y) > l1_distance(x, w) + l1_distance(w, y)) ++bad;
    }
  return bad;
}

}  // namespace

Report run_invariants(const InvariantsRun& run, std::uint64_t seed, int threads) {
  (void)threads;
  Stopwatch clock;
  Report report;
  report.kind = "invariants";
  report.seed = seed;
  report.spec = {{"replay_sizes", run.replay_sizes}, {"replays", run.replays}, {"replay_beta", run.replay_beta},
                 {"law_betas", run.law_betas}, {"law_draws", run.law_draws}, {"tail_n", run.tail_n},
                 {"tail_betas", run.tail_betas}};

  report.criteria.push_back(at_most("permutation identities over S_5", static_cast<double>(permutation_property_violations(5)), 0.0));

  // Both expressions for N_j on random cutoffs.
  {
    std::int64_t bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      CounterRng rng = CounterRng::stream(derive_seed(seed, 100), 0, static_cast<std::uint64_t>(trial));
      const int n = 1 + static_cast<int>(rng.below(40));
      std::vector<double> b(static_cast<std::size_t>(n));
      for (int j = 1; j <= n; ++j) b[static_cast<std::size_t>(j - 1)] = j + rng.exponential() * 3.0;
      const auto counts = counts_from_bounds(b);
      for (int j = 1; j <= n; ++j) {
        int from_below = 1;
        for (int k = 1; k < j; ++k)
          if (b[static_cast<std::size_t>(k - 1)] >= j) ++from_below;
        int at_least = 0;
        for (int k = 1; k <= n; ++k)
          if (b[static_cast<std::size_t>(k - 1)] >= j) ++at_least;
        const int nj = counts[static_cast<std::size_t>(j - 1)];
        if (nj != from_below || nj != at_least - n + j || nj < 1) ++bad;
      }
    }
    report.criteria.push_back(at_most("N_j: both counting identities", static_cast<double>(bad), 0.0));
  }

  // Full placement replays: arc partition, head sets, closed arcs = cycles, walk terminal.
  json replay_data = json::array();
  for (std::size_t si = 0; si < run.replay_sizes.size(); ++si) {
    const int n = run.replay_sizes[si];
    HitAndRunKernel kernel(n, run.replay_beta);
    std::vector<int> images(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i + 1;
    const std::uint64_t chain_seed = derive_seed(seed, 200 + si);
    std::int64_t arc_bad = 0;
    std::int64_t walk_bad = 0;
    std::int64_t feasibility_bad = 0;
    std::int64_t steps = 0;
    std::string first_message;
    const std::int64_t warmup = n;
    for (std::int64_t t = 1; t <= warmup + run.replays; ++t) {
      CounterRng rng = CounterRng::stream(chain_seed, 0, static_cast<std::uint64_t>(t));
      const std::vector<int> before = images;
      kernel.step(images, rng);
      if (t <= warmup) continue;
      const auto b = kernel.last_bounds();
      const auto y = kernel.last_placement();
      for (int i = 1; i <= n; ++i) {
        const double bi = b[static_cast<std::size_t>(i - 1)];
        if (bi < std::max(i, before[static_cast<std::size_t>(i - 1)]) ||
            images[static_cast<std::size_t>(i - 1)] > bi)
          ++feasibility_bad;
      }
      const auto rep = replay_and_check(b, y);
      arc_bad += rep.violations;
      steps += rep.steps_checked;
      if (first_message.empty() && !rep.messages.empty()) first_message = rep.messages.front();
      const Permutation sigma = Permutation::from_trusted(images);
      for (int s = 1; s <= n; ++s) {
        const auto walk = track_walk(s, b, y);
        const auto cycle = cycle_containing(sigma, s);
        if (walk.terminal() != cycle.front()) ++walk_bad;
        for (int k = 1; k < walk.t_stop; ++k) {
          const int prev = walk.z[static_cast<std::size_t>(k - 1)];
          const int cur = walk.z[static_cast<std::size_t>(k)];
          // Z_k in H_{Z_{k-1}} = {j <= Z_{k-1} - 1 : b_j >= Z_{k-1}}
          if (!(cur <= prev - 1 && b[static_cast<std::size_t>(cur - 1)] >= prev)) ++walk_bad;
        }
      }
    }
    const std::string tag = " (n=" + std::to_string(n) + ", " + std::to_string(run.replays) + " replays)";
    report.criteria.push_back(at_most("arc partition / head-set / closed-arc invariants" + tag,
                                      static_cast<double>(arc_bad), 0.0, first_message));
    report.criteria.push_back(at_most("walk terminal = min C_s and Z_t in H_{Z_{t-1}}" + tag,
                                      static_cast<double>(walk_bad), 0.0));
    report.criteria.push_back(at_most("cutoff floor and placement feasibility" + tag,
                                      static_cast<double>(feasibility_bad), 0.0));
    replay_data.push_back({{"n", n}, {"steps_checked", steps}, {"arc_violations", arc_bad}, {"walk_violations", walk_bad}});
  }

  // Law of b_j - max{j, sigma0(j)}: survival at the 25/50/75% points of Exp(2 beta).
  json law_data = json::array();
  for (std::size_t bi = 0; bi < run.law_betas.size(); ++bi) {
    const double beta = run.law_betas[bi];
    constexpr int n = 50;
    const std::uint64_t law_seed = derive_seed(seed, 300 + bi);
    HitAndRunKernel kernel(n, beta);
    std::vector<int> images(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i + 1;
    for (std::uint64_t t = 1; t <= 100; ++t) {
      CounterRng rng = CounterRng::stream(law_seed, 0, t);
      kernel.step(images, rng);
    }
    const Permutation sigma0(images);
    const std::array<double, 3> survival{0.75, 0.5, 0.25};
    std::array<std::int64_t, 3> above{0, 0, 0};
    std::int64_t draws = 0;
    for (std::uint64_t rep = 0; draws < run.law_draws; ++rep) {
      CounterRng rng = CounterRng::stream(law_seed, 1, rep);
      const auto bounds = sample_bounds(sigma0, beta, rng);
      for (int j = 1; j <= n && draws < run.law_draws; ++j, ++draws) {
        const double excess = bounds.b[static_cast<std::size_t>(j - 1)] - std::max(j, sigma0(j));
        for (std::size_t q = 0; q < survival.size(); ++q)
          if (excess >= std::log(1.0 / survival[q]) / (2.0 * beta)) ++above[q];
      }
    }
    for (std::size_t q = 0; q < survival.size(); ++q) {
      const double p = survival[q];
      const double observed = static_cast<double>(above[q]) / static_cast<double>(draws);
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
      report.criteria.push_back(within("P(b_j - max{j, sigma0(j)} >= x) at survival " + fmt(p) + " (beta=" + fmt(beta) + ")",
                                       observed, p, 3.0 * se, "SE=" + fmt(se)));
      law_data.push_back({{"beta", beta}, {"survival", p}, {"observed", observed}, {"draws", draws}});
    }
  }

  // Geometric decay of the exact displacement tails.
  json tail_data = json::array();
  for (double beta : run.tail_betas) {
    const ModelParams params = ModelParams::make(run.tail_n, beta);
    double worst = 0.0;
    for (int j = 1; j <= run.tail_n; ++j) {
      const auto tail = exact_tail_distribution_D(params, j);
      for (std::size_t r = 0; r + 1 < tail.size(); ++r)
        if (tail[r] > 1e-9) worst = std::max(worst, tail[r + 1] / tail[r]);
      tail_data.push_back({{"beta", beta}, {"j", j}, {"tail", tail}});
    }
    report.criteria.push_back(at_most("max tail(r+1)/tail(r) of |D_j| (n=" + std::to_string(run.tail_n) +
                                          ", beta=" + fmt(beta) + ")",
                                      worst, 10.0 * std::exp(-2.0 * beta)));
  }

  // Quadrant counts: P(|R_{j,Delta}| >= 1) is nonincreasing in Delta.
  {
    const ModelParams params = ModelParams::make(run.tail_n, 0.5);
    const int j = (run.tail_n + 1) / 2;
    std::vector<Statistic> stats;
    for (double delta : {1.0, 2.0, 3.0})
      stats.emplace_back([j, delta](const Permutation& p) {
        const auto q = quadrant_count(p, j, delta);
        return q.lower_right >= 1 ? 1.0 : 0.0;
      });
    const auto probs = exact_expectations(params, stats);
    double worst_increase = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) worst_increase = std::max(worst_increase, probs[k + 1] - probs[k]);
    report.criteria.push_back(at_most("P(|R_{j,Delta}| >= 1) nonincreasing in Delta", worst_increase, 0.0));
    report.data["quadrant"] = {{"j", j}, {"deltas", {1, 2, 3}}, {"probabilities", probs}};
  }

  report.data["replays"] = replay_data;
  report.data["cutoff_law"] = law_data;
  report.data["tails"] = tail_data;
  report.wall_seconds = clock.seconds();
  return report;
}

// ---- theorem experiments -----------------------------------------------

Report verify_thm11(const Thm11Run& run, std::uint64_t seed, int threads) {
  Stopwatch clock;
  Report report;
  report.kind = "verify-thm11";
  report.seed = seed;
  report.spec = {{"n", run.n}, {"betas", run.betas}, {"saturation_sizes", run.saturation_sizes},
                 {"saturation_beta", run.saturation_beta}};

  json exponent = json::array();
  std::vector<std::pair<double, double>> points;
  const int s = std::max(1, run.n / 2);
  for (std::size_t i = 0; i < run.betas.size(); ++i) {
    const auto config = make_config(ModelParams::make(run.n, run.betas[i]), run.plan, derive_seed(seed, i));
    const auto est = estimate_cycle_length(config, s, threads);
    points.emplace_back(run.betas[i], est.mean);
    exponent.push_back({{"beta", run.betas[i]}, {"s", s}, {"estimate", estimate_json(est)}, {"chain", plan_json(config)}});
  }
  if (points.size() >= 2) {
    const auto fit = loglog_slope(points);
    report.criteria.push_back(in_range("slope of log E|C_s| vs log beta (n=" + std::to_string(run.n) + ")", fit.slope,
                                       run.slope_lo, run.slope_hi, "fit SE=" + fmt(fit.std_error)));
  }

  json saturation = json::array();
  std::vector<double> means;
  for (std::size_t i = 0; i < run.saturation_sizes.size(); ++i) {
    const int n = run.saturation_sizes[i];
    const auto config =
        make_config(ModelParams::make(n, run.saturation_beta), run.saturation_plan, derive_seed(seed, 1000 + i));
    const auto est = estimate_cycle_length(config, std::max(1, n / 2), threads);
    means.push_back(est.mean);
    report.criteria.push_back(in_range("E|C_s|/n (n=" + std::to_string(n) + ", beta=" + fmt(run.saturation_beta) + ")",
                                       est.mean / n, run.ratio_lo, run.ratio_hi));
    saturation.push_back({{"n", n}, {"estimate", estimate_json(est)}, {"chain", plan_json(config)}});
  }
  for (std::size_t i = 1; i < means.size(); ++i)
    report.criteria.push_back(in_range("E|C_s| growth n=" + std::to_string(run.saturation_sizes[i - 1]) + " -> " +
                                           std::to_string(run.saturation_sizes[i]),
                                       means[i] / means[i - 1], run.growth_lo, run.growth_hi));

  report.data = {{"exponent", exponent}, {"saturation", saturation}};
  report.wall_seconds = clock.seconds();
  return report;
}

Report verify_thm131(const Thm131Run& run, std::uint64_t seed, int threads) {
  Stopwatch clock;
  Report report;
  report.kind = "verify-thm131";
  report.seed = seed;
  report.spec = {{"n", run.n}, {"s", run.s}, {"betas", run.betas}};
  json rows = json::array();
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < run.betas.size(); ++i) {
    const auto config = make_config(ModelParams::make(run.n, run.betas[i]), run.plan, derive_seed(seed, i));
    const auto est = estimate_cycle_diameter(config, run.s, threads);
    rows.push_back({{"beta", run.betas[i]}, {"estimate", estimate_json(est)}, {"chain", plan_json(config)}});
    if (est.mean > 0.0) points.emplace_back(run.betas[i], est.mean);
  }
  double slope = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
  if (points.size() >= 2) {
    const auto fit = semilog_slope(points);
    slope = fit.slope;
    detail = "fit SE=" + fmt(fit.std_error);
  } else {
    detail = "fewer than two points with a positive mean diameter";
  }
  report.criteria.push_back(in_range("slope of log E[diameter] vs beta (n=" + std::to_string(run.n) + ")", slope,
                                     run.slope_lo, run.slope_hi, detail));
  report.data = {{"points", rows}};
  report.wall_seconds = clock.seconds();
  return report;
}

Report verify_thm12(const Thm12Run& run, std::uint64_t seed, int threads) {
  Stopwatch clock;
  Report report;
  report.kind = "verify-thm12";
  report.seed = seed;
  const double beta = std::pow(static_cast<double>(run.n), run.beta_exponent);
  const int s = std::max(1, run.n / 2);
  report.spec = {{"n", run.n}, {"beta_exponent", run.beta_exponent}, {"beta", beta}, {"s", s},
                 {"reference_samples", run.reference_samples}};
  const auto config = make_config(ModelParams::make(run.n, beta), run.plan, derive_seed(seed, 0));

  struct Row {
    double len_fraction;
    double sum_sq;
    double largest;
  };
  std::vector<std::vector<Row>> per_chain(static_cast<std::size_t>(config.chains));
  const double n = run.n;
  for_each_sample(
      config,
      [&](int chain, std::int64_t, const Permutation& sigma) {
        const auto summary = summarize(sigma, s);
        double sq = 0.0;
        for (int l : summary.sorted_lengths) sq += (l / n) * (l / n);
        per_chain[static_cast<std::size_t>(chain)].push_back(
            {summary.len_at_s / n, sq, summary.sorted_lengths.front() / n});
      },
      threads);
  std::vector<double> fractions;
  std::vector<double> largest;
  MomentAccumulator sum_sq;
  for (const auto& rows : per_chain)
    for (const auto& r : rows) {
      fractions.push_back(r.len_fraction);
      largest.push_back(r.largest);
      sum_sq.add(r.sum_sq);
    }

  std::vector<double> reference;
  const std::uint64_t ref_seed = derive_seed(seed, 1);
  for (int i = 0; i < run.reference_samples; ++i) {
    CounterRng rng = CounterRng::stream(ref_seed, 0, static_cast<std::uint64_t>(i));
    reference.push_back(gem_stick_breaking(rng).front());
  }

  const auto ks_len = ks_uniform(fractions);
  const double uniform_moment = 1.0 / n + (n - 1.0) / (2.0 * n);
  const auto ks_big = ks_two_sample(largest, reference);
  const auto moment = iid_estimate(sum_sq);

  report.criteria.push_back(at_most("KS D of |C_s|/n vs U(0,1)", ks_len.d, run.max_ks_uniform,
                                    "p=" + fmt(ks_len.p_value)));
  report.criteria.push_back(within("mean sum (l_i/n)^2 vs uniform-permutation value", moment.mean, uniform_moment,
                                   run.moment_tolerance, "SE=" + fmt(moment.std_error)));
  report.criteria.push_back(at_most("two-sample KS D of l_1/n vs PD(1) largest mass", ks_big.d, run.max_ks_largest,
                                    "p=" + fmt(ks_big.p_value)));
  report.data = {{"chain", plan_json(config)},
                 {"ks_uniform", {{"d", ks_len.d}, {"p_value", ks_len.p_value}}},
                 {"sum_sq", {{"estimate", estimate_json(moment)}, {"uniform_value", uniform_moment}}},
                 {"ks_largest", {{"d", ks_big.d}, {"p_value", ks_big.p_value}}}};
  report.wall_seconds = clock.seconds();
  return report;
}

}  // namespace mallows
