#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "mallows/arcs.hpp"
#include "mallows/experiments.hpp"
#include "mallows/sampler.hpp"
#include "mallows/stats.hpp"

namespace mallows::cli {
namespace {

using json = nlohmann::json;

const CLI::Validator kPositiveBeta(
    [](std::string& value) -> std::string {
      double beta = 0.0;
      std::istringstream in(value);
      if (!(in >> beta) || !in.eof()) return "beta must be a number, got '" + value + "'";
      if (!(beta > 0.0) || !std::isfinite(beta))
        return "beta must be > 0: the model is only defined here for the regime beta > 0 (got " + value + ")";
      return {};
    },
    "BETA>0");

struct Flags {
  int n = 0;
  double beta = 0.0;
  std::vector<double> beta_grid;
  std::vector<int> n_grid;
  std::int64_t burnin = 0;
  std::int64_t thin = 1;
  std::int64_t samples = 1;
  int chains = 1;
  int s = 1;
  std::uint64_t seed = 0;
};

struct Registry {
  Flags f;
  std::vector<std::pair<CLI::App*, std::vector<CLI::Option*>>> per_command;
};

}  // namespace

ExperimentSpec parse_args(int argc, const char* const* argv) {
  CLI::App app{"Sampling and verification toolkit for the L1 Mallows permutation model", "mallows"};
  app.require_subcommand(1);
  app.allow_extras(false);
  ExperimentSpec spec;
  Flags f;

  auto n_opt = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--n", f.n, "permutation size")->check(CLI::PositiveNumber);
    if (required) o->required();
    return o;
  };
  auto beta_opt = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--beta", f.beta, "scale parameter (> 0)")->check(kPositiveBeta);
    if (required) o->required();
    return o;
  };
  auto grid_opt = [&](CLI::App* c) {
    return c->add_option("--beta-grid", f.beta_grid, "comma separated beta values")->delimiter(',')->check(kPositiveBeta);
  };
  auto n_grid_opt = [&](CLI::App* c) {
    return c->add_option("--n-grid", f.n_grid, "comma separated sizes")->delimiter(',')->check(CLI::PositiveNumber);
  };
  auto chain_opts = [&](CLI::App* c) {
    c->add_option("--burnin", f.burnin, "burn-in steps per chain")->check(CLI::NonNegativeNumber);
    c->add_option("--thin", f.thin, "emit every thin-th state")->check(CLI::PositiveNumber);
    c->add_option("--samples", f.samples, "total samples across chains")->check(CLI::PositiveNumber);
    c->add_option("--chains", f.chains, "independent chains")->check(CLI::PositiveNumber);
  };
  auto common = [&](CLI::App* c) {
    c->add_option("--seed", f.seed, "master seed (default: drawn from entropy and reported)");
    c->add_option("--out", spec.out_path, "output file (default: stdout)");
  };
  auto report_format = [&](CLI::App* c) {
    c->add_option("--format", spec.format, "report format")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* oracle = app.add_subcommand("oracle", "exact enumeration report (n <= 10)");
  n_opt(oracle, true);
  beta_opt(oracle, true);
  common(oracle);
  report_format(oracle);

  auto* sample = app.add_subcommand("sample", "run hit-and-run chains and dump states or statistics");
  n_opt(sample, true);
  beta_opt(sample, true);
  chain_opts(sample);
  common(sample);
  sample->add_option("--emit", spec.emit, "perms | stats")->check(CLI::IsMember({"perms", "stats"}));
  sample->add_option("--s", f.s, "tracked point for stats (default n/2)")->check(CLI::PositiveNumber);

  auto* arcs = app.add_subcommand("arcs", "instrumented replay of one hit-and-run placement pass");
  n_opt(arcs, true);
  beta_opt(arcs, true);
  arcs->add_option("--burnin", f.burnin, "chain steps before the instrumented one")->check(CLI::NonNegativeNumber);
  arcs->add_option("--s", f.s, "walk start point (default n/2)")->check(CLI::PositiveNumber);
  arcs->add_flag("--trace", spec.trace, "emit the merge/close event stream as a JSON array");
  common(arcs);

  auto* invariants = app.add_subcommand("invariants", "pathwise and exact-law invariant sweep");
  n_grid_opt(invariants);
  beta_opt(invariants, false);
  invariants->add_option("--replays", spec.replays, "placement replays per size")->check(CLI::PositiveNumber);
  common(invariants);
  report_format(invariants);

  auto* thm11 = app.add_subcommand("verify-thm11", "cycle length exponent and saturation");
  n_opt(thm11, false);
  grid_opt(thm11);
  n_grid_opt(thm11);
  double saturation_beta = 0.001;
  auto* sat_opt = thm11->add_option("--saturation-beta", saturation_beta, "beta for the saturation sweep")->check(kPositiveBeta);
  chain_opts(thm11);
  common(thm11);
  report_format(thm11);

  auto* thm131 = app.add_subcommand("verify-thm131", "large-beta cycle diameter decay");
  n_opt(thm131, false);
  grid_opt(thm131);
  thm131->add_option("--s", f.s, "tracked point (default n/2)")->check(CLI::PositiveNumber);
  chain_opts(thm131);
  common(thm131);
  report_format(thm131);

  auto* thm12 = app.add_subcommand("verify-thm12", "uniform and Poisson-Dirichlet limits at beta = n^exponent");
  n_opt(thm12, false);
  thm12->add_option("--beta-exponent", spec.beta_exponent, "beta_n = n^exponent")->check(CLI::Range(-10.0, -0.5000001));
  chain_opts(thm12);
  common(thm12);
  report_format(thm12);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    throw UsageError(app.help());
  } catch (const CLI::CallForAllHelp& e) {
    throw UsageError(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CLI::App* chosen = app.get_subcommands().front();
  spec.kind = chosen->get_name();
  auto given = [&](const char* name) { return chosen->get_option_no_throw(name) && chosen->count(name) > 0; };

  if (given("--n")) {
    spec.params.n = f.n;
    spec.has_n = true;
  }
  if (given("--beta")) {
    spec.params.beta = f.beta;
    spec.has_beta = true;
  }
  if (given("--beta-grid")) {
    if (f.beta_grid.empty()) throw UsageError("--beta-grid: empty grid");
    spec.beta_grid = f.beta_grid;
  }
  if (given("--n-grid")) {
    if (f.n_grid.empty()) throw UsageError("--n-grid: empty grid");
    spec.n_grid = f.n_grid;
  }
  if (given("--burnin")) spec.burnin = f.burnin;
  if (given("--thin")) spec.thin = f.thin;
  if (given("--samples")) spec.samples = f.samples;
  if (given("--chains")) spec.chains = f.chains;
  if (given("--s")) spec.s = f.s;
  if (given("--seed")) spec.seed = f.seed;
  if (spec.kind == "verify-thm11" && sat_opt->count() > 0) {
    spec.params.beta = saturation_beta;
    spec.has_beta = true;
  }
  if (spec.s && *spec.s > spec.params.n && (spec.kind == "sample" || spec.kind == "arcs"))
    throw UsageError("--s must lie in [1, n]");
  return spec;
}

namespace {

std::string criteria_csv(const Report& report) {
  std::ostringstream out;
  out << "criterion,observed,expected,tolerance,pass\n";
  out.precision(17);
  for (const auto& c : report.criteria) {
    std::string name = c.criterion;
    for (auto& ch : name)
      if (ch == '"') ch = '\'';
    out << '"' << name << "\"," << c.observed << ',' << c.expected << ',' << c.tolerance << ','
        << (c.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

int emit_report(const ExperimentSpec& spec, const Report& report, std::ostream& out) {
  if (spec.format == "csv")
    out << criteria_csv(report);
  else
    out << report.to_json().dump(2) << '\n';
  return report.pass() ? 0 : 1;
}

ChainPlan plan_from(const ExperimentSpec& spec, ChainPlan plan) {
  if (spec.burnin) plan.burnin = *spec.burnin;
  if (spec.thin) plan.thin = *spec.thin;
  if (spec.samples) plan.samples = *spec.samples;
  if (spec.chains) plan.chains = *spec.chains;
  return plan;
}

int run_sample(const ExperimentSpec& spec, std::uint64_t seed, std::ostream& out) {
  ChainConfig config;
  config.params = ModelParams::make(spec.params.n, spec.params.beta);
  config.burnin = spec.burnin.value_or(default_burnin(config.params.n));
  config.thin = spec.thin.value_or(1);
  config.samples = spec.samples.value_or(1);
  config.chains = spec.chains.value_or(1);
  config.master_seed = seed;
  config.validate();
  const int s = spec.s.value_or(std::max(1, config.params.n / 2));
  const bool stats = spec.emit == "stats";

  std::vector<std::string> per_chain(static_cast<std::size_t>(config.chains));
  for_each_sample(
      config,
      [&](int chain, std::int64_t step, const Permutation& sigma) {
        auto& buf = per_chain[static_cast<std::size_t>(chain)];
        if (stats) {
          const auto summary = summarize(sigma, s);
          buf += std::to_string(chain) + ',' + std::to_string(step) + ',' + std::to_string(summary.len_at_s) + ',' +
                 std::to_string(summary.diameter_at_s) + ',' + std::to_string(l1_to_identity(sigma)) + ',' +
                 std::to_string(summary.sorted_lengths.front()) + '\n';
        } else {
          buf += format_permutation(sigma);
          buf += '\n';
        }
      },
      worker_threads(config.chains));
  if (stats) out << "chain,step,cycle_len_s,diameter_s,l1,largest_cycle\n";
  for (const auto& buf : per_chain) out << buf;
  return 0;
}

int run_arcs(const ExperimentSpec& spec, std::uint64_t seed, std::ostream& out) {
  const ModelParams params = ModelParams::make(spec.params.n, spec.params.beta);
  const int n = params.n;
  const std::int64_t burnin = spec.burnin.value_or(0);
  const int s = spec.s.value_or(std::max(1, n / 2));
  HitAndRunKernel kernel(n, params.beta);
  std::vector<int> images(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) images[static_cast<std::size_t>(i)] = i + 1;
  for (std::int64_t t = 1; t <= burnin + 1; ++t) {
    CounterRng rng = CounterRng::stream(seed, 0, static_cast<std::uint64_t>(t));
    kernel.step(images, rng);
  }
  const auto b = kernel.last_bounds();
  const auto y = kernel.last_placement();

  ArcTracker tracker(b, true);
  for (int l = n; l >= 1; --l) tracker.transition(l, y[static_cast<std::size_t>(l - 1)]);
  json events = json::array();
  for (const auto& e : tracker.events())
    events.push_back({{"step", e.step}, {"kind", to_string(e.kind)}, {"arc_ids", e.arc_ids}, {"head", e.head}, {"tail", e.tail}});
  if (spec.trace) {
    out << events.dump(2) << '\n';
    return 0;
  }

  Report report;
  report.kind = "arcs";
  report.seed = seed;
  report.spec = {{"n", n}, {"beta", params.beta}, {"burnin", burnin}, {"s", s}};
  const auto replay = replay_and_check(b, y);
  const auto walk = track_walk(s, b, y);
  const Permutation sigma = Permutation::from_trusted(images);
  const int cycle_min = cycle_containing(sigma, s).front();
  report.criteria.push_back(at_most("arc invariant violations", static_cast<double>(replay.violations), 0.0,
                                    replay.messages.empty() ? "" : replay.messages.front()));
  report.criteria.push_back(within("walk terminal Z_{T-1} = min C_s", walk.terminal(), cycle_min, 0.0));
  json closed = json::array();
  for (const auto& arc : tracker.closed_arcs()) closed.push_back(arc);
  report.data = {{"permutation", format_permutation(sigma)},
                 {"events", events.size()},
                 {"closed_arcs", closed},
                 {"walk", {{"s", s}, {"w", walk.w}, {"z", walk.z}, {"t_stop", walk.t_stop}}}};
  out << report.to_json().dump(2) << '\n';
  return report.pass() ? 0 : 1;
}

}  // namespace

int run(const ExperimentSpec& spec, std::ostream& out_default, std::ostream& err) {
  std::uint64_t seed = 0;
  if (spec.seed) {
    seed = *spec.seed;
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed: " << seed << '\n';
  }

  std::ofstream file;
  if (!spec.out_path.empty()) {
    file.open(spec.out_path);
    if (!file) throw std::runtime_error("cannot open output file " + spec.out_path);
  }
  std::ostream& out = spec.out_path.empty() ? out_default : file;

  const int threads_cap = spec.chains.value_or(8);
  const int threads = worker_threads(threads_cap);

  if (spec.kind == "oracle") {
    auto report = oracle_report(ModelParams::make(spec.params.n, spec.params.beta));
    report.seed = seed;
    return emit_report(spec, report, out);
  }
  if (spec.kind == "sample") return run_sample(spec, seed, out);
  if (spec.kind == "arcs") return run_arcs(spec, seed, out);
  if (spec.kind == "invariants") {
    InvariantsRun r;
    if (!spec.n_grid.empty()) r.replay_sizes = spec.n_grid;
    if (spec.has_beta) r.replay_beta = spec.params.beta;
    r.replays = spec.replays;
    return emit_report(spec, run_invariants(r, seed, threads), out);
  }
  if (spec.kind == "verify-thm11") {
    Thm11Run r;
    if (spec.has_n) r.n = spec.params.n;
    if (!spec.beta_grid.empty()) r.betas = spec.beta_grid;
    if (!spec.n_grid.empty()) r.saturation_sizes = spec.n_grid;
    if (spec.has_beta) r.saturation_beta = spec.params.beta;
    r.plan = plan_from(spec, r.plan);
    r.saturation_plan = plan_from(spec, r.saturation_plan);
    return emit_report(spec, verify_thm11(r, seed, threads), out);
  }
  if (spec.kind == "verify-thm131") {
    Thm131Run r;
    if (spec.has_n) r.n = spec.params.n;
    r.s = spec.s.value_or(std::max(1, r.n / 2));
    if (!spec.beta_grid.empty()) r.betas = spec.beta_grid;
    r.plan = plan_from(spec, r.plan);
    return emit_report(spec, verify_thm131(r, seed, threads), out);
  }
  if (spec.kind == "verify-thm12") {
    Thm12Run r;
    if (spec.has_n) r.n = spec.params.n;
    r.beta_exponent = spec.beta_exponent;
    r.plan = plan_from(spec, r.plan);
    r.reference_samples = static_cast<int>(r.plan.samples);
    return emit_report(spec, verify_thm12(r, seed, threads), out);
  }
  throw UsageError("unknown subcommand " + spec.kind);
}

}  // namespace mallows::cli
