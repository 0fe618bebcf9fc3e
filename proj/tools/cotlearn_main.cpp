// cotlearn: command-line driver for the CoT learning experiments.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cotlearn/bounds.hpp"
#include "cotlearn/cotinfo.hpp"
#include "cotlearn/harness.hpp"
#include "cotlearn/validate.hpp"

namespace fs = std::filesystem;
using namespace cotlearn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> mode;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<std::size_t> length;
  std::optional<std::uint64_t> mc_samples;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config");
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--trials", o.trials, "trials per sample size");
  cmd->add_option("--mode", o.mode, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  cmd->add_option("--length", o.length, "input length of the uniform distribution");
  cmd->add_option("--mc-samples", o.mc_samples, "draws used in Monte Carlo mode");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) {
    if (*o.trials == 0) throw ConfigError("field 'trials': must be at least 1");
    cfg.trials = *o.trials;
  }
  if (o.mode) cfg.mode = *o.mode == "mc" ? EstimationMode::kMonteCarlo : EstimationMode::kExact;
  if (o.out) cfg.out_dir = *o.out;
  if (o.workers) cfg.workers = *o.workers;
  if (o.length) cfg.distribution = {{"kind", "uniform"}, {"length", *o.length}};
  if (o.mc_samples) cfg.mc_samples = *o.mc_samples;
  return cfg;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  const fs::path path = cfg.out_dir / name;
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  std::cout << "wrote " << path.string() << '\n';
  return os;
}

std::string star_string(const InfoCurve& c) {
  return c.epsilon_star ? format_real(*c.epsilon_star) : std::string("none");
}

nlohmann::json curve_summary(const Experiment& ex, const InfoCurve& curve) {
  return {{"class", ex.cls->kind()},
          {"parameters", ex.cls->parameters()},
          {"class_size", ex.cls->size()},
          {"target_id", ex.target_id},
          {"epsilon_star", star_string(curve)},
          {"info_at_zero_plus", curve.info_at_zero_plus.to_string()},
          {"ratio_at_zero", curve.ratio_at_zero().to_string()},
          {"breakpoints", curve.breakpoints.size()}};
}

int cmd_info_curve(const ExperimentConfig& cfg) {
  const Experiment ex = build_experiment(cfg);
  const ExactOptions opts{cfg.budget, cfg.workers};
  InfoCurve curve;
  if (cfg.mode == EstimationMode::kMonteCarlo) {
    const McCurve mc = monte_carlo_info_curve(*ex.target, *ex.cls, *ex.sampler, cfg.mc_samples,
                                              derive_seed(cfg.seed, {3}), opts);
    curve = mc.curve;
    std::vector<PairStats> plain(mc.pairs.begin(), mc.pairs.end());
    auto os = open_out(cfg, "pairwise.csv");
    write_pairwise_csv(os, plain);
  } else {
    if (!ex.distribution) throw BudgetError("input support is too large for exact mode; use --mode mc");
    const auto pairs = pairwise_stats(*ex.target, *ex.cls, *ex.distribution, opts);
    curve = curve_from_pairs(pairs);
    auto os = open_out(cfg, "pairwise.csv");
    write_pairwise_csv(os, pairs);
  }
  {
    auto os = open_out(cfg, "info_curve.csv");
    write_info_curve_csv(os, curve);
  }
  const auto summary = curve_summary(ex, curve);
  auto os = open_out(cfg, "summary.json");
  os << summary.dump(2) << '\n';
  std::cout << "epsilon_star=" << star_string(curve) << " I(0+)=" << curve.info_at_zero_plus.to_string()
            << " ratio=" << curve.ratio_at_zero().to_string() << '\n';
  return kExitOk;
}

int write_sweep(const ExperimentConfig& cfg, const SweepConfig& sweep, const std::string& stem) {
  const auto points = run_info_sweep(cfg, sweep);
  for (const auto& p : points) {
    std::string name = stem;
    if (sweep.kind == SweepKind::kTransfer) {
      name += "_train" + std::to_string(p.value) + "_test" + std::to_string(p.test_length);
    } else {
      name += (sweep.kind == SweepKind::kDetail ? "_T" : "_n") + std::to_string(p.value);
    }
    auto os = open_out(cfg, name + ".csv");
    write_info_curve_csv(os, p.curve);
  }
  auto os = open_out(cfg, stem + "_summary.csv");
  write_sweep_summary_csv(os, sweep.kind, points);
  write_sweep_summary_csv(std::cout, sweep.kind, points);
  return kExitOk;
}

int cmd_info_sweep(const ExperimentConfig& cfg) {
  SweepConfig sweep;
  if (cfg.sweep && cfg.sweep->kind != SweepKind::kTransfer) {
    sweep = *cfg.sweep;
  } else {
    sweep.kind = SweepKind::kLength;
    sweep.values = {2, 4, 6, 8, 10};
  }
  return write_sweep(cfg, sweep, "info_curve");
}

int cmd_transfer(const ExperimentConfig& cfg) {
  SweepConfig sweep;
  if (cfg.sweep && cfg.sweep->kind == SweepKind::kTransfer) {
    sweep = *cfg.sweep;
  } else {
    sweep.kind = SweepKind::kTransfer;
    sweep.train_length = 5;
    sweep.test_lengths = {5, 8, 12};
  }
  return write_sweep(cfg, sweep, "transfer_curve");
}

int cmd_learn(const ExperimentConfig& cfg, bool with_complexity) {
  const auto records = run_learning_experiment(cfg);
  {
    auto os = open_out(cfg, "learning.csv");
    write_learning_csv(os, records);
  }
  {
    auto os = open_out(cfg, "zero_error.csv");
    write_zero_error_csv(os, zero_error_probability(records));
  }
  if (with_complexity) {
    const auto rows = empirical_sample_complexity(records, cfg.target_eps);
    auto os = open_out(cfg, "sample_complexity.csv");
    write_sample_complexity_csv(os, rows);
    write_sample_complexity_csv(std::cout, rows);
  }
  return kExitOk;
}

int cmd_bounds(const ExperimentConfig& cfg) {
  const Experiment ex = build_experiment(cfg);
  if (!ex.distribution) throw BudgetError("bounds need an exact curve; input support is too large");
  const ExactOptions opts{cfg.budget, cfg.workers};
  const InfoCurve curve = info_curve(*ex.target, *ex.cls, *ex.distribution, opts);
  const auto& b = cfg.bounds;
  const double log_card = std::log(static_cast<double>(ex.cls->size()));
  const Prior prior = Prior::uniform(ex.cls->size());
  const double star = curve.epsilon_star.value_or(0.0);
  std::vector<BoundRow> rows;
  auto p = [](double v) { return format_real(v); };
  for (double eps : b.epsilons) {
    const ExtReal info = curve.evaluate(eps);
    const double eps_plus = std::max(eps, star);
    const std::vector<std::pair<std::string, std::string>> base = {
        {"epsilon", p(eps)}, {"delta", p(b.delta)}, {"info", info.to_string()}};
    rows.push_back({"realizable_upper_finite", base, realizable_upper(log_card, info, b.delta, RealizableVariant::kFinite)});
    rows.push_back({"e2e_upper_finite", base,
                    realizable_upper(log_card, ExtReal(eps_plus), b.delta, RealizableVariant::kFinite)});
    auto with_vc = base;
    with_vc.emplace_back("vc", p(b.vc));
    rows.push_back({"realizable_upper_general", with_vc, realizable_upper(b.vc, info, b.delta, RealizableVariant::kGeneral)});
    rows.push_back({"two_point_lower", base, two_point_lower(info, b.delta)});
    auto with_gamma = base;
    with_gamma.emplace_back("gamma_ratio", p(b.gamma_ratio));
    rows.push_back({"mixed_upper", with_gamma, mixed_upper(log_card, b.gamma_ratio, info, eps, b.delta)});
    rows.push_back({"mdl_upper_uniform_prior", base,
                    mdl_upper_nats(prior.description_length(ex.target_id), info, b.delta)});
  }
  for (std::uint64_t m : b.m_values) {
    rows.push_back({"expected_error_lower", {{"m", std::to_string(m)}}, {expected_error_lower(curve, m), {}}});
    rows.push_back({"mdl_error_bound",
                    {{"m", std::to_string(m)}, {"delta", p(b.delta)}},
                    {mdl_error_bound(curve, prior.mass(ex.target_id), m, b.delta), {}}});
  }
  const SymmetricChannel q{b.channel_error, b.channel_outcomes};
  const ExtReal cq = channel_capacity_factor(q);
  rows.push_back({"channel_capacity_factor", {{"e", p(q.error_rate)}, {"N", p(q.outcomes)}}, {cq.value(), {}}});
  if (b.fano) {
    for (auto mode : {PairInfoMode::kMaxPairHalf, PairInfoMode::kMaxEntry}) {
      const FanoResult f = fano_lower(*ex.cls, *ex.distribution, q, b.packing_epsilon, mode, opts);
      std::string flag = f.vacuous ? "vacuous" : f.degenerate ? "all pairs infinite" : f.infinite_pairs ? "some pairs infinite" : "";
      rows.push_back({"fano_m_threshold",
                      {{"epsilon", p(b.packing_epsilon)},
                       {"mode", mode == PairInfoMode::kMaxPairHalf ? "max_pair_half" : "max_entry"},
                       {"packing", std::to_string(f.packing_size)},
                       {"lower_proxy", f.lower_proxy.to_string()},
                       {"upper_proxy", f.upper_proxy.to_string()},
                       {"uniform_prior", f.uniform_prior_value.to_string()}},
                      {f.m_threshold, flag}});
    }
  }
  auto os = open_out(cfg, "bounds.csv");
  write_bounds_csv(os, rows);
  write_bounds_csv(std::cout, rows);
  return kExitOk;
}

int cmd_validate(const Overrides& o, const ExperimentConfig& cfg) {
  SuiteOptions opts;
  opts.workers = cfg.workers;
  opts.seed = cfg.seed;
  opts.exact.budget = cfg.budget;
  std::vector<CheckResult> results;
  if (o.config.empty()) {
    results = run_reference_suite(opts);
  } else {
    const Experiment ex = build_experiment(cfg);
    if (!ex.distribution) throw BudgetError("validation needs exact mode; input support is too large");
    results = run_invariant_suite(*ex.target, ex.target_id, *ex.cls, *ex.distribution, opts);
  }
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) std::cout << " -- " << r.detail;
    std::cout << '\n';
    failed += r.passed ? 0 : 1;
  }
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " checks passed\n";
  return failed ? kExitOther : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chain-of-thought learning experiments"};
  app.require_subcommand(1);
  Overrides o;
  auto* info = app.add_subcommand("info-curve", "exact or Monte Carlo CoT information curve");
  auto* sweep = app.add_subcommand("info-sweep", "curves over input length or CoT detail");
  auto* learn = app.add_subcommand("learn", "learning-rule simulation (learning.csv)");
  auto* complexity = app.add_subcommand("sample-complexity", "learning simulation plus sample_complexity.csv");
  auto* transfer = app.add_subcommand("transfer", "transfer curves between input lengths");
  auto* bounds = app.add_subcommand("bounds", "sample-complexity bound calculators (bounds.csv)");
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  for (auto* cmd : {info, sweep, learn, complexity, transfer, bounds, validate}) add_common(cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const ExperimentConfig cfg = resolve(o);
    if (*info) return cmd_info_curve(cfg);
    if (*sweep) return cmd_info_sweep(cfg);
    if (*learn) return cmd_learn(cfg, false);
    if (*complexity) return cmd_learn(cfg, true);
    if (*transfer) return cmd_transfer(cfg);
    if (*bounds) return cmd_bounds(cfg);
    if (*validate) return cmd_validate(o, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
