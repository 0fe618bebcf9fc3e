#include "cotlearn/harness.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "cotlearn/dfa.hpp"
#include "cotlearn/linthresh.hpp"
#include "cotlearn/parallel.hpp"
#include "cotlearn/synthetic.hpp"

namespace cotlearn {

namespace {

using nlohmann::json;

// Stream tags keep the derived seeds of different purposes apart.
constexpr std::uint64_t kInputStream = 1;
constexpr std::uint64_t kSelectStream = 2;
constexpr std::uint64_t kEmpiricalStream = 3;
constexpr std::uint64_t kTargetStream = 4;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("field '" + field + "': " + why);
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) bad(where + "." + key, "is required");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    bad(where + "." + key, "has the wrong type");
  }
}

std::vector<TableMap> maps(const json& j, const char* key, const std::string& where) {
  return field<std::vector<TableMap>>(j, key, where);
}

DfaSpec dfa_spec(const json& j) {
  DfaSpec spec;
  spec.num_states = field<std::uint32_t>(j, "num_states", "class");
  spec.alphabet_size = field<std::uint32_t>(j, "alphabet_size", "class");
  spec.init = j.contains("init") ? field<StateId>(j, "init", "class") : 0;
  spec.accept = j.contains("accept") ? field<std::vector<StateId>>(j, "accept", "class")
                                     : std::vector<StateId>{spec.num_states == 0 ? 0 : spec.num_states - 1};
  if (j.contains("detail") && !(j["detail"].is_string() && j["detail"] == "full")) {
    spec.detail = field<std::size_t>(j, "detail", "class");
  }
  return spec;
}

template <typename Fn>
auto as_config_error(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const PreconditionError& e) {
    bad(where, e.what());
  }
}

HypothesisId resolve_target(const ExperimentConfig& cfg, const HypothesisClass& cls) {
  const json& t = cfg.target;
  const auto kind = field<std::string>(t, "kind", "target");
  if (kind == "figure4") {
    const auto* dfa = dynamic_cast<const DfaClass*>(&cls);
    const DfaHypothesis fig = figure4_target();
    if (!dfa || dfa->spec().num_states != 4 || dfa->spec().alphabet_size != 2 || dfa->spec().init != 0 ||
        dfa->spec().accept != fig.spec().accept) {
      bad("target.kind", "figure4 needs a dfa class with 4 states, 2 symbols, init 0 and accept [3]");
    }
    return dfa->encode(fig.table());
  }
  if (kind == "id") {
    const auto id = field<HypothesisId>(t, "id", "target");
    if (id >= cls.size()) bad("target.id", "is outside the class");
    return id;
  }
  if (kind == "seeded_uniform") {
    const auto seed = t.contains("seed") ? field<std::uint64_t>(t, "seed", "target") : cfg.seed;
    Rng rng(derive_seed(seed, {kTargetStream}));
    return uniform_index(rng, cls.size());
  }
  if (kind == "table") {
    const auto* dfa = dynamic_cast<const DfaClass*>(&cls);
    if (!dfa) bad("target.kind", "table targets need a dfa class");
    const auto table = field<std::vector<StateId>>(t, "table", "target");
    return as_config_error("target.table", [&] { return dfa->encode(table); });
  }
  if (kind == "weights") {
    const auto* lt = dynamic_cast<const LinThreshClass*>(&cls);
    if (!lt) bad("target.kind", "weight targets need a linthresh class");
    const auto w = field<std::vector<int>>(t, "weights", "target");
    return as_config_error("target.weights", [&] { return lt->encode(w); });
  }
  bad("target.kind", "must be figure4, id, seeded_uniform, table or weights");
}

std::shared_ptr<const FiniteDistribution> load_support(const json& d) {
  json list;
  if (d.contains("support")) {
    list = d["support"];
  } else if (d.contains("file")) {
    const auto path = field<std::string>(d, "file", "distribution");
    std::ifstream in(path);
    if (!in) bad("distribution.file", "cannot open " + path);
    try {
      list = json::parse(in);
    } catch (const json::parse_error& e) {
      bad("distribution.file", e.what());
    }
  } else {
    bad("distribution.support", "is required for explicit distributions");
  }
  if (!list.is_array()) bad("distribution.support", "must be a list of {x, p} entries");
  std::vector<InputSeq> xs;
  std::vector<double> ps;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "distribution.support[" + std::to_string(i) + "]";
    xs.push_back(field<InputSeq>(list[i], "x", where));
    ps.push_back(field<double>(list[i], "p", where));
  }
  return as_config_error("distribution.support", [&] {
    return std::make_shared<const FiniteDistribution>(FiniteDistribution::from_support(std::move(xs), std::move(ps)));
  });
}

const char* sweep_column(SweepKind kind) { return kind == SweepKind::kDetail ? "T" : "n"; }

}  // namespace

std::unique_ptr<HypothesisClass> build_class(const json& spec) {
  const auto kind = field<std::string>(spec, "kind", "class");
  return as_config_error("class", [&]() -> std::unique_ptr<HypothesisClass> {
    if (kind == "dfa") return std::make_unique<DfaClass>(dfa_spec(spec));
    if (kind == "linthresh") {
      LinThreshSpec s{field<std::uint32_t>(spec, "d", "class"), field<std::uint32_t>(spec, "T", "class"),
                      spec.contains("n") ? field<std::uint32_t>(spec, "n", "class") : 8U};
      return std::make_unique<LinThreshClass>(s);
    }
    if (kind == "product") {
      return std::make_unique<ProductClass>(maps(spec, "cot_part", "class"), maps(spec, "ete_part", "class"));
    }
    if (kind == "fully_informative") return std::make_unique<FullyInformativeClass>(maps(spec, "base", "class"));
    if (kind == "iid") {
      return std::make_unique<IidReplicationClass>(maps(spec, "base", "class"), field<std::size_t>(spec, "T", "class"));
    }
    bad("class.kind", "must be dfa, linthresh, product, fully_informative or iid");
  });
}

Experiment build_experiment(const ExperimentConfig& cfg) {
  Experiment ex;
  ex.cls = build_class(cfg.class_spec);
  ex.target_id = resolve_target(cfg, *ex.cls);
  ex.target = ex.cls->hypothesis(ex.target_id);

  const json& dj = cfg.distribution;
  const auto dkind = field<std::string>(dj, "kind", "distribution");
  std::optional<std::size_t> fixed_length;
  if (const auto* dfa = dynamic_cast<const DfaClass*>(ex.cls.get())) {
    ex.alphabet = dfa->spec().alphabet_size;
  } else if (const auto* lt = dynamic_cast<const LinThreshClass*>(ex.cls.get())) {
    ex.alphabet = 2;
    ex.length = lt->spec().n;
  } else if (const auto* pc = dynamic_cast<const ProductClass*>(ex.cls.get())) {
    ex.alphabet = static_cast<std::uint32_t>(pc->domain_size());
    fixed_length = 1;
  } else if (const auto* fi = dynamic_cast<const FullyInformativeClass*>(ex.cls.get())) {
    ex.alphabet = static_cast<std::uint32_t>(fi->domain_size());
    fixed_length = 1;
  } else if (const auto* iid = dynamic_cast<const IidReplicationClass*>(ex.cls.get())) {
    ex.alphabet = static_cast<std::uint32_t>(iid->domain_size());
    fixed_length = iid->replication();
  }
  if (dkind == "uniform") {
    for (const auto& [k, v] : dj.items()) {
      if (k != "kind" && k != "length") bad("distribution." + k, "unknown key");
    }
    if (dj.contains("length")) {
      ex.length = field<std::size_t>(dj, "length", "distribution");
    } else if (fixed_length) {
      ex.length = *fixed_length;
    } else if (!dynamic_cast<const LinThreshClass*>(ex.cls.get())) {
      bad("distribution.length", "is required");
    }
    if (fixed_length && ex.length != *fixed_length) {
      bad("distribution.length", "must be " + std::to_string(*fixed_length) + " for this class");
    }
    ex.sampler = std::make_shared<const UniformSequenceSampler>(ex.alphabet, ex.length);
    try {
      ex.distribution = std::make_shared<const FiniteDistribution>(FiniteDistribution::uniform(ex.alphabet, ex.length));
    } catch (const SizeError&) {
      ex.distribution = nullptr;  // Monte Carlo only
    }
  } else if (dkind == "support") {
    for (const auto& [k, v] : dj.items()) {
      if (k != "kind" && k != "support" && k != "file") bad("distribution." + k, "unknown key");
    }
    ex.distribution = load_support(dj);
    ex.length = ex.distribution->input_at(0).size();
    ex.sampler = std::make_shared<const DistributionSampler>(*ex.distribution);
  } else {
    bad("distribution.kind", "must be uniform or support");
  }
  return ex;
}

std::vector<ExperimentRecord> run_learning_experiment(const ExperimentConfig& cfg) {
  return run_learning_experiment(cfg, build_experiment(cfg));
}

std::vector<ExperimentRecord> run_learning_experiment(const ExperimentConfig& cfg, const Experiment& ex) {
  std::shared_ptr<const FiniteDistribution> d = ex.distribution;
  if (cfg.mode == EstimationMode::kMonteCarlo) {
    d = std::make_shared<const FiniteDistribution>(
        empirical_distribution(*ex.sampler, cfg.mc_samples, derive_seed(cfg.seed, {kEmpiricalStream})));
  }
  if (!d) throw BudgetError("input support is too large for exact mode; use the Monte Carlo mode");
  const std::uint64_t n = ex.cls->size();
  if (d->size() != 0 && n > cfg.budget / d->size()) {
    throw BudgetError("learning table of " + std::to_string(n) + " hypotheses x " + std::to_string(d->size()) +
                      " inputs exceeds the exact budget");
  }
  std::optional<Prior> prior;
  if (std::find(cfg.rules.begin(), cfg.rules.end(), RuleKind::kMDL) != cfg.rules.end()) {
    if (cfg.prior.is_string() && cfg.prior == "uniform") {
      prior = Prior::uniform(n);
    } else if (cfg.prior.is_array()) {
      auto w = cfg.prior.get<std::vector<double>>();
      if (w.size() != n) bad("prior", "needs one weight per hypothesis");
      prior = as_config_error("prior", [&] { return Prior::from_weights(std::move(w)); });
    } else {
      bad("prior", "must be \"uniform\" or a list of weights");
    }
  }

  const ReferenceBehavior ref(*ex.target, *d);
  const LearningTable table(*ex.cls, ref, cfg.workers);
  std::vector<double> risk(n);
  parallel_for(n, cfg.workers, [&](std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t id = b; id < e; ++id) risk[id] = table.ete_disagreement(id, *d);
  });

  const std::size_t rules = cfg.rules.size();
  const std::uint64_t trials = cfg.trials;
  const std::uint64_t tasks = cfg.m_grid.size() * trials;
  std::vector<ExperimentRecord> slots(tasks * rules);
  parallel_for(
      tasks, cfg.workers,
      [&](std::uint64_t begin, std::uint64_t end) {
        IndexedSample sample;
        for (std::uint64_t task = begin; task < end; ++task) {
          const std::uint64_t m = cfg.m_grid[task / trials];
          const std::uint64_t trial = task % trials;
          Rng rng(derive_seed(cfg.seed, {kInputStream, m, trial}));
          sample.cot.resize(m);
          for (auto& i : sample.cot) i = d->sample_index(rng);
          for (std::size_t r = 0; r < rules; ++r) {
            const RuleKind rule = cfg.rules[r];
            const auto seed = derive_seed(cfg.seed, {kSelectStream, static_cast<std::uint64_t>(rule), m, trial});
            const RuleOutput out = table.pick(rule, sample, seed, prior ? &*prior : nullptr);
            ExperimentRecord& rec = slots[task * rules + r];
            rec.rule = rule;
            rec.m = m;
            rec.trial = trial;
            rec.risk = risk[out.chosen];
            rec.candidate_set_size = out.candidate_set_size;
            rec.flags = out.unrealizable ? "unrealizable" : "";
          }
        }
      },
      4);

  std::vector<ExperimentRecord> records;
  records.reserve(slots.size());
  for (std::size_t r = 0; r < rules; ++r) {
    for (std::uint64_t task = 0; task < tasks; ++task) records.push_back(std::move(slots[task * rules + r]));
  }
  return records;
}

std::vector<MeanRiskRow> mean_risks(const std::vector<ExperimentRecord>& records) {
  std::vector<RuleKind> order;
  std::map<std::pair<int, std::uint64_t>, std::pair<double, std::uint64_t>> acc;
  for (const auto& r : records) {
    if (std::find(order.begin(), order.end(), r.rule) == order.end()) order.push_back(r.rule);
    auto& a = acc[{static_cast<int>(r.rule), r.m}];
    a.first += r.risk;
    ++a.second;
  }
  std::vector<MeanRiskRow> rows;
  for (RuleKind rule : order) {
    for (const auto& [key, a] : acc) {
      if (key.first == static_cast<int>(rule)) {
        rows.push_back({rule, key.second, a.first / static_cast<double>(a.second)});
      }
    }
  }
  return rows;
}

std::vector<SampleComplexityRow> empirical_sample_complexity(const std::vector<ExperimentRecord>& records,
                                                             const std::vector<double>& target_eps) {
  const auto means = mean_risks(records);
  std::vector<RuleKind> order;
  for (const auto& row : means) {
    if (std::find(order.begin(), order.end(), row.rule) == order.end()) order.push_back(row.rule);
  }
  std::vector<SampleComplexityRow> out;
  for (RuleKind rule : order) {
    for (double eps : target_eps) {
      SampleComplexityRow row{rule, eps, std::nullopt};
      for (const auto& mr : means) {
        if (mr.rule == rule && mr.mean_risk <= eps) {
          row.m_required = mr.m;
          break;
        }
      }
      out.push_back(row);
    }
  }
  return out;
}

std::vector<ZeroErrorRow> zero_error_probability(const std::vector<ExperimentRecord>& records) {
  std::vector<RuleKind> order;
  std::map<std::pair<int, std::uint64_t>, std::pair<std::uint64_t, std::uint64_t>> acc;
  for (const auto& r : records) {
    if (std::find(order.begin(), order.end(), r.rule) == order.end()) order.push_back(r.rule);
    auto& a = acc[{static_cast<int>(r.rule), r.m}];
    if (r.risk == 0.0) ++a.first;
    ++a.second;
  }
  std::vector<ZeroErrorRow> rows;
  for (RuleKind rule : order) {
    for (const auto& [key, a] : acc) {
      if (key.first == static_cast<int>(rule)) {
        rows.push_back({rule, key.second, static_cast<double>(a.first) / static_cast<double>(a.second)});
      }
    }
  }
  return rows;
}

std::vector<SweepPoint> run_info_sweep(const ExperimentConfig& cfg, const SweepConfig& sweep) {
  const ExactOptions opts{cfg.budget, cfg.workers};
  std::vector<SweepPoint> points;
  auto curve_for = [&](const ExperimentConfig& c) {
    const Experiment ex = build_experiment(c);
    if (c.mode == EstimationMode::kMonteCarlo) {
      return monte_carlo_info_curve(*ex.target, *ex.cls, *ex.sampler, c.mc_samples,
                                    derive_seed(c.seed, {kEmpiricalStream}), opts)
          .curve;
    }
    if (!ex.distribution) throw BudgetError("input support is too large for exact mode; use the Monte Carlo mode");
    return info_curve(*ex.target, *ex.cls, *ex.distribution, opts);
  };
  switch (sweep.kind) {
    case SweepKind::kLength:
      for (std::size_t n : sweep.values) {
        ExperimentConfig c = cfg;
        c.distribution = {{"kind", "uniform"}, {"length", n}};
        points.push_back({"n=" + std::to_string(n), n, 0, curve_for(c)});
      }
      break;
    case SweepKind::kDetail:
      if (cfg.class_spec.value("kind", "") != "dfa") bad("sweep.kind", "detail sweeps need a dfa class");
      for (std::size_t t : sweep.values) {
        ExperimentConfig c = cfg;
        c.class_spec["detail"] = t;
        points.push_back({"T=" + std::to_string(t), t, 0, curve_for(c)});
      }
      break;
    case SweepKind::kTransfer: {
      if (cfg.mode != EstimationMode::kExact) bad("mode", "transfer sweeps need exact mode");
      ExperimentConfig train_cfg = cfg;
      train_cfg.distribution = {{"kind", "uniform"}, {"length", sweep.train_length}};
      const Experiment train = build_experiment(train_cfg);
      if (!train.distribution) throw BudgetError("training support is too large for exact mode");
      for (std::size_t n : sweep.test_lengths) {
        const auto d_test = FiniteDistribution::uniform(train.alphabet, n);
        points.push_back({"train=" + std::to_string(sweep.train_length) + ",test=" + std::to_string(n),
                          sweep.train_length, n,
                          transfer_info_curve(*train.target, *train.cls, *train.distribution, d_test, opts)});
      }
      break;
    }
  }
  return points;
}

CotDataset corrupt_dataset(const CotDataset& s, double error_rate, const OutcomeCode& code, std::uint64_t seed) {
  if (!(error_rate >= 0.0 && error_rate <= 1.0)) throw PreconditionError("channel error rate must lie in [0, 1]");
  if (code.y_size == 0 || code.z_size == 0) throw PreconditionError("outcome code sizes must be positive");
  Rng rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Token> ydraw(0, code.y_size - 1);
  std::uniform_int_distribution<Token> zdraw(0, code.z_size - 1);
  CotDataset out = s;
  for (auto& ex : out.examples) {
    if (ex.y >= code.y_size) throw PreconditionError("output token outside the channel's outcome code");
    if (ex.z) {
      for (Token t : *ex.z) {
        if (t >= code.z_size) throw PreconditionError("CoT token outside the channel's outcome code");
      }
    }
    if (!(coin(rng) < error_rate)) continue;
    ex.y = ydraw(rng);
    if (ex.z) {
      for (auto& t : *ex.z) t = zdraw(rng);
    }
  }
  return out;
}

void write_learning_csv(std::ostream& os, const std::vector<ExperimentRecord>& records) {
  os << "rule,m,trial,risk,set_size,flags\n";
  for (const auto& r : records) {
    os << rule_name(r.rule) << ',' << r.m << ',' << r.trial << ',' << format_real(r.risk) << ','
       << r.candidate_set_size << ',' << r.flags << '\n';
  }
}

void write_sample_complexity_csv(std::ostream& os, const std::vector<SampleComplexityRow>& rows) {
  os << "rule,epsilon,m_required\n";
  for (const auto& r : rows) {
    os << rule_name(r.rule) << ',' << format_real(r.epsilon) << ',';
    if (r.m_required) {
      os << *r.m_required;
    } else {
      os << "not reached";
    }
    os << '\n';
  }
}

void write_zero_error_csv(std::ostream& os, const std::vector<ZeroErrorRow>& rows) {
  os << "rule,m,zero_error_fraction\n";
  for (const auto& r : rows) os << rule_name(r.rule) << ',' << r.m << ',' << format_real(r.fraction) << '\n';
}

void write_sweep_summary_csv(std::ostream& os, SweepKind kind, const std::vector<SweepPoint>& points) {
  if (kind == SweepKind::kTransfer) {
    os << "n_train,n_test,epsilon_star,info_at_zero_plus,ratio_at_zero,min_breakpoint_info\n";
  } else {
    os << sweep_column(kind) << ",epsilon_star,info_at_zero_plus,ratio_at_zero,min_breakpoint_info\n";
  }
  for (const auto& p : points) {
    ExtReal lowest = ExtReal::infinity();
    for (const auto& b : p.curve.breakpoints) lowest = std::min(lowest, b.info);
    os << p.value << ',';
    if (kind == SweepKind::kTransfer) os << p.test_length << ',';
    os << (p.curve.epsilon_star ? format_real(*p.curve.epsilon_star) : std::string("none")) << ','
       << p.curve.info_at_zero_plus.to_string() << ',' << p.curve.ratio_at_zero().to_string() << ','
       << lowest.to_string() << '\n';
  }
}

}  // namespace cotlearn
