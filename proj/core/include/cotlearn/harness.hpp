#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cotlearn/bounds.hpp"
#include "cotlearn/cotinfo.hpp"
#include "cotlearn/rules.hpp"

namespace cotlearn {

enum class EstimationMode { kExact, kMonteCarlo };

enum class SweepKind { kLength, kDetail, kTransfer };

struct SweepConfig {
  SweepKind kind = SweepKind::kLength;
  std::vector<std::size_t> values;        // lengths or detail levels
  std::size_t train_length = 5;           // transfer only
  std::vector<std::size_t> test_lengths;  // transfer only
};

struct BoundsConfig {
  double delta = 0.05;
  double vc = 1.0;
  double gamma_ratio = 1.0;
  double channel_error = 0.01;
  double channel_outcomes = 1000.0;
  std::vector<double> epsilons = {0.0};
  std::vector<std::uint64_t> m_values = {1, 10, 100};
  bool fano = false;
  double packing_epsilon = 0.1;
};

/// Everything an experiment needs. Defaults reproduce the 4-state DFA setup.
struct ExperimentConfig {
  nlohmann::json class_spec = {{"kind", "dfa"},
                               {"num_states", 4},
                               {"alphabet_size", 2},
                               {"init", 0},
                               {"accept", {3}},
                               {"detail", "full"}};
  nlohmann::json target = {{"kind", "figure4"}};
  nlohmann::json distribution = {{"kind", "uniform"}, {"length", 10}};
  std::vector<RuleKind> rules = {RuleKind::kEtECons, RuleKind::kCoTCons};
  std::vector<std::uint64_t> m_grid;
  std::vector<double> target_eps;
  std::uint64_t trials = 500;
  std::uint64_t seed = 1;
  EstimationMode mode = EstimationMode::kExact;
  std::uint64_t mc_samples = 100000;
  unsigned workers = 0;
  std::uint64_t budget = kDefaultExactBudget;
  std::filesystem::path out_dir = "out";
  nlohmann::json prior = "uniform";
  std::optional<SweepConfig> sweep;
  BoundsConfig bounds;

  ExperimentConfig();
};

/// Parses a config document; unknown keys and bad values raise ConfigError naming the field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Round(ratio^k) for k = 0, 1, ... while <= stop, deduplicated, starting at `start`.
std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t stop, double ratio);

std::unique_ptr<HypothesisClass> build_class(const nlohmann::json& spec);

/// Resolved class, target and input distribution.
struct Experiment {
  std::unique_ptr<HypothesisClass> cls;
  HypothesisId target_id = kNoId;
  std::unique_ptr<CotHypothesis> target;
  std::uint32_t alphabet = 2;
  std::size_t length = 1;
  std::shared_ptr<const FiniteDistribution> distribution;  // null when too large for exact mode
  std::shared_ptr<const InputSampler> sampler;
};

Experiment build_experiment(const ExperimentConfig& cfg);

struct ExperimentRecord {
  RuleKind rule = RuleKind::kCoTCons;
  std::uint64_t m = 0;
  std::uint64_t trial = 0;
  double risk = 0.0;
  std::uint64_t candidate_set_size = 0;
  std::string flags;
};

/// All (rule, m, trial) records in rule, grid, trial order. Inputs for a given
/// (m, trial) are shared by every rule; the selection draw is rule specific.
std::vector<ExperimentRecord> run_learning_experiment(const ExperimentConfig& cfg);
std::vector<ExperimentRecord> run_learning_experiment(const ExperimentConfig& cfg, const Experiment& ex);

struct SampleComplexityRow {
  RuleKind rule;
  double epsilon;
  std::optional<std::uint64_t> m_required;  // unset: "not reached"
};

std::vector<SampleComplexityRow> empirical_sample_complexity(const std::vector<ExperimentRecord>& records,
                                                             const std::vector<double>& target_eps);

struct ZeroErrorRow {
  RuleKind rule;
  std::uint64_t m;
  double fraction;
};

std::vector<ZeroErrorRow> zero_error_probability(const std::vector<ExperimentRecord>& records);

/// Mean risk per (rule, m), grid order.
struct MeanRiskRow {
  RuleKind rule;
  std::uint64_t m;
  double mean_risk;
};
std::vector<MeanRiskRow> mean_risks(const std::vector<ExperimentRecord>& records);

struct SweepPoint {
  std::string label;
  std::size_t value = 0;       // length or detail
  std::size_t test_length = 0; // transfer only
  InfoCurve curve;
};

std::vector<SweepPoint> run_info_sweep(const ExperimentConfig& cfg, const SweepConfig& sweep);

/// Symbol-wise encoding of (y, z) used by the corruption channel: y in
/// [0, y_size) and each z token in [0, z_size).
struct OutcomeCode {
  std::uint32_t y_size = 2;
  std::uint32_t z_size = 2;
};

/// Resamples each example's (y, z) through the symmetric channel. With probability
/// e the pair is replaced by a uniform draw from the whole outcome space.
CotDataset corrupt_dataset(const CotDataset& s, double error_rate, const OutcomeCode& code, std::uint64_t seed);

void write_learning_csv(std::ostream& os, const std::vector<ExperimentRecord>& records);
void write_sample_complexity_csv(std::ostream& os, const std::vector<SampleComplexityRow>& rows);
void write_zero_error_csv(std::ostream& os, const std::vector<ZeroErrorRow>& rows);
void write_sweep_summary_csv(std::ostream& os, SweepKind kind, const std::vector<SweepPoint>& points);

/// Default target error levels for sample-complexity tables.
std::vector<double> default_target_eps();

}  // namespace cotlearn
