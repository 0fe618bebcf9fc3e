#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cotlearn/distribution.hpp"
#include "cotlearn/hypothesis.hpp"

namespace cotlearn {

enum class RuleKind { kEtECons, kCoTCons, kEtEERM, kCoTERM, kMDL };

std::string rule_name(RuleKind rule);
/// Accepts the names produced by rule_name; throws ConfigError otherwise.
RuleKind parse_rule(const std::string& name);

enum class SupervisionMode { kE2E, kCoT };

/// Non-negative weights over class ids summing to at most 1 (sub-probabilities allowed).
class Prior {
 public:
  static Prior uniform(std::uint64_t class_size);
  static Prior from_weights(std::vector<double> weights);

  [[nodiscard]] double mass(HypothesisId id) const;
  /// log(1/p(h)) in nats; +inf for zero mass. Uniform priors return log|H| directly.
  [[nodiscard]] ExtReal description_length(HypothesisId id) const;
  [[nodiscard]] std::uint64_t size() const { return size_; }

 private:
  Prior() = default;
  std::uint64_t size_ = 0;
  std::vector<double> weights_;  // empty for the uniform prior
};

struct RuleOutput {
  HypothesisId chosen = kNoId;
  std::shared_ptr<const CotHypothesis> hypothesis;  // null when produced from a LearningTable
  std::uint64_t candidate_set_size = 0;
  std::string rule_name;
  std::uint64_t rng_seed = 0;
  bool unrealizable = false;  // consistency set was empty; fell back to ERM
};

/// Ids consistent with s. E2E mode checks outputs only; CoT mode also checks
/// z on every example that carries one. Examples without z constrain only the
/// output in both modes, which is the mixed-supervision rule.
std::vector<HypothesisId> consistency_set(const HypothesisClass& cls, const CotDataset& s, SupervisionMode mode,
                                          unsigned workers = 1);

/// Ids minimising empirical E2E or CoT risk.
std::vector<HypothesisId> erm_set(const HypothesisClass& cls, const CotDataset& s, SupervisionMode mode,
                                  unsigned workers = 1);

/// Runs a rule. Consistency and ERM rules choose uniformly (seeded) from their
/// candidate set; MDL takes the highest-prior CoT-consistent id, lowest id on ties.
RuleOutput pick(RuleKind rule, const HypothesisClass& cls, const CotDataset& s, std::uint64_t seed,
                const Prior* prior = nullptr, unsigned workers = 1);

/// Sample drawn from a finite support and labelled by the reference hypothesis,
/// kept as support indices. Examples in `ete_only` carry no CoT.
struct IndexedSample {
  std::vector<std::size_t> cot;
  std::vector<std::size_t> ete_only;
};

/// Agreement rows of every class member against a reference, for fast rule
/// evaluation on data that the reference labelled.
class LearningTable {
 public:
  LearningTable(const HypothesisClass& cls, const ReferenceBehavior& ref, unsigned workers = 0);

  [[nodiscard]] std::uint64_t size() const { return size_; }
  [[nodiscard]] std::size_t support_size() const { return support_; }
  [[nodiscard]] bool ete_agrees(HypothesisId id, std::size_t i) const { return bit(id, 0, i); }
  [[nodiscard]] bool joint_agrees(HypothesisId id, std::size_t i) const { return bit(id, 1, i); }

  /// Mass of support points where id's output differs from the reference, summed in index order.
  [[nodiscard]] double ete_disagreement(HypothesisId id, const FiniteDistribution& d) const;

  [[nodiscard]] std::vector<HypothesisId> consistency_set(const IndexedSample& s, SupervisionMode mode) const;
  [[nodiscard]] std::vector<HypothesisId> erm_set(const IndexedSample& s, SupervisionMode mode) const;
  [[nodiscard]] RuleOutput pick(RuleKind rule, const IndexedSample& s, std::uint64_t seed,
                                const Prior* prior = nullptr) const;

 private:
  [[nodiscard]] const std::uint64_t* row(HypothesisId id, int which) const {
    return words_.data() + (id * 2 + static_cast<std::uint64_t>(which)) * stride_;
  }
  [[nodiscard]] bool bit(HypothesisId id, int which, std::size_t i) const {
    return (row(id, which)[i >> 6] >> (i & 63)) & 1U;
  }

  std::uint64_t size_;
  std::size_t support_;
  std::size_t stride_;
  std::vector<std::uint64_t> words_;
};

}  // namespace cotlearn
