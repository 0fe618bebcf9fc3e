#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "cotlearn/hypothesis.hpp"

namespace cotlearn {

/// State space, alphabet and fixed start/accept states shared by a DFA class.
/// `detail` is how many trajectory states the CoT reveals; nullopt means all.
struct DfaSpec {
  std::uint32_t num_states = 1;
  std::uint32_t alphabet_size = 2;
  StateId init = 0;
  std::vector<StateId> accept;
  std::optional<std::size_t> detail;

  void validate() const;
  [[nodiscard]] bool is_accept(StateId s) const;
  [[nodiscard]] std::size_t cot_length(std::size_t n) const { return detail ? std::min(*detail, n) : n; }
  friend bool operator==(const DfaSpec&, const DfaSpec&) = default;
};

/// A DFA read as a CoT hypothesis. The CoT is the state trajectory z_1..z_min(T,n)
/// with z_t = delta(z_{t-1}, x_t) and z_0 = init (not emitted); y = 1{z_n accepting}.
class DfaHypothesis final : public CotHypothesis {
 public:
  DfaHypothesis(DfaSpec spec, std::vector<StateId> table, HypothesisId id = kNoId);

  [[nodiscard]] HypothesisId id() const override { return id_; }
  void eval_into(std::span<const Symbol> x, CotOutput& out) const override;

  [[nodiscard]] const DfaSpec& spec() const { return spec_; }
  [[nodiscard]] std::span<const StateId> table() const { return table_; }
  [[nodiscard]] StateId step(StateId s, Symbol a) const { return table_[s * spec_.alphabet_size + a]; }
  [[nodiscard]] bool accepts(StateId s) const { return accepting_[s] != 0; }
  /// Same table under a different CoT detail level.
  [[nodiscard]] DfaHypothesis with_detail(std::optional<std::size_t> detail) const;

  [[nodiscard]] nlohmann::json to_json() const;
  static DfaHypothesis from_json(const nlohmann::json& j);

 private:
  DfaSpec spec_;
  std::vector<StateId> table_;
  HypothesisId id_;
  std::vector<std::uint8_t> accepting_;
};

/// All transition tables over a fixed spec. Id k spells the row-major table
/// in base num_states, entry (state 0, symbol 0) most significant.
class DfaClass final : public HypothesisClass {
 public:
  explicit DfaClass(DfaSpec spec);

  [[nodiscard]] std::uint64_t size() const override { return size_; }
  [[nodiscard]] std::unique_ptr<CotHypothesis> hypothesis(HypothesisId id) const override;
  [[nodiscard]] std::string kind() const override { return "dfa"; }
  [[nodiscard]] nlohmann::json parameters() const override;
  void agreement_row(const CotHypothesis& h, const ReferenceBehavior& ref, AgreementRow& row) const override;

  [[nodiscard]] const DfaSpec& spec() const { return spec_; }
  [[nodiscard]] DfaHypothesis decode(HypothesisId id) const;
  [[nodiscard]] HypothesisId encode(std::span<const StateId> table) const;

 private:
  DfaSpec spec_;
  std::uint64_t size_;
};

inline DfaClass enumerate_dfa_class(DfaSpec spec) { return DfaClass(std::move(spec)); }

/// The 4-state binary target used throughout the DFA experiments.
DfaHypothesis figure4_target(std::optional<std::size_t> detail = std::nullopt);

/// Recogniser of the shuffle ideal of u: accepts strings containing u as a subsequence.
DfaHypothesis shuffle_ideal_dfa(const InputSeq& u, std::uint32_t alphabet_size);

/// |Sigma|^-(ell+1) when every reachable state of hstar is reachable within
/// ell steps; throws PreconditionError naming the first state that is not.
double connectivity_bound(const DfaHypothesis& hstar, std::size_t ell);

}  // namespace cotlearn
