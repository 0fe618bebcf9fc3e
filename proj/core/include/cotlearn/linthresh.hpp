#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "cotlearn/hypothesis.hpp"

namespace cotlearn {

/// Window d, number of appended steps T, and the nominal input length n.
/// Evaluation accepts binary inputs of any length; n only documents the
/// experiment and is carried into serialized output.
struct LinThreshSpec {
  std::uint32_t d = 1;
  std::uint32_t steps = 1;
  std::uint32_t n = 1;

  void validate() const;
  friend bool operator==(const LinThreshSpec&, const LinThreshSpec&) = default;
};

/// Iterated threshold unit: T times append z = 1{sum_i w_i s_{len-i} >= 0} to the
/// running sequence (zero padded on the left). CoT = (z_1..z_T), y = z_T.
class LinThreshHypothesis final : public CotHypothesis {
 public:
  LinThreshHypothesis(LinThreshSpec spec, std::vector<int> weights, HypothesisId id = kNoId);

  [[nodiscard]] HypothesisId id() const override { return id_; }
  void eval_into(std::span<const Symbol> x, CotOutput& out) const override;

  [[nodiscard]] const LinThreshSpec& spec() const { return spec_; }
  [[nodiscard]] std::span<const int> weights() const { return weights_; }

  /// CoT bits for a window of the last d symbols packed as bit i = s_{len-i}.
  /// Bit t-1 of the result holds z_t. Requires d <= 32 and T <= 64.
  [[nodiscard]] std::uint64_t trace_window(std::uint32_t window) const;

  [[nodiscard]] nlohmann::json to_json() const;
  static LinThreshHypothesis from_json(const nlohmann::json& j);

 private:
  LinThreshSpec spec_;
  std::vector<int> weights_;
  HypothesisId id_;
  std::uint32_t pos_ = 0;
  std::uint32_t neg_ = 0;
};

inline CotOutput eval_trace(const LinThreshHypothesis& h, const InputSeq& x) { return h.eval(x); }

/// All w in {-1,0,1}^d. The id is the base-3 number with digit i = w_i + 1, w_0 least significant.
class LinThreshClass final : public HypothesisClass {
 public:
  explicit LinThreshClass(LinThreshSpec spec);

  [[nodiscard]] std::uint64_t size() const override { return size_; }
  [[nodiscard]] std::unique_ptr<CotHypothesis> hypothesis(HypothesisId id) const override;
  [[nodiscard]] std::string kind() const override { return "linthresh"; }
  [[nodiscard]] nlohmann::json parameters() const override;
  void agreement_row(const CotHypothesis& h, const ReferenceBehavior& ref, AgreementRow& row) const override;

  [[nodiscard]] const LinThreshSpec& spec() const { return spec_; }
  [[nodiscard]] LinThreshHypothesis decode(HypothesisId id) const;
  [[nodiscard]] HypothesisId encode(std::span<const int> weights) const;

 private:
  LinThreshSpec spec_;
  std::uint64_t size_;
};

inline LinThreshClass enumerate_linthresh_class(LinThreshSpec spec) { return LinThreshClass(spec); }

}  // namespace cotlearn
