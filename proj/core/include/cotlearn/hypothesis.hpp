#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cotlearn/distribution.hpp"
#include "cotlearn/types.hpp"

namespace cotlearn {

/// A function x -> (y, z). Implementations are immutable and pure, so they
/// may be evaluated from many threads at once.
class CotHypothesis {
 public:
  virtual ~CotHypothesis() = default;

  /// Position within the enumerating class, or kNoId for free-standing hypotheses.
  [[nodiscard]] virtual HypothesisId id() const = 0;

  /// Evaluates into a caller-owned buffer. Throws DomainError for inputs outside the domain.
  virtual void eval_into(std::span<const Symbol> x, CotOutput& out) const = 0;

  [[nodiscard]] CotOutput eval(std::span<const Symbol> x) const {
    CotOutput out;
    eval_into(x, out);
    return out;
  }
};

/// Fixed-size bit vector over support indices.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  void assign(std::size_t bits) {
    bits_ = bits;
    words_.assign((bits + 63) / 64, 0);
  }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  [[nodiscard]] bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  [[nodiscard]] std::size_t size() const { return bits_; }
  [[nodiscard]] std::span<const std::uint64_t> words() const { return words_; }
  [[nodiscard]] std::span<std::uint64_t> words() { return words_; }
  [[nodiscard]] std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  friend bool operator==(const BitRow&, const BitRow&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

/// A reference hypothesis evaluated once over every point of a finite support.
class ReferenceBehavior {
 public:
  ReferenceBehavior(const CotHypothesis& hstar, const FiniteDistribution& d);

  [[nodiscard]] const CotHypothesis& hypothesis() const { return *hstar_; }
  [[nodiscard]] const FiniteDistribution& distribution() const { return *d_; }
  [[nodiscard]] const CotOutput& output(std::size_t i) const { return outputs_[i]; }

 private:
  const CotHypothesis* hstar_;
  const FiniteDistribution* d_;
  std::vector<CotOutput> outputs_;
};

/// Per-support-point agreement of one hypothesis with a reference:
/// bit i of `ete` is set when outputs agree on input i, bit i of `joint`
/// when output and chain of thought both agree.
struct AgreementRow {
  BitRow ete;
  BitRow joint;
};

/// An ordered, enumerable, finite family of CoT hypotheses with ids 0..size()-1.
class HypothesisClass {
 public:
  virtual ~HypothesisClass() = default;

  [[nodiscard]] virtual std::uint64_t size() const = 0;
  [[nodiscard]] virtual std::unique_ptr<CotHypothesis> hypothesis(HypothesisId id) const = 0;
  [[nodiscard]] virtual std::string kind() const = 0;
  [[nodiscard]] virtual nlohmann::json parameters() const = 0;

  /// Fills `row` with h's agreement against `ref` over the reference support.
  /// The default evaluates h on every support point; classes override it with
  /// structure-aware fast paths that must produce identical rows.
  virtual void agreement_row(const CotHypothesis& h, const ReferenceBehavior& ref, AgreementRow& row) const;

 protected:
  void check_id(HypothesisId id) const;
};

/// The generic (evaluate-everything) agreement computation.
void generic_agreement_row(const CotHypothesis& h, const ReferenceBehavior& ref, AgreementRow& row);

/// Sum of probabilities over set bits (or clear bits when `clear` is true), in index order.
double weighted_mass(const BitRow& row, const FiniteDistribution& d, bool clear = false);

}  // namespace cotlearn
