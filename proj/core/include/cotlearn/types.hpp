#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cotlearn {

using Symbol = std::uint32_t;
using Token = std::uint32_t;
using StateId = std::uint32_t;
using HypothesisId = std::uint64_t;

/// Sentinel id for hypotheses built outside an enumerated class.
inline constexpr HypothesisId kNoId = std::numeric_limits<HypothesisId>::max();

using InputSeq = std::vector<Symbol>;

/// What a CoT hypothesis emits on one input: the end-to-end output and the chain of thought.
struct CotOutput {
  Token y = 0;
  std::vector<Token> z;

  friend bool operator==(const CotOutput&, const CotOutput&) = default;
};

// Error hierarchy. Every failure the library reports derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input lies outside the domain a hypothesis can evaluate.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A class or support is too large to represent (e.g. 64-bit cardinality overflow).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration would exceed the configured work budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed experiment configuration; the message names the offending field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Non-negative real extended with +infinity.
///
/// Backed by an IEEE double, so +infinity absorbs under addition and under
/// multiplication by a positive scalar. Serializes +infinity as "inf".
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr explicit ExtReal(double v) : value_(v) {}

  static constexpr ExtReal infinity() { return ExtReal(std::numeric_limits<double>::infinity()); }

  [[nodiscard]] constexpr bool is_inf() const { return value_ == std::numeric_limits<double>::infinity(); }
  [[nodiscard]] constexpr double value() const { return value_; }

  friend constexpr auto operator<=>(ExtReal, ExtReal) = default;
  friend constexpr ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(a.value_ + b.value_); }
  // inf * 0 stays inf; callers that need 0 * inf == 0 special-case it.
  friend constexpr ExtReal operator*(double k, ExtReal a) { return a.is_inf() ? a : ExtReal(k * a.value_); }

  [[nodiscard]] std::string to_string() const;

 private:
  double value_ = 0.0;
};

/// Shortest round-trip decimal form of a double; +infinity prints as "inf".
std::string format_real(double v);

/// -log(p) with p == 0 mapped to +infinity.
ExtReal neg_log(double p);

}  // namespace cotlearn
