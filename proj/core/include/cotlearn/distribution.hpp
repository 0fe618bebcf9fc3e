#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cotlearn/random.hpp"
#include "cotlearn/types.hpp"

namespace cotlearn {

/// Largest support an exact uniform distribution over alphabet^length may have.
inline constexpr std::uint64_t kMaxUniformSupport = std::uint64_t{1} << 24;

/// Tolerance on the total mass of an explicit distribution.
inline constexpr double kMassTolerance = 1e-12;

/// A distribution over inputs with finite, explicitly indexed support.
///
/// Two backings share one interface: an explicit list of distinct inputs with
/// probabilities, and the uniform distribution over alphabet^length, which is
/// never stored. Index i of the uniform backing spells i in base |alphabet|
/// with the first symbol most significant.
class FiniteDistribution {
 public:
  static FiniteDistribution uniform(std::uint32_t alphabet_size, std::size_t length);
  static FiniteDistribution from_support(std::vector<InputSeq> inputs, std::vector<double> probabilities);
  /// D^{(x)T} over the symbols 0..base.size()-1, materialised explicitly.
  static FiniteDistribution product(std::span<const double> base, std::size_t length);

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] double probability(std::size_t i) const { return uniform_ ? uniform_mass_ : probs_[i]; }
  void input_at(std::size_t i, InputSeq& out) const;
  [[nodiscard]] InputSeq input_at(std::size_t i) const;

  [[nodiscard]] bool is_uniform() const { return uniform_; }
  /// Alphabet and length of the uniform backing; 0 for explicit supports.
  [[nodiscard]] std::uint32_t alphabet_size() const { return alphabet_; }
  [[nodiscard]] std::size_t length() const { return length_; }

  [[nodiscard]] std::size_t sample_index(Rng& rng) const;

 private:
  FiniteDistribution() = default;

  bool uniform_ = false;
  std::uint32_t alphabet_ = 0;
  std::size_t length_ = 0;
  std::size_t size_ = 0;
  double uniform_mass_ = 0.0;
  std::vector<InputSeq> inputs_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

/// One support point of a distribution over X x Y x Z.
struct JointPoint {
  InputSeq x;
  Token y = 0;
  std::vector<Token> z;
  double probability = 0.0;
};

/// Distribution over (input, output, chain-of-thought) triples, used by the agnostic setting.
class JointDistribution {
 public:
  explicit JointDistribution(std::vector<JointPoint> support);

  [[nodiscard]] std::span<const JointPoint> support() const { return support_; }
  [[nodiscard]] std::size_t size() const { return support_.size(); }

 private:
  std::vector<JointPoint> support_;
};

/// A training example; z is absent for end-to-end-only examples.
struct CotExample {
  InputSeq x;
  Token y = 0;
  std::optional<std::vector<Token>> z;

  friend bool operator==(const CotExample&, const CotExample&) = default;
};

struct CotDataset {
  std::vector<CotExample> examples;

  [[nodiscard]] std::size_t size() const { return examples.size(); }
  [[nodiscard]] bool empty() const { return examples.empty(); }
};

/// Seeded source of i.i.d. inputs, used by Monte Carlo estimators.
class InputSampler {
 public:
  virtual ~InputSampler() = default;
  virtual void sample(Rng& rng, InputSeq& out) const = 0;
};

/// Draws from a FiniteDistribution (which must outlive the sampler).
class DistributionSampler final : public InputSampler {
 public:
  explicit DistributionSampler(const FiniteDistribution& d) : d_(&d) {}
  void sample(Rng& rng, InputSeq& out) const override;

 private:
  const FiniteDistribution* d_;
};

/// Uniform over alphabet^length with no size limit.
class UniformSequenceSampler final : public InputSampler {
 public:
  UniformSequenceSampler(std::uint32_t alphabet_size, std::size_t length);
  void sample(Rng& rng, InputSeq& out) const override;

 private:
  std::uint32_t alphabet_;
  std::size_t length_;
};

/// Empirical distribution of `draws` i.i.d. samples, duplicates merged, support in lexicographic order.
FiniteDistribution empirical_distribution(const InputSampler& sampler, std::uint64_t draws, std::uint64_t seed);

}  // namespace cotlearn
