#include "cotlearn/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace cotlearn {

namespace {

void check_mass(double total, const char* what) {
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw PreconditionError(std::string(what) + ": probabilities sum to " + format_real(total) + ", expected 1");
  }
}

}  // namespace

FiniteDistribution FiniteDistribution::uniform(std::uint32_t alphabet_size, std::size_t length) {
  if (alphabet_size == 0) throw PreconditionError("uniform distribution needs a non-empty alphabet");
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < length; ++i) {
    n *= alphabet_size;
    if (n > kMaxUniformSupport) {
      throw SizeError("uniform support " + std::to_string(alphabet_size) + "^" + std::to_string(length) +
                      " exceeds the exact-mode limit of 2^24 inputs; use Monte Carlo mode");
    }
  }
  FiniteDistribution d;
  d.uniform_ = true;
  d.alphabet_ = alphabet_size;
  d.length_ = length;
  d.size_ = static_cast<std::size_t>(n);
  d.uniform_mass_ = 1.0 / static_cast<double>(n);
  return d;
}

FiniteDistribution FiniteDistribution::from_support(std::vector<InputSeq> inputs, std::vector<double> probabilities) {
  if (inputs.size() != probabilities.size()) throw PreconditionError("support and probability lists differ in length");
  if (inputs.empty()) throw PreconditionError("distribution support is empty");
  long double total = 0.0L;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("probability outside [0,1]: " + format_real(p));
    total += p;
  }
  check_mass(static_cast<double>(total), "input distribution");
  std::set<InputSeq> seen;
  for (const auto& x : inputs) {
    if (!seen.insert(x).second) throw PreconditionError("duplicate support entry in input distribution");
  }
  FiniteDistribution d;
  d.size_ = inputs.size();
  d.inputs_ = std::move(inputs);
  d.probs_ = std::move(probabilities);
  d.cumulative_.resize(d.probs_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.probs_.size(); ++i) {
    acc += d.probs_[i];
    d.cumulative_[i] = acc;
  }
  return d;
}

FiniteDistribution FiniteDistribution::product(std::span<const double> base, std::size_t length) {
  if (base.empty()) throw PreconditionError("product distribution needs a non-empty base");
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < length; ++i) {
    n *= base.size();
    if (n > kMaxUniformSupport) throw SizeError("product distribution support too large");
  }
  std::vector<InputSeq> inputs;
  std::vector<double> probs;
  inputs.reserve(n);
  probs.reserve(n);
  const auto k = static_cast<std::uint64_t>(base.size());
  for (std::uint64_t i = 0; i < n; ++i) {
    InputSeq x(length);
    double p = 1.0;
    std::uint64_t rest = i;
    for (std::size_t t = length; t-- > 0;) {
      x[t] = static_cast<Symbol>(rest % k);
      rest /= k;
    }
    for (Symbol s : x) p *= base[s];
    inputs.push_back(std::move(x));
    probs.push_back(p);
  }
  return from_support(std::move(inputs), std::move(probs));
}

void FiniteDistribution::input_at(std::size_t i, InputSeq& out) const {
  if (!uniform_) {
    out = inputs_[i];
    return;
  }
  out.resize(length_);
  std::size_t rest = i;
  for (std::size_t t = length_; t-- > 0;) {
    out[t] = static_cast<Symbol>(rest % alphabet_);
    rest /= alphabet_;
  }
}

InputSeq FiniteDistribution::input_at(std::size_t i) const {
  InputSeq x;
  input_at(i, x);
  return x;
}

std::size_t FiniteDistribution::sample_index(Rng& rng) const {
  if (uniform_) return static_cast<std::size_t>(uniform_index(rng, size_));
  const double u = std::uniform_real_distribution<double>(0.0, cumulative_.back())(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  auto idx = static_cast<std::size_t>(it - cumulative_.begin());
  if (idx >= size_) idx = size_ - 1;
  // Skip zero-mass entries that upper_bound can land on at a plateau edge.
  while (probs_[idx] == 0.0 && idx > 0) --idx;
  return idx;
}

JointDistribution::JointDistribution(std::vector<JointPoint> support) : support_(std::move(support)) {
  if (support_.empty()) throw PreconditionError("joint distribution support is empty");
  long double total = 0.0L;
  for (const auto& pt : support_) {
    if (!(pt.probability >= 0.0 && pt.probability <= 1.0)) throw PreconditionError("joint probability outside [0,1]");
    total += pt.probability;
  }
  check_mass(static_cast<double>(total), "joint distribution");
}

void DistributionSampler::sample(Rng& rng, InputSeq& out) const { d_->input_at(d_->sample_index(rng), out); }

UniformSequenceSampler::UniformSequenceSampler(std::uint32_t alphabet_size, std::size_t length)
    : alphabet_(alphabet_size), length_(length) {
  if (alphabet_size == 0) throw PreconditionError("sampler needs a non-empty alphabet");
}

void UniformSequenceSampler::sample(Rng& rng, InputSeq& out) const {
  out.resize(length_);
  std::uniform_int_distribution<Symbol> pick(0, alphabet_ - 1);
  for (auto& s : out) s = pick(rng);
}

FiniteDistribution empirical_distribution(const InputSampler& sampler, std::uint64_t draws, std::uint64_t seed) {
  if (draws == 0) throw PreconditionError("empirical distribution needs at least one draw");
  Rng rng(seed);
  std::map<InputSeq, std::uint64_t> counts;
  InputSeq x;
  for (std::uint64_t i = 0; i < draws; ++i) {
    sampler.sample(rng, x);
    ++counts[x];
  }
  std::vector<InputSeq> inputs;
  std::vector<double> probs;
  inputs.reserve(counts.size());
  probs.reserve(counts.size());
  for (auto& [seq, c] : counts) {
    inputs.push_back(seq);
    probs.push_back(static_cast<double>(c) / static_cast<double>(draws));
  }
  return FiniteDistribution::from_support(std::move(inputs), std::move(probs));
}

}  // namespace cotlearn
