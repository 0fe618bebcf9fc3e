#include "cotlearn/linthresh.hpp"

#include <bit>
#include <limits>
#include <string>

namespace cotlearn {

namespace {

// Largest window for which agreement rows use a 2^d lookup table.
constexpr std::uint32_t kMaxTableWindow = 20;

}  // namespace

void LinThreshSpec::validate() const {
  if (d == 0) throw PreconditionError("linear-threshold window d must be positive");
  if (steps == 0) throw PreconditionError("linear-threshold step count T must be positive");
  if (n == 0) throw PreconditionError("linear-threshold input length n must be positive");
}

LinThreshHypothesis::LinThreshHypothesis(LinThreshSpec spec, std::vector<int> weights, HypothesisId id)
    : spec_(spec), weights_(std::move(weights)), id_(id) {
  spec_.validate();
  if (weights_.size() != spec_.d) {
    throw PreconditionError("expected " + std::to_string(spec_.d) + " weights, got " + std::to_string(weights_.size()));
  }
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const int w = weights_[i];
    if (w < -1 || w > 1) throw PreconditionError("weight " + std::to_string(w) + " not in {-1,0,1}");
    if (i < 32) {
      if (w > 0) pos_ |= std::uint32_t{1} << i;
      if (w < 0) neg_ |= std::uint32_t{1} << i;
    }
  }
}

void LinThreshHypothesis::eval_into(std::span<const Symbol> x, CotOutput& out) const {
  for (Symbol s : x) {
    if (s > 1) throw DomainError("linear-threshold inputs are binary; got symbol " + std::to_string(s));
  }
  std::vector<Token> seq(x.begin(), x.end());
  seq.reserve(x.size() + spec_.steps);
  out.z.resize(spec_.steps);
  for (std::uint32_t t = 0; t < spec_.steps; ++t) {
    long sum = 0;
    const std::size_t len = seq.size();
    for (std::size_t i = 0; i < spec_.d && i < len; ++i) sum += weights_[i] * static_cast<long>(seq[len - 1 - i]);
    const Token z = sum >= 0 ? 1 : 0;
    seq.push_back(z);
    out.z[t] = z;
  }
  out.y = out.z.back();
}

std::uint64_t LinThreshHypothesis::trace_window(std::uint32_t window) const {
  const std::uint32_t mask = spec_.d >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << spec_.d) - 1;
  std::uint64_t trace = 0;
  for (std::uint32_t t = 0; t < spec_.steps; ++t) {
    const int sum = std::popcount(pos_ & window) - std::popcount(neg_ & window);
    const std::uint32_t z = sum >= 0 ? 1 : 0;
    trace |= std::uint64_t{z} << t;
    window = ((window << 1) | z) & mask;
  }
  return trace;
}

nlohmann::json LinThreshHypothesis::to_json() const {
  return {{"d", spec_.d}, {"T", spec_.steps}, {"n", spec_.n}, {"weights", weights_}};
}

LinThreshHypothesis LinThreshHypothesis::from_json(const nlohmann::json& j) {
  LinThreshSpec spec{j.at("d").get<std::uint32_t>(), j.at("T").get<std::uint32_t>(), j.at("n").get<std::uint32_t>()};
  return LinThreshHypothesis(spec, j.at("weights").get<std::vector<int>>());
}

LinThreshClass::LinThreshClass(LinThreshSpec spec) : spec_(spec), size_(1) {
  spec_.validate();
  for (std::uint32_t i = 0; i < spec_.d; ++i) {
    if (size_ > std::numeric_limits<std::uint64_t>::max() / 3) {
      throw SizeError("3^" + std::to_string(spec_.d) + " hypotheses do not fit in 64 bits");
    }
    size_ *= 3;
  }
}

LinThreshHypothesis LinThreshClass::decode(HypothesisId id) const {
  check_id(id);
  std::vector<int> w(spec_.d);
  HypothesisId rest = id;
  for (auto& wi : w) {
    wi = static_cast<int>(rest % 3) - 1;
    rest /= 3;
  }
  return LinThreshHypothesis(spec_, std::move(w), id);
}

HypothesisId LinThreshClass::encode(std::span<const int> weights) const {
  if (weights.size() != spec_.d) throw PreconditionError("weight vector length does not match the class");
  HypothesisId id = 0;
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] < -1 || weights[i] > 1) throw PreconditionError("weight not in {-1,0,1}");
    id = id * 3 + static_cast<HypothesisId>(weights[i] + 1);
  }
  return id;
}

std::unique_ptr<CotHypothesis> LinThreshClass::hypothesis(HypothesisId id) const {
  return std::make_unique<LinThreshHypothesis>(decode(id));
}

nlohmann::json LinThreshClass::parameters() const { return {{"d", spec_.d}, {"T", spec_.steps}, {"n", spec_.n}}; }

void LinThreshClass::agreement_row(const CotHypothesis& h, const ReferenceBehavior& ref, AgreementRow& row) const {
  const auto* lh = dynamic_cast<const LinThreshHypothesis*>(&h);
  const auto* lr = dynamic_cast<const LinThreshHypothesis*>(&ref.hypothesis());
  const auto& d = ref.distribution();
  const bool fast = lh && lr && d.is_uniform() && d.alphabet_size() == 2 && lh->spec().d == lr->spec().d &&
                    lh->spec().steps == lr->spec().steps && lh->spec().d <= kMaxTableWindow &&
                    lh->spec().steps <= 64;
  if (!fast) {
    generic_agreement_row(h, ref, row);
    return;
  }
  // With the first symbol most significant, bit i of a support index is
  // s_{len-i}; bits past the input length are zero, which is the padding.
  const std::uint32_t width = lh->spec().d;
  const std::uint32_t windows = std::uint32_t{1} << width;
  const std::uint64_t last = std::uint64_t{1} << (lh->spec().steps - 1);
  std::vector<std::uint8_t> ete(windows);
  std::vector<std::uint8_t> joint(windows);
  for (std::uint32_t w = 0; w < windows; ++w) {
    const std::uint64_t a = lh->trace_window(w);
    const std::uint64_t b = lr->trace_window(w);
    ete[w] = (a & last) == (b & last);
    joint[w] = a == b;
  }
  row.ete.assign(d.size());
  row.joint.assign(d.size());
  const std::size_t mask = windows - 1;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const std::size_t w = i & mask;
    if (ete[w]) row.ete.set(i);
    if (joint[w]) row.joint.set(i);
  }
}

}  // namespace cotlearn
