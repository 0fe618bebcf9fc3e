#include "cotlearn/rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cotlearn/parallel.hpp"

namespace cotlearn {

std::string rule_name(RuleKind rule) {
  switch (rule) {
    case RuleKind::kEtECons: return "EtECons";
    case RuleKind::kCoTCons: return "CoTCons";
    case RuleKind::kEtEERM: return "EtEERM";
    case RuleKind::kCoTERM: return "CoTERM";
    case RuleKind::kMDL: return "MDL";
  }
  return "unknown";
}

RuleKind parse_rule(const std::string& name) {
  for (auto r : {RuleKind::kEtECons, RuleKind::kCoTCons, RuleKind::kEtEERM, RuleKind::kCoTERM, RuleKind::kMDL}) {
    if (rule_name(r) == name) return r;
  }
  throw ConfigError("unknown learning rule '" + name + "' (expected EtECons, CoTCons, EtEERM, CoTERM or MDL)");
}

Prior Prior::uniform(std::uint64_t class_size) {
  if (class_size == 0) throw PreconditionError("prior over an empty class");
  Prior p;
  p.size_ = class_size;
  return p;
}

Prior Prior::from_weights(std::vector<double> weights) {
  if (weights.empty()) throw PreconditionError("prior over an empty class");
  long double total = 0.0L;
  for (double w : weights) {
    if (!(w >= 0.0)) throw PreconditionError("prior weight must be non-negative, got " + format_real(w));
    total += w;
  }
  if (total > 1.0L + 1e-12L) throw PreconditionError("prior weights sum to more than 1");
  Prior p;
  p.size_ = weights.size();
  p.weights_ = std::move(weights);
  return p;
}

double Prior::mass(HypothesisId id) const {
  if (id >= size_) throw PreconditionError("prior queried outside its class");
  return weights_.empty() ? 1.0 / static_cast<double>(size_) : weights_[id];
}

ExtReal Prior::description_length(HypothesisId id) const {
  if (id >= size_) throw PreconditionError("prior queried outside its class");
  if (weights_.empty()) return ExtReal(std::log(static_cast<double>(size_)));
  return neg_log(weights_[id]);
}

namespace {

bool consistent(const CotHypothesis& h, const CotDataset& s, SupervisionMode mode, CotOutput& out) {
  for (const auto& ex : s.examples) {
    h.eval_into(ex.x, out);
    if (out.y != ex.y) return false;
    if (mode == SupervisionMode::kCoT && ex.z && out.z != *ex.z) return false;
  }
  return true;
}

std::uint64_t empirical_errors(const CotHypothesis& h, const CotDataset& s, SupervisionMode mode, CotOutput& out) {
  std::uint64_t errors = 0;
  for (const auto& ex : s.examples) {
    h.eval_into(ex.x, out);
    if (out.y != ex.y || (mode == SupervisionMode::kCoT && ex.z && out.z != *ex.z)) ++errors;
  }
  return errors;
}

// Runs fn(id) -> bool over all ids in parallel and returns the accepted ids in order.
template <typename Fn>
std::vector<HypothesisId> filter_ids(std::uint64_t n, unsigned workers, Fn&& fn) {
  std::vector<std::uint8_t> keep(n, 0);
  parallel_for(n, workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t id = begin; id < end; ++id) keep[id] = fn(id) ? 1 : 0;
  });
  std::vector<HypothesisId> ids;
  for (std::uint64_t id = 0; id < n; ++id) {
    if (keep[id]) ids.push_back(id);
  }
  return ids;
}

std::vector<HypothesisId> argmin_ids(const std::vector<std::uint64_t>& errors) {
  std::vector<HypothesisId> ids;
  if (errors.empty()) return ids;
  const auto best = *std::min_element(errors.begin(), errors.end());
  for (std::size_t id = 0; id < errors.size(); ++id) {
    if (errors[id] == best) ids.push_back(id);
  }
  return ids;
}

SupervisionMode mode_of(RuleKind rule) {
  return (rule == RuleKind::kEtECons || rule == RuleKind::kEtEERM) ? SupervisionMode::kE2E : SupervisionMode::kCoT;
}

HypothesisId uniform_choice(const std::vector<HypothesisId>& ids, std::uint64_t seed) {
  Rng rng(seed);
  return ids[uniform_index(rng, ids.size())];
}

HypothesisId max_prior(const std::vector<HypothesisId>& ids, const Prior& prior) {
  HypothesisId best = ids.front();
  double best_mass = prior.mass(best);
  for (HypothesisId id : ids) {
    const double m = prior.mass(id);
    if (m > best_mass) {
      best = id;
      best_mass = m;
    }
  }
  return best;
}

// Shared selection logic; `cons` and `erm` produce candidate sets on demand.
template <typename Cons, typename Erm>
RuleOutput select(RuleKind rule, std::uint64_t class_size, std::uint64_t seed, const Prior* prior, Cons&& cons,
                  Erm&& erm) {
  if (class_size == 0) throw PreconditionError("cannot learn from an empty class");
  RuleOutput out;
  out.rule_name = rule_name(rule);
  out.rng_seed = seed;
  const SupervisionMode mode = mode_of(rule);
  std::vector<HypothesisId> candidates;
  if (rule == RuleKind::kEtEERM || rule == RuleKind::kCoTERM) {
    candidates = erm(mode);
  } else {
    candidates = cons(mode);
    if (candidates.empty()) {
      out.unrealizable = true;
      candidates = erm(mode);
    }
  }
  out.candidate_set_size = candidates.size();
  if (rule == RuleKind::kMDL) {
    if (!prior) throw PreconditionError("the MDL rule needs a prior");
    if (prior->size() != class_size) throw PreconditionError("prior size does not match the class");
    out.chosen = max_prior(candidates, *prior);
  } else {
    out.chosen = uniform_choice(candidates, seed);
  }
  return out;
}

}  // namespace

std::vector<HypothesisId> consistency_set(const HypothesisClass& cls, const CotDataset& s, SupervisionMode mode,
                                          unsigned workers) {
  return filter_ids(cls.size(), workers, [&](std::uint64_t id) {
    thread_local CotOutput out;
    return consistent(*cls.hypothesis(id), s, mode, out);
  });
}

std::vector<HypothesisId> erm_set(const HypothesisClass& cls, const CotDataset& s, SupervisionMode mode,
                                  unsigned workers) {
  std::vector<std::uint64_t> errors(cls.size());
  parallel_for(cls.size(), workers, [&](std::uint64_t begin, std::uint64_t end) {
    CotOutput out;
    for (std::uint64_t id = begin; id < end; ++id) errors[id] = empirical_errors(*cls.hypothesis(id), s, mode, out);
  });
  return argmin_ids(errors);
}

RuleOutput pick(RuleKind rule, const HypothesisClass& cls, const CotDataset& s, std::uint64_t seed,
                const Prior* prior, unsigned workers) {
  RuleOutput out = select(
      rule, cls.size(), seed, prior, [&](SupervisionMode m) { return consistency_set(cls, s, m, workers); },
      [&](SupervisionMode m) { return erm_set(cls, s, m, workers); });
  out.hypothesis = cls.hypothesis(out.chosen);
  return out;
}

LearningTable::LearningTable(const HypothesisClass& cls, const ReferenceBehavior& ref, unsigned workers)
    : size_(cls.size()), support_(ref.distribution().size()), stride_((support_ + 63) / 64) {
  words_.assign(size_ * 2 * stride_, 0);
  parallel_for(size_, workers, [&](std::uint64_t begin, std::uint64_t end) {
    AgreementRow r;
    for (std::uint64_t id = begin; id < end; ++id) {
      cls.agreement_row(*cls.hypothesis(id), ref, r);
      std::copy(r.ete.words().begin(), r.ete.words().end(), words_.begin() + static_cast<std::ptrdiff_t>(id * 2 * stride_));
      std::copy(r.joint.words().begin(), r.joint.words().end(),
                words_.begin() + static_cast<std::ptrdiff_t>((id * 2 + 1) * stride_));
    }
  });
}

namespace {

// Required-agreement masks for one sample: which support points must agree on
// the output only, and which on output and CoT.
struct SampleMasks {
  std::vector<std::uint64_t> ete;
  std::vector<std::uint64_t> joint;
  std::size_t points = 0;
};

SampleMasks build_masks(const IndexedSample& s, SupervisionMode mode, std::size_t stride, std::size_t support) {
  SampleMasks m;
  m.ete.assign(stride, 0);
  m.joint.assign(stride, 0);
  auto put = [&](std::vector<std::uint64_t>& w, std::size_t i) {
    if (i >= support) throw PreconditionError("sample index outside the table's support");
    w[i >> 6] |= std::uint64_t{1} << (i & 63);
  };
  for (std::size_t i : s.cot) put(mode == SupervisionMode::kCoT ? m.joint : m.ete, i);
  for (std::size_t i : s.ete_only) put(m.ete, i);
  m.points = s.cot.size() + s.ete_only.size();
  return m;
}

bool covers(const std::uint64_t* row, const std::vector<std::uint64_t>& mask) {
  for (std::size_t w = 0; w < mask.size(); ++w) {
    if (mask[w] & ~row[w]) return false;
  }
  return true;
}

}  // namespace

std::vector<HypothesisId> LearningTable::consistency_set(const IndexedSample& s, SupervisionMode mode) const {
  std::vector<HypothesisId> ids;
  const bool cot_mode = mode == SupervisionMode::kCoT;
  // Few points: test them one by one; otherwise compare whole words.
  if (s.cot.size() + s.ete_only.size() < stride_) {
    for (std::size_t i : s.cot) {
      if (i >= support_) throw PreconditionError("sample index outside the table's support");
    }
    for (std::size_t i : s.ete_only) {
      if (i >= support_) throw PreconditionError("sample index outside the table's support");
    }
    for (HypothesisId id = 0; id < size_; ++id) {
      bool ok = true;
      for (std::size_t i : s.cot) {
        if (!(cot_mode ? joint_agrees(id, i) : ete_agrees(id, i))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        for (std::size_t i : s.ete_only) {
          if (!ete_agrees(id, i)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) ids.push_back(id);
    }
    return ids;
  }
  const SampleMasks m = build_masks(s, mode, stride_, support_);
  for (HypothesisId id = 0; id < size_; ++id) {
    if (covers(row(id, 1), m.joint) && covers(row(id, 0), m.ete)) ids.push_back(id);
  }
  return ids;
}

double LearningTable::ete_disagreement(HypothesisId id, const FiniteDistribution& d) const {
  if (d.size() != support_) throw PreconditionError("distribution does not match the table's support");
  double total = 0.0;
  for (std::size_t i = 0; i < support_; ++i) {
    if (!ete_agrees(id, i)) total += d.probability(i);
  }
  return total;
}

std::vector<HypothesisId> LearningTable::erm_set(const IndexedSample& s, SupervisionMode mode) const {
  std::vector<std::uint64_t> errors(size_, 0);
  const bool cot_mode = mode == SupervisionMode::kCoT;
  for (HypothesisId id = 0; id < size_; ++id) {
    std::uint64_t e = 0;
    for (std::size_t i : s.cot) e += (cot_mode ? joint_agrees(id, i) : ete_agrees(id, i)) ? 0 : 1;
    for (std::size_t i : s.ete_only) e += ete_agrees(id, i) ? 0 : 1;
    errors[id] = e;
  }
  return argmin_ids(errors);
}

RuleOutput LearningTable::pick(RuleKind rule, const IndexedSample& s, std::uint64_t seed, const Prior* prior) const {
  return select(
      rule, size_, seed, prior, [&](SupervisionMode m) { return consistency_set(s, m); },
      [&](SupervisionMode m) { return erm_set(s, m); });
}

}  // namespace cotlearn
