#include "cotlearn/cotinfo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cotlearn/parallel.hpp"

namespace cotlearn {

namespace {

void check_budget(std::uint64_t class_size, std::uint64_t support, std::uint64_t budget, const char* what) {
  const bool overflow = support != 0 && class_size > std::numeric_limits<std::uint64_t>::max() / support;
  if (overflow || class_size * support > budget) {
    throw BudgetError(std::string(what) + ": " + std::to_string(class_size) + " hypotheses x " +
                      std::to_string(support) + " inputs exceeds the exact budget of " + std::to_string(budget) +
                      " evaluations; use the Monte Carlo mode instead");
  }
}

PairStats stats_from_rows(HypothesisId id, const AgreementRow& disagree_row, const FiniteDistribution& d_ete_dist,
                          const AgreementRow& agree_row, const FiniteDistribution& agree_dist) {
  PairStats s;
  s.hypothesis_id = id;
  s.d_ete = weighted_mass(disagree_row.ete, d_ete_dist, true);
  s.joint_agreement = weighted_mass(agree_row.joint, agree_dist);
  s.rel_info = neg_log(s.joint_agreement);
  return s;
}

}  // namespace

ExtReal InfoCurve::evaluate(double epsilon) const {
  if (!(epsilon >= 0.0)) throw PreconditionError("CoT information is defined for epsilon >= 0");
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), epsilon,
                             [](double e, const Breakpoint& b) { return e < b.epsilon; });
  return it == breakpoints.end() ? ExtReal::infinity() : it->info;
}

ExtReal InfoCurve::ratio_at_zero() const {
  if (!epsilon_star) return ExtReal::infinity();
  return ratio_to_eps_plus(info_at_zero_plus, 0.0, *epsilon_star);
}

std::vector<CurveRow> InfoCurve::rows() const {
  std::vector<CurveRow> out;
  const double star = epsilon_star.value_or(0.0);
  double prev = 0.0;
  for (const auto& b : breakpoints) {
    out.push_back({prev, b.info, ratio_to_eps_plus(b.info, prev, star)});
    prev = b.epsilon;
  }
  out.push_back({prev, ExtReal::infinity(), ExtReal::infinity()});
  return out;
}

ExtReal ratio_to_eps_plus(ExtReal info, double epsilon, double epsilon_star) {
  if (info.is_inf()) return ExtReal::infinity();
  const double clipped = std::max(epsilon, epsilon_star);
  if (clipped <= 0.0) return info.value() == 0.0 ? ExtReal(0.0) : ExtReal::infinity();
  return ExtReal(info.value() / clipped);
}

PairStats pair_stats(const CotHypothesis& hstar, const CotHypothesis& h, const FiniteDistribution& d) {
  const ReferenceBehavior ref(hstar, d);
  AgreementRow row;
  generic_agreement_row(h, ref, row);
  return stats_from_rows(h.id(), row, d, row, d);
}

std::vector<PairStats> pairwise_stats(const CotHypothesis& hstar, const HypothesisClass& cls,
                                      const FiniteDistribution& d, const ExactOptions& opts) {
  check_budget(cls.size(), d.size(), opts.budget, "exact CoT information");
  const ReferenceBehavior ref(hstar, d);
  std::vector<PairStats> out(cls.size());
  parallel_for(cls.size(), opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    AgreementRow row;
    for (std::uint64_t id = begin; id < end; ++id) {
      const auto h = cls.hypothesis(id);
      cls.agreement_row(*h, ref, row);
      out[id] = stats_from_rows(id, row, d, row, d);
    }
  });
  return out;
}

std::vector<PairStats> pairwise_transfer_stats(const CotHypothesis& hstar, const HypothesisClass& cls,
                                               const FiniteDistribution& d_train, const FiniteDistribution& d_test,
                                               const ExactOptions& opts) {
  check_budget(cls.size(), d_train.size() + d_test.size(), opts.budget, "exact transfer CoT information");
  const ReferenceBehavior train_ref(hstar, d_train);
  const ReferenceBehavior test_ref(hstar, d_test);
  std::vector<PairStats> out(cls.size());
  parallel_for(cls.size(), opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    AgreementRow train_row;
    AgreementRow test_row;
    for (std::uint64_t id = begin; id < end; ++id) {
      const auto h = cls.hypothesis(id);
      cls.agreement_row(*h, train_ref, train_row);
      cls.agreement_row(*h, test_ref, test_row);
      out[id] = stats_from_rows(id, test_row, d_test, train_row, d_train);
    }
  });
  return out;
}

InfoCurve curve_from_pairs(std::span<const PairStats> pairs) {
  std::vector<const PairStats*> live;
  for (const auto& p : pairs) {
    if (p.d_ete > 0.0) live.push_back(&p);
  }
  std::sort(live.begin(), live.end(), [](const PairStats* a, const PairStats* b) {
    if (a->d_ete != b->d_ete) return a->d_ete < b->d_ete;
    return a->hypothesis_id < b->hypothesis_id;
  });
  InfoCurve curve;
  if (live.empty()) return curve;
  // Sweep from the largest disagreement down, keeping the running minimum;
  // each distinct d_ete closes one breakpoint.
  std::vector<Breakpoint> rev;
  const PairStats* best = nullptr;
  for (std::size_t i = live.size(); i-- > 0;) {
    const PairStats* p = live[i];
    if (!best || p->rel_info < best->rel_info ||
        (p->rel_info == best->rel_info && p->hypothesis_id < best->hypothesis_id)) {
      best = p;
    }
    if (i == 0 || live[i - 1]->d_ete != p->d_ete) {
      rev.push_back({p->d_ete, best->rel_info, best->hypothesis_id, best->d_ete});
    }
  }
  curve.breakpoints.assign(rev.rbegin(), rev.rend());
  curve.epsilon_star = curve.breakpoints.front().epsilon;
  curve.info_at_zero_plus = curve.breakpoints.front().info;
  return curve;
}

InfoCurve info_curve(const CotHypothesis& hstar, const HypothesisClass& cls, const FiniteDistribution& d,
                     const ExactOptions& opts) {
  return curve_from_pairs(pairwise_stats(hstar, cls, d, opts));
}

InfoCurve transfer_info_curve(const CotHypothesis& hstar, const HypothesisClass& cls,
                              const FiniteDistribution& d_train, const FiniteDistribution& d_test,
                              const ExactOptions& opts) {
  return curve_from_pairs(pairwise_transfer_stats(hstar, cls, d_train, d_test, opts));
}

namespace {

McPairStats mc_from_counts(HypothesisId id, std::uint64_t n, std::uint64_t disagree, std::uint64_t agree) {
  McPairStats s;
  s.hypothesis_id = id;
  s.samples = n;
  const auto total = static_cast<double>(n);
  s.d_ete = static_cast<double>(disagree) / total;
  s.joint_agreement = static_cast<double>(agree) / total;
  s.d_ete_se = std::sqrt(s.d_ete * (1.0 - s.d_ete) / total);
  s.joint_agreement_se = std::sqrt(s.joint_agreement * (1.0 - s.joint_agreement) / total);
  s.rel_info = neg_log(s.joint_agreement);
  s.censor_level = std::log(total);
  if (agree == 0) {
    s.censored = true;
    s.rel_info_se = ExtReal::infinity();
  } else {
    // Delta method: sd(-log p) ~ sd(p) / p.
    s.rel_info_se = ExtReal(s.joint_agreement_se / s.joint_agreement);
  }
  return s;
}

}  // namespace

McPairStats monte_carlo_pair_stats(const CotHypothesis& hstar, const CotHypothesis& h, const InputSampler& sampler,
                                   std::uint64_t num_samples, std::uint64_t seed) {
  if (num_samples == 0) throw PreconditionError("Monte Carlo estimation needs at least one sample");
  Rng rng(seed);
  InputSeq x;
  CotOutput a;
  CotOutput b;
  std::uint64_t disagree = 0;
  std::uint64_t agree = 0;
  for (std::uint64_t i = 0; i < num_samples; ++i) {
    sampler.sample(rng, x);
    h.eval_into(x, a);
    hstar.eval_into(x, b);
    if (a.y != b.y) {
      ++disagree;
    } else if (a.z == b.z) {
      ++agree;
    }
  }
  return mc_from_counts(h.id(), num_samples, disagree, agree);
}

McCurve monte_carlo_info_curve(const CotHypothesis& hstar, const HypothesisClass& cls, const InputSampler& sampler,
                               std::uint64_t num_samples, std::uint64_t seed, const ExactOptions& opts) {
  if (num_samples == 0) throw PreconditionError("Monte Carlo estimation needs at least one sample");
  check_budget(cls.size(), num_samples, opts.budget, "Monte Carlo CoT information");
  Rng rng(seed);
  std::vector<InputSeq> xs(num_samples);
  std::vector<CotOutput> want(num_samples);
  for (std::uint64_t i = 0; i < num_samples; ++i) {
    sampler.sample(rng, xs[i]);
    hstar.eval_into(xs[i], want[i]);
  }
  McCurve result;
  result.pairs.resize(cls.size());
  parallel_for(cls.size(), opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    CotOutput out;
    for (std::uint64_t id = begin; id < end; ++id) {
      const auto h = cls.hypothesis(id);
      std::uint64_t disagree = 0;
      std::uint64_t agree = 0;
      for (std::uint64_t i = 0; i < num_samples; ++i) {
        h->eval_into(xs[i], out);
        if (out.y != want[i].y) {
          ++disagree;
        } else if (out.z == want[i].z) {
          ++agree;
        }
      }
      result.pairs[id] = mc_from_counts(id, num_samples, disagree, agree);
    }
  });
  std::vector<PairStats> plain(result.pairs.begin(), result.pairs.end());
  result.curve = curve_from_pairs(plain);
  return result;
}

std::vector<RiskPair> risk_profile(const CotHypothesis& hstar, const HypothesisClass& cls,
                                   const FiniteDistribution& d, const ExactOptions& opts) {
  check_budget(cls.size(), d.size(), opts.budget, "risk profile");
  std::vector<RiskPair> out(cls.size());
  parallel_for(cls.size(), opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t id = begin; id < end; ++id) out[id] = risk_pair(*cls.hypothesis(id), hstar, d);
  });
  return out;
}

GammaResult gamma_of_epsilon(std::span<const RiskPair> profile, double epsilon) {
  GammaResult g;
  for (std::size_t id = 0; id < profile.size(); ++id) {
    if (!(profile[id].ete > epsilon)) continue;
    if (g.empty || profile[id].cot < g.gamma) {
      g.gamma = profile[id].cot;
      g.argmin = id;
      g.empty = false;
    }
  }
  return g;
}

GammaResult gamma_of_epsilon(const CotHypothesis& hstar, const HypothesisClass& cls, const FiniteDistribution& d,
                             double epsilon, const ExactOptions& opts) {
  const auto profile = risk_profile(hstar, cls, d, opts);
  return gamma_of_epsilon(profile, epsilon);
}

ExtReal agnostic_info(const HypothesisClass& cls, const JointDistribution& d, double epsilon) {
  std::vector<RiskPair> risks(cls.size());
  double best_ete = std::numeric_limits<double>::infinity();
  double best_cot = std::numeric_limits<double>::infinity();
  for (std::uint64_t id = 0; id < cls.size(); ++id) {
    risks[id] = joint_risks(*cls.hypothesis(id), d);
    best_ete = std::min(best_ete, risks[id].ete);
    best_cot = std::min(best_cot, risks[id].cot);
  }
  ExtReal result = ExtReal::infinity();
  for (const auto& r : risks) {
    if (r.ete - best_ete >= epsilon) result = std::min(result, ExtReal(r.cot - best_cot));
  }
  return result;
}

void write_pairwise_csv(std::ostream& os, std::span<const PairStats> pairs) {
  os << "hypothesis_id,d_ete,joint_agreement,rel_info\n";
  for (const auto& p : pairs) {
    os << p.hypothesis_id << ',' << format_real(p.d_ete) << ',' << format_real(p.joint_agreement) << ','
       << p.rel_info.to_string() << '\n';
  }
}

void write_info_curve_csv(std::ostream& os, const InfoCurve& curve) {
  os << "epsilon,info,ratio_to_eps_plus\n";
  for (const auto& r : curve.rows()) {
    os << format_real(r.epsilon) << ',' << r.info.to_string() << ',' << r.ratio.to_string() << '\n';
  }
}

}  // namespace cotlearn
