#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "cotlearn/distribution.hpp"
#include "cotlearn/hypothesis.hpp"
#include "cotlearn/risk.hpp"

namespace cotlearn {

/// Default cap on (class size x support size) for exact enumeration.
inline constexpr std::uint64_t kDefaultExactBudget = std::uint64_t{1} << 31;

struct ExactOptions {
  std::uint64_t budget = kDefaultExactBudget;
  unsigned workers = 0;
};

/// Disagreement and agreement of one hypothesis with the reference.
struct PairStats {
  HypothesisId hypothesis_id = kNoId;
  double d_ete = 0.0;
  double joint_agreement = 1.0;
  ExtReal rel_info;
};

/// Plug-in estimate from i.i.d. draws. When no draw agrees, rel_info is
/// +inf and `censored` is set: the truth is only known to exceed about log(samples).
struct McPairStats : PairStats {
  std::uint64_t samples = 0;
  double d_ete_se = 0.0;
  double joint_agreement_se = 0.0;
  ExtReal rel_info_se;
  bool censored = false;
  double censor_level = 0.0;
};

struct Breakpoint {
  double epsilon = 0.0;  // a distinct non-zero d_ete value
  ExtReal info;          // min rel_info over hypotheses with d_ete >= epsilon
  HypothesisId minimizer = kNoId;
  double minimizer_d_ete = 0.0;
};

/// One row of the tabulated curve: I(e) = info for e in [epsilon, next epsilon).
struct CurveRow {
  double epsilon = 0.0;
  ExtReal info;
  ExtReal ratio;  // info / max(epsilon, epsilon_star)
};

/// Exact step-function form of e -> I(e; H).
///
/// Breakpoint k holds d_k (ascending) and the minimum relative information
/// over hypotheses with d_ete >= d_k. Because Delta(e) uses a strict
/// inequality, I(e) = info_k for d_{k-1} <= e < d_k, and +inf from the last d_k on.
struct InfoCurve {
  std::vector<Breakpoint> breakpoints;
  std::optional<double> epsilon_star;   // unset when no hypothesis disagrees
  ExtReal info_at_zero_plus = ExtReal::infinity();

  /// I(epsilon); epsilon must be >= 0.
  [[nodiscard]] ExtReal evaluate(double epsilon) const;
  /// I(0+) / epsilon_star, the limiting value-of-a-CoT-example ratio.
  [[nodiscard]] ExtReal ratio_at_zero() const;
  [[nodiscard]] std::vector<CurveRow> rows() const;
};

/// I(e) / max(e, epsilon_star); +inf numerators stay +inf.
ExtReal ratio_to_eps_plus(ExtReal info, double epsilon, double epsilon_star);

/// Exact stats of one pair over the whole support.
PairStats pair_stats(const CotHypothesis& hstar, const CotHypothesis& h, const FiniteDistribution& d);

/// Stats of every class member against hstar, indexed by id.
std::vector<PairStats> pairwise_stats(const CotHypothesis& hstar, const HypothesisClass& cls,
                                      const FiniteDistribution& d, const ExactOptions& opts = {});

/// Transfer variant: d_ete under d_test, agreement under d_train.
std::vector<PairStats> pairwise_transfer_stats(const CotHypothesis& hstar, const HypothesisClass& cls,
                                               const FiniteDistribution& d_train, const FiniteDistribution& d_test,
                                               const ExactOptions& opts = {});

/// Builds the step curve from per-hypothesis stats. Pairs with d_ete == 0 never enter Delta.
InfoCurve curve_from_pairs(std::span<const PairStats> pairs);

InfoCurve info_curve(const CotHypothesis& hstar, const HypothesisClass& cls, const FiniteDistribution& d,
                     const ExactOptions& opts = {});

InfoCurve transfer_info_curve(const CotHypothesis& hstar, const HypothesisClass& cls,
                              const FiniteDistribution& d_train, const FiniteDistribution& d_test,
                              const ExactOptions& opts = {});

McPairStats monte_carlo_pair_stats(const CotHypothesis& hstar, const CotHypothesis& h, const InputSampler& sampler,
                                   std::uint64_t num_samples, std::uint64_t seed);

struct McCurve {
  InfoCurve curve;
  std::vector<McPairStats> pairs;
};

/// Estimates every pair from one shared set of draws and builds the plug-in curve.
McCurve monte_carlo_info_curve(const CotHypothesis& hstar, const HypothesisClass& cls, const InputSampler& sampler,
                               std::uint64_t num_samples, std::uint64_t seed, const ExactOptions& opts = {});

/// Exact (L_ete, L_cot) of each member against hstar, computed by direct evaluation.
std::vector<RiskPair> risk_profile(const CotHypothesis& hstar, const HypothesisClass& cls,
                                   const FiniteDistribution& d, const ExactOptions& opts = {});

struct GammaResult {
  double gamma = 1.0;
  bool empty = true;  // Delta(epsilon) is empty; gamma is reported as 1
  HypothesisId argmin = kNoId;
};

/// inf of cot_risk over {h : d_ete(h) > epsilon}.
GammaResult gamma_of_epsilon(std::span<const RiskPair> profile, double epsilon);
GammaResult gamma_of_epsilon(const CotHypothesis& hstar, const HypothesisClass& cls, const FiniteDistribution& d,
                             double epsilon, const ExactOptions& opts = {});

/// inf{L_cot(h) - L*_cot : L_ete(h) - L*_ete >= epsilon}. Note the non-strict
/// inequality, unlike the realizable curve. Empty set gives +inf.
ExtReal agnostic_info(const HypothesisClass& cls, const JointDistribution& d, double epsilon);

void write_pairwise_csv(std::ostream& os, std::span<const PairStats> pairs);
void write_info_curve_csv(std::ostream& os, const InfoCurve& curve);

}  // namespace cotlearn
