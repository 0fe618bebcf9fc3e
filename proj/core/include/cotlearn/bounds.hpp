#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cotlearn/cotinfo.hpp"
#include "cotlearn/distribution.hpp"
#include "cotlearn/hypothesis.hpp"

namespace cotlearn {

// Big-O expressions are evaluated with constant 1.

/// A bound value plus a note when the formula hit a degenerate case.
struct BoundValue {
  double value = 0.0;
  std::string flag;  // empty when the formula applied cleanly
};

enum class RealizableVariant { kFinite, kGeneral };

/// Finite: (log|H| + log 1/delta) / I. General: (1/I + 1)(VC log(1/I + 1) + log 1/delta).
/// I = +inf gives 1 (one example is still needed); I = 0 gives +inf, flagged.
BoundValue realizable_upper(double log_card_or_vc, ExtReal info_at_eps, double delta, RealizableVariant variant);

/// (VC + log 1/delta) / I_ag^2; I_ag = 0 gives +inf flagged as uninformative.
BoundValue agnostic_upper(double vc, ExtReal ag_info, double delta);

/// log(1/delta) / I: below this many examples no learner reaches (epsilon, delta).
BoundValue two_point_lower(ExtReal info_at_eps, double delta);

/// 1/2 max_k d_k exp(-m info_k), the sup of e exp(-m I(e)) over the step curve.
double expected_error_lower(const InfoCurve& curve, std::uint64_t m);

/// Q(.|o) = (1-e) point mass + e uniform over N outcomes.
struct SymmetricChannel {
  double error_rate = 0.0;
  double outcomes = 2.0;

  void validate() const;
};

/// (1-e) log(1 + N(1-e)/e); +inf at e = 0.
ExtReal channel_capacity_factor(const SymmetricChannel& q);

struct PackingResult {
  std::vector<HypothesisId> members;
  double epsilon = 0.0;
  bool is_maximal = true;
};

/// Greedy maximal packing in id order (hstar first when given): keep h when
/// its E2E distance to every kept member is at least epsilon.
PackingResult greedy_packing(const HypothesisClass& cls, std::optional<HypothesisId> hstar,
                             const FiniteDistribution& d, double epsilon, const ExactOptions& opts = {});

enum class PairInfoMode { kMaxPairHalf, kMaxEntry };

struct FanoResult {
  std::size_t packing_size = 0;
  double log_m = 0.0;
  ExtReal capacity;
  ExtReal lower_proxy;  // max pairwise I / 2: the two-point prior's value
  ExtReal upper_proxy;  // max finite pairwise I
  ExtReal uniform_prior_value;  // E[I] under the uniform prior on the packing
  ExtReal proxy_used;
  double m_threshold = 0.0;
  bool vacuous = false;        // singleton packing
  bool infinite_pairs = false; // some packed pair never agrees
  bool degenerate = false;     // no packed pair agrees anywhere

  /// 1 - (m C_Q proxy + log 2) / log M, clipped below at 0.
  [[nodiscard]] double error_probability_bound(double m) const;
};

FanoResult fano_lower(const HypothesisClass& cls, const FiniteDistribution& d, const SymmetricChannel& q,
                      double epsilon, PairInfoMode mode, const ExactOptions& opts = {});

/// (log|H| + log 1/delta) / (gamma epsilon + I); m counts CoT examples, gamma m the E2E ones.
BoundValue mixed_upper(double log_card, double gamma_ratio, ExtReal info_at_eps, double epsilon, double delta);

/// (log 1/p(hstar) + log 1/delta) / I.
BoundValue mdl_upper(double prior_mass, ExtReal info_at_eps, double delta);
BoundValue mdl_upper_nats(ExtReal description_length, ExtReal info_at_eps, double delta);

/// inf{e >= 0 : I(e) >= (log 1/p + log 1/delta) / m} on the exact step curve.
double mdl_error_bound(const InfoCurve& curve, double prior_mass, std::uint64_t m, double delta);

struct TvCheck {
  double tv = 0.0;
  double identity_residual = 0.0;
};

/// TV between the m-fold laws of (x, h1(x)) and (x, h2(x)) by exhaustive
/// summation, and its distance from 1 - exp(-m I(h1,h2)).
TvCheck tv_distance_identity_check(const CotHypothesis& h1, const CotHypothesis& h2, const FiniteDistribution& d,
                                   std::uint32_t m, std::uint64_t budget = std::uint64_t{1} << 24);

struct BoundRow {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  BoundValue value;
};

/// bounds.csv: bound_name, params (k=v pairs joined by ';'), value, flag.
void write_bounds_csv(std::ostream& os, const std::vector<BoundRow>& rows);

}  // namespace cotlearn
