#include "cotlearn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cotlearn/parallel.hpp"

namespace cotlearn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_delta(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("delta must lie in (0, 1], got " + format_real(delta));
}

double log_inv(double delta) { return std::log(1.0 / delta); }

}  // namespace

BoundValue realizable_upper(double log_card_or_vc, ExtReal info_at_eps, double delta, RealizableVariant variant) {
  check_delta(delta);
  if (info_at_eps.is_inf()) return {1.0, "infinite information: one example suffices"};
  const double info = info_at_eps.value();
  if (info <= 0.0) return {kInf, "zero information"};
  if (variant == RealizableVariant::kFinite) return {(log_card_or_vc + log_inv(delta)) / info, {}};
  const double k = 1.0 / info + 1.0;
  return {k * (log_card_or_vc * std::log(k) + log_inv(delta)), {}};
}

BoundValue agnostic_upper(double vc, ExtReal ag_info, double delta) {
  check_delta(delta);
  if (ag_info.is_inf()) return {0.0, {}};
  const double info = ag_info.value();
  if (info <= 0.0) return {kInf, "CoT supervision uninformative"};
  return {(vc + log_inv(delta)) / (info * info), {}};
}

BoundValue two_point_lower(ExtReal info_at_eps, double delta) {
  check_delta(delta);
  if (info_at_eps.is_inf()) return {0.0, {}};
  if (info_at_eps.value() <= 0.0) return {kInf, "zero information"};
  return {log_inv(delta) / info_at_eps.value(), {}};
}

double expected_error_lower(const InfoCurve& curve, std::uint64_t m) {
  double best = 0.0;
  for (const auto& b : curve.breakpoints) {
    double term;
    if (m == 0) {
      term = b.epsilon;
    } else if (b.info.is_inf()) {
      term = 0.0;
    } else {
      term = b.epsilon * std::exp(-static_cast<double>(m) * b.info.value());
    }
    best = std::max(best, term);
  }
  return 0.5 * best;
}

void SymmetricChannel::validate() const {
  if (!(error_rate >= 0.0 && error_rate <= 1.0)) throw PreconditionError("channel error rate must lie in [0, 1]");
  if (!(outcomes >= 2.0)) throw PreconditionError("channel needs at least two outcomes");
}

ExtReal channel_capacity_factor(const SymmetricChannel& q) {
  q.validate();
  const double e = q.error_rate;
  if (e == 0.0) return ExtReal::infinity();
  if (e == 1.0) return ExtReal(0.0);
  return ExtReal((1.0 - e) * std::log1p(q.outcomes * (1.0 - e) / e));
}

namespace {

// Output (y) of every listed hypothesis on every support point.
std::vector<std::vector<Token>> output_table(const HypothesisClass& cls, const FiniteDistribution& d,
                                             const ExactOptions& opts) {
  if (cls.size() > opts.budget / std::max<std::uint64_t>(d.size(), 1)) {
    throw BudgetError("pairwise distances over " + std::to_string(cls.size()) + " hypotheses exceed the exact budget");
  }
  std::vector<std::vector<Token>> ys(cls.size());
  parallel_for(cls.size(), opts.workers, [&](std::uint64_t begin, std::uint64_t end) {
    InputSeq x;
    CotOutput out;
    for (std::uint64_t id = begin; id < end; ++id) {
      const auto h = cls.hypothesis(id);
      ys[id].resize(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        d.input_at(i, x);
        h->eval_into(x, out);
        ys[id][i] = out.y;
      }
    }
  });
  return ys;
}

double output_distance(const std::vector<Token>& a, const std::vector<Token>& b, const FiniteDistribution& d) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) total += d.probability(i);
  }
  return total;
}

}  // namespace

PackingResult greedy_packing(const HypothesisClass& cls, std::optional<HypothesisId> hstar,
                             const FiniteDistribution& d, double epsilon, const ExactOptions& opts) {
  const auto ys = output_table(cls, d, opts);
  PackingResult result;
  result.epsilon = epsilon;
  auto try_add = [&](HypothesisId id) {
    for (HypothesisId member : result.members) {
      if (member == id || output_distance(ys[id], ys[member], d) < epsilon) return;
    }
    result.members.push_back(id);
  };
  if (hstar) {
    if (*hstar >= cls.size()) throw PreconditionError("packing seed is not a class member");
    result.members.push_back(*hstar);
  }
  for (HypothesisId id = 0; id < cls.size(); ++id) try_add(id);
  return result;
}

double FanoResult::error_probability_bound(double m) const {
  if (vacuous || log_m <= 0.0) return 0.0;
  double info_term;
  if (proxy_used.is_inf() || capacity.is_inf()) {
    const bool zero = (proxy_used.value() == 0.0 && !proxy_used.is_inf()) ||
                      (capacity.value() == 0.0 && !capacity.is_inf()) || m == 0.0;
    info_term = zero ? 0.0 : kInf;
  } else {
    info_term = m * capacity.value() * proxy_used.value();
  }
  return std::max(0.0, 1.0 - (info_term + std::numbers::ln2) / log_m);
}

FanoResult fano_lower(const HypothesisClass& cls, const FiniteDistribution& d, const SymmetricChannel& q,
                      double epsilon, PairInfoMode mode, const ExactOptions& opts) {
  const PackingResult packing = greedy_packing(cls, std::nullopt, d, epsilon, opts);
  FanoResult r;
  r.packing_size = packing.members.size();
  r.log_m = std::log(static_cast<double>(r.packing_size));
  r.capacity = channel_capacity_factor(q);
  const std::size_t k = packing.members.size();
  std::vector<std::unique_ptr<CotHypothesis>> hs;
  for (HypothesisId id : packing.members) hs.push_back(cls.hypothesis(id));
  // Pairwise joint agreement within the packing.
  std::vector<std::vector<CotOutput>> outs(k, std::vector<CotOutput>(d.size()));
  InputSeq x;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.input_at(i, x);
    for (std::size_t a = 0; a < k; ++a) hs[a]->eval_into(x, outs[a][i]);
  }
  double max_finite = 0.0;
  bool any_finite = false;
  double sum_finite = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      double agree = 0.0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (outs[a][i] == outs[b][i]) agree += d.probability(i);
      }
      const ExtReal info = neg_log(agree);
      if (info.is_inf()) {
        r.infinite_pairs = true;
      } else {
        any_finite = true;
        max_finite = std::max(max_finite, info.value());
        sum_finite += info.value();
      }
    }
  }
  r.vacuous = k <= 1;
  r.degenerate = k > 1 && !any_finite;
  r.upper_proxy = ExtReal(max_finite);
  r.lower_proxy = r.infinite_pairs ? ExtReal::infinity() : ExtReal(max_finite / 2.0);
  if (k == 0) {
    r.uniform_prior_value = ExtReal(0.0);
  } else if (r.infinite_pairs) {
    r.uniform_prior_value = ExtReal::infinity();
  } else {
    r.uniform_prior_value = ExtReal(2.0 * sum_finite / static_cast<double>(k * k));
  }
  r.proxy_used = mode == PairInfoMode::kMaxPairHalf ? r.lower_proxy : r.upper_proxy;
  if (r.vacuous) {
    r.m_threshold = 0.0;
    return r;
  }
  double denom_info;
  if (r.proxy_used.is_inf() || r.capacity.is_inf()) {
    const bool zero = (!r.proxy_used.is_inf() && r.proxy_used.value() == 0.0) ||
                      (!r.capacity.is_inf() && r.capacity.value() == 0.0);
    denom_info = zero ? 0.0 : kInf;
  } else {
    denom_info = r.capacity.value() * r.proxy_used.value();
  }
  r.m_threshold = r.log_m / (2.0 * (denom_info + std::numbers::ln2));
  return r;
}

BoundValue mixed_upper(double log_card, double gamma_ratio, ExtReal info_at_eps, double epsilon, double delta) {
  check_delta(delta);
  if (!(gamma_ratio >= 0.0)) throw PreconditionError("mixed supervision ratio must be non-negative");
  if (info_at_eps.is_inf()) return {1.0, "infinite information: one example suffices"};
  const double denom = gamma_ratio * epsilon + info_at_eps.value();
  if (denom <= 0.0) return {kInf, "zero denominator"};
  return {(log_card + log_inv(delta)) / denom, {}};
}

BoundValue mdl_upper_nats(ExtReal description_length, ExtReal info_at_eps, double delta) {
  check_delta(delta);
  if (description_length.is_inf()) return {kInf, "zero prior mass"};
  if (info_at_eps.is_inf()) return {1.0, "infinite information: one example suffices"};
  if (info_at_eps.value() <= 0.0) return {kInf, "zero information"};
  return {(description_length.value() + log_inv(delta)) / info_at_eps.value(), {}};
}

BoundValue mdl_upper(double prior_mass, ExtReal info_at_eps, double delta) {
  if (!(prior_mass >= 0.0 && prior_mass <= 1.0)) throw PreconditionError("prior mass must lie in [0, 1]");
  return mdl_upper_nats(neg_log(prior_mass), info_at_eps, delta);
}

double mdl_error_bound(const InfoCurve& curve, double prior_mass, std::uint64_t m, double delta) {
  check_delta(delta);
  if (!(prior_mass > 0.0 && prior_mass <= 1.0)) throw PreconditionError("prior mass must lie in (0, 1]");
  const double numer = neg_log(prior_mass).value() + log_inv(delta);
  const ExtReal threshold = m == 0 ? (numer > 0.0 ? ExtReal::infinity() : ExtReal(0.0))
                                   : ExtReal(numer / static_cast<double>(m));
  // The curve is non-decreasing and constant on [d_{k-1}, d_k), so the
  // generalised inverse is the left end of the first segment reaching the threshold.
  for (const auto& row : curve.rows()) {
    if (row.info >= threshold) return row.epsilon;
  }
  return curve.rows().back().epsilon;
}

TvCheck tv_distance_identity_check(const CotHypothesis& h1, const CotHypothesis& h2, const FiniteDistribution& d,
                                   std::uint32_t m, std::uint64_t budget) {
  // Single-draw atoms of the two laws on (x, y, z): an agreeing x is one
  // shared atom, a disagreeing x splits into two atoms, one per hypothesis.
  std::vector<std::pair<double, double>> atoms;
  double agreement = 0.0;
  InputSeq x;
  CotOutput a;
  CotOutput b;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.input_at(i, x);
    h1.eval_into(x, a);
    h2.eval_into(x, b);
    const double p = d.probability(i);
    if (a == b) {
      atoms.emplace_back(p, p);
      agreement += p;
    } else {
      atoms.emplace_back(p, 0.0);
      atoms.emplace_back(0.0, p);
    }
  }
  double cells = 1.0;
  for (std::uint32_t t = 0; t < m; ++t) cells *= static_cast<double>(atoms.size());
  if (cells > static_cast<double>(budget)) {
    throw BudgetError("product space of " + format_real(cells) + " cells exceeds the TV budget");
  }
  // Odometer over atom tuples.
  std::vector<std::size_t> idx(m, 0);
  double tv = 0.0;
  const auto total = static_cast<std::uint64_t>(cells);
  for (std::uint64_t c = 0; c < total; ++c) {
    double p1 = 1.0;
    double p2 = 1.0;
    for (std::size_t k : idx) {
      p1 *= atoms[k].first;
      p2 *= atoms[k].second;
    }
    tv += std::abs(p1 - p2);
    for (std::size_t t = 0; t < m; ++t) {
      if (++idx[t] < atoms.size()) break;
      idx[t] = 0;
    }
  }
  tv *= 0.5;
  const ExtReal info = neg_log(agreement);
  const double predicted = info.is_inf() ? 1.0 : 1.0 - std::exp(-static_cast<double>(m) * info.value());
  return {tv, std::abs(tv - predicted)};
}

void write_bounds_csv(std::ostream& os, const std::vector<BoundRow>& rows) {
  os << "bound_name,params,value,flag\n";
  for (const auto& r : rows) {
    os << r.name << ',';
    for (std::size_t i = 0; i < r.params.size(); ++i) {
      if (i) os << ';';
      os << r.params[i].first << '=' << r.params[i].second;
    }
    os << ',' << format_real(r.value.value) << ',' << r.value.flag << '\n';
  }
}

}  // namespace cotlearn
