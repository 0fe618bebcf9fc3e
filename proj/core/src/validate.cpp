#include "cotlearn/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cotlearn/dfa.hpp"
#include "cotlearn/linthresh.hpp"
#include "cotlearn/synthetic.hpp"

namespace cotlearn {

namespace {

// Points at which two step curves are compared: every evaluation point, the
// midpoints between them, and a uniform grid.
std::vector<double> probe_grid(const InfoCurve& curve) {
  std::vector<double> eps;
  const auto rows = curve.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    eps.push_back(rows[i].epsilon);
    if (i + 1 < rows.size()) eps.push_back(0.5 * (rows[i].epsilon + rows[i + 1].epsilon));
  }
  for (int k = 0; k <= 1000; ++k) eps.push_back(k / 1000.0);
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  return eps;
}

std::string describe(double eps, ExtReal a, ExtReal b) {
  std::ostringstream os;
  os << "at epsilon=" << format_real(eps) << ": " << a.to_string() << " vs " << b.to_string();
  return os.str();
}

// a < b beyond relative rounding slack; summing support masses in a different
// order moves the last few bits.
bool below(ExtReal a, ExtReal b, double tol) {
  if (b.is_inf()) return !a.is_inf();
  if (a.is_inf()) return false;
  return a.value() < b.value() - tol * std::max(1.0, std::abs(b.value()));
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const CotHypothesis& hstar, HypothesisId hstar_id,
                                             const HypothesisClass& cls, const FiniteDistribution& d,
                                             const SuiteOptions& opts) {
  ExactOptions exact = opts.exact;
  exact.workers = opts.workers;
  const auto pairs = pairwise_stats(hstar, cls, d, exact);
  const InfoCurve curve = curve_from_pairs(pairs);
  const std::string tag = cls.kind() + " |H|=" + std::to_string(cls.size());
  std::vector<CheckResult> out;

  {
    CheckResult c{tag + ": I(e) >= e at every breakpoint", true, ""};
    for (const auto& b : curve.breakpoints) {
      const ExtReal floor = neg_log(1.0 - b.minimizer_d_ete);
      if (below(b.info, ExtReal(b.epsilon), opts.identity_tolerance) || below(b.info, floor, opts.identity_tolerance)) {
        c.passed = false;
        c.detail = describe(b.epsilon, b.info, floor);
        break;
      }
    }
    out.push_back(c);
  }

  const auto grid = probe_grid(curve);
  {
    CheckResult c{tag + ": curve non-decreasing in epsilon", true, ""};
    ExtReal prev(0.0);
    for (double e : grid) {
      const ExtReal v = curve.evaluate(e);
      if (v < prev) {
        c.passed = false;
        c.detail = describe(e, v, prev);
        break;
      }
      prev = v;
    }
    out.push_back(c);
  }

  {
    CheckResult c{tag + ": subclass curves dominate (" + std::to_string(opts.subclasses) + " subclasses)", true, ""};
    Rng rng(derive_seed(opts.seed, {cls.size()}));
    for (std::uint64_t s = 0; s < opts.subclasses && c.passed; ++s) {
      const double keep = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      std::bernoulli_distribution coin(keep);
      std::vector<PairStats> sub;
      for (const auto& p : pairs) {
        if (p.hypothesis_id == hstar_id || coin(rng)) sub.push_back(p);
      }
      const InfoCurve sc = curve_from_pairs(sub);
      for (double e : grid) {
        if (sc.evaluate(e) < curve.evaluate(e)) {
          c.passed = false;
          c.detail = "subclass " + std::to_string(s) + " " + describe(e, sc.evaluate(e), curve.evaluate(e));
          break;
        }
      }
    }
    out.push_back(c);
  }

  {
    CheckResult c{tag + ": rel_info >= -log(1-d_ete) >= d_ete for every pair", true, ""};
    for (const auto& p : pairs) {
      const ExtReal mid = neg_log(1.0 - p.d_ete);
      if (below(p.rel_info, mid, opts.identity_tolerance) || mid < ExtReal(p.d_ete)) {
        c.passed = false;
        c.detail = "hypothesis " + std::to_string(p.hypothesis_id) + ": " + p.rel_info.to_string() + " vs " +
                   mid.to_string() + " vs " + format_real(p.d_ete);
        break;
      }
    }
    out.push_back(c);
  }

  const auto profile = risk_profile(hstar, cls, d, exact);
  CheckResult identity{tag + ": I(e) = -log(1 - gamma(e)) to " + format_real(opts.identity_tolerance), true, ""};
  CheckResult bracket{tag + ": max(I/(1+I), e) <= gamma(e) <= min(I, 1)", true, ""};
  for (const auto& row : curve.rows()) {
    const GammaResult g = gamma_of_epsilon(profile, row.epsilon);
    if (row.info.is_inf()) {
      // Either Delta is empty, or every member of it disagrees everywhere (gamma = 1
      // up to the rounding of summing the support masses).
      if (!g.empty && 1.0 - g.gamma > opts.identity_tolerance && identity.passed) {
        identity.passed = false;
        identity.detail = "curve infinite but gamma=" + format_real(g.gamma) + " at epsilon=" + format_real(row.epsilon);
      }
      continue;
    }
    if (g.empty) {
      if (identity.passed) {
        identity.passed = false;
        identity.detail = "Delta empty where the curve is finite at epsilon=" + format_real(row.epsilon);
      }
      continue;
    }
    const ExtReal from_gamma = neg_log(1.0 - g.gamma);
    const double info = row.info.value();
    if (identity.passed && (from_gamma.is_inf() || std::abs(from_gamma.value() - info) > opts.identity_tolerance)) {
      identity.passed = false;
      identity.detail = describe(row.epsilon, row.info, from_gamma);
    }
    const double lo = std::max(info / (1.0 + info), row.epsilon);
    const double hi = std::min(info, 1.0);
    if (bracket.passed && !(lo <= g.gamma && g.gamma <= hi)) {
      bracket.passed = false;
      bracket.detail = "at epsilon=" + format_real(row.epsilon) + ": gamma=" + format_real(g.gamma) + " not in [" +
                       format_real(lo) + ", " + format_real(hi) + "]";
    }
  }
  out.push_back(identity);
  out.push_back(bracket);
  return out;
}

namespace {

void append(std::vector<CheckResult>& all, std::vector<CheckResult> more) {
  all.insert(all.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
}

void run_on(std::vector<CheckResult>& all, const HypothesisClass& cls, HypothesisId target,
            const FiniteDistribution& d, const SuiteOptions& opts) {
  const auto h = cls.hypothesis(target);
  append(all, run_invariant_suite(*h, target, cls, d, opts));
}

}  // namespace

std::vector<CheckResult> run_reference_suite(const SuiteOptions& opts) {
  std::vector<CheckResult> all;

  // Small DFA classes with a fixed, fully connected 3-state target.
  for (std::uint32_t symbols : {2U, 3U}) {
    const DfaClass cls(DfaSpec{3, symbols, 0, {2}, std::nullopt});
    std::vector<StateId> table(3 * symbols);
    for (StateId s = 0; s < 3; ++s) {
      for (Symbol a = 0; a < symbols; ++a) table[s * symbols + a] = (s + a + 1) % 3;
    }
    run_on(all, cls, cls.encode(table), FiniteDistribution::uniform(symbols, 5), opts);
  }

  {
    const LinThreshClass cls(LinThreshSpec{4, 6, 6});
    const std::vector<int> w = {1, -1, 1, 0};
    run_on(all, cls, cls.encode(w), FiniteDistribution::uniform(2, 6), opts);
  }

  const auto uniform4 = FiniteDistribution::uniform(4, 1);
  {
    const ProductClass cls({{0, 1, 0, 1}, {1, 1, 0, 0}}, {{0, 0, 1, 1}, {0, 1, 1, 1}, {1, 0, 1, 0}});
    run_on(all, cls, 0, uniform4, opts);
    const auto h = cls.hypothesis(0);
    const InfoCurve curve = info_curve(*h, cls, uniform4, opts.exact);
    // Here e+ is the smallest E2E disagreement strictly above e.
    CheckResult c{"product: I(e) = -log(1 - e+) at every evaluation point", !curve.breakpoints.empty(), ""};
    for (double e : probe_grid(curve)) {
      ExtReal want = ExtReal::infinity();
      for (const auto& b : curve.breakpoints) {
        if (b.epsilon > e) {
          want = neg_log(1.0 - b.epsilon);
          break;
        }
      }
      const ExtReal got = curve.evaluate(e);
      const bool ok = want.is_inf() ? got.is_inf() : !got.is_inf() && std::abs(got.value() - want.value()) <= 1e-12;
      if (!ok) {
        c.passed = false;
        c.detail = describe(e, got, want);
      }
    }
    all.push_back(c);
  }

  {
    const FullyInformativeClass cls({{0, 0, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 0}, {0, 0, 0, 0}});
    run_on(all, cls, 1, uniform4, opts);
    const auto h = cls.hypothesis(1);
    const InfoCurve curve = info_curve(*h, cls, uniform4, opts.exact);
    CheckResult c{"fully informative: curve is +inf everywhere", true, ""};
    for (double e : probe_grid(curve)) {
      if (!curve.evaluate(e).is_inf()) {
        c.passed = false;
        c.detail = "finite at epsilon=" + format_real(e);
        break;
      }
    }
    all.push_back(c);
  }

  for (std::size_t t : {2U, 3U, 5U}) {
    const IidReplicationClass cls({{0, 0, 1, 1}, {0, 1, 1, 0}, {1, 1, 1, 1}}, t);
    const auto d = FiniteDistribution::uniform(4, t);
    run_on(all, cls, 0, d, opts);
    const auto h = cls.hypothesis(0);
    const InfoCurve curve = info_curve(*h, cls, d, opts.exact);
    CheckResult c{"iid T=" + std::to_string(t) + ": I(e) >= T e at every breakpoint", !curve.breakpoints.empty(), ""};
    for (const auto& b : curve.breakpoints) {
      if (b.info < ExtReal(static_cast<double>(t) * b.epsilon)) {
        c.passed = false;
        c.detail = describe(b.epsilon, b.info, ExtReal(static_cast<double>(t) * b.epsilon));
      }
    }
    all.push_back(c);
  }
  return all;
}

}  // namespace cotlearn
