#include "cotlearn/risk.hpp"

namespace cotlearn {

RiskPair risk_pair(const CotHypothesis& h, const CotHypothesis& hstar, const FiniteDistribution& d) {
  RiskPair r;
  InputSeq x;
  CotOutput a;
  CotOutput b;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.input_at(i, x);
    h.eval_into(x, a);
    hstar.eval_into(x, b);
    const double p = d.probability(i);
    if (a.y != b.y) {
      r.ete += p;
      r.cot += p;
    } else if (a.z != b.z) {
      r.cot += p;
    }
  }
  return r;
}

double e2e_risk(const CotHypothesis& h, const CotHypothesis& hstar, const FiniteDistribution& d) {
  return risk_pair(h, hstar, d).ete;
}

double cot_risk(const CotHypothesis& h, const CotHypothesis& hstar, const FiniteDistribution& d) {
  return risk_pair(h, hstar, d).cot;
}

RiskPair joint_risks(const CotHypothesis& h, const JointDistribution& d) {
  RiskPair r;
  CotOutput out;
  for (const auto& pt : d.support()) {
    h.eval_into(pt.x, out);
    if (out.y != pt.y) {
      r.ete += pt.probability;
      r.cot += pt.probability;
    } else if (out.z != pt.z) {
      r.cot += pt.probability;
    }
  }
  return r;
}

RiskPair empirical_risks(const CotHypothesis& h, const CotDataset& s) {
  if (s.empty()) return {};
  std::size_t ete_errors = 0;
  std::size_t cot_errors = 0;
  CotOutput out;
  for (const auto& ex : s.examples) {
    h.eval_into(ex.x, out);
    if (out.y != ex.y) {
      ++ete_errors;
      ++cot_errors;
    } else if (ex.z && out.z != *ex.z) {
      ++cot_errors;
    }
  }
  const auto n = static_cast<double>(s.size());
  return {static_cast<double>(ete_errors) / n, static_cast<double>(cot_errors) / n};
}

}  // namespace cotlearn
