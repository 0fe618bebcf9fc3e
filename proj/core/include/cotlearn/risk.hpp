#pragma once

#include "cotlearn/distribution.hpp"
#include "cotlearn/hypothesis.hpp"

namespace cotlearn {

struct RiskPair {
  double ete = 0.0;
  double cot = 0.0;
};

/// P_x[ete(h)(x) != ete(hstar)(x)].
double e2e_risk(const CotHypothesis& h, const CotHypothesis& hstar, const FiniteDistribution& d);

/// P_x[h(x) != hstar(x)], comparing output and chain of thought together.
double cot_risk(const CotHypothesis& h, const CotHypothesis& hstar, const FiniteDistribution& d);

/// Both risks of h against hstar from one pass over the support.
RiskPair risk_pair(const CotHypothesis& h, const CotHypothesis& hstar, const FiniteDistribution& d);

/// (L_ete, L_cot) of h against labelled triples.
RiskPair joint_risks(const CotHypothesis& h, const JointDistribution& d);

/// Empirical (output, full) error fractions. Examples without z count only
/// their output mismatch, in both fractions. An empty dataset gives (0, 0).
RiskPair empirical_risks(const CotHypothesis& h, const CotDataset& s);

}  // namespace cotlearn
