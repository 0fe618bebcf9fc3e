#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cotlearn/cotinfo.hpp"

namespace cotlearn {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t subclasses = 50;
  std::uint64_t seed = 7;
  unsigned workers = 0;
  double identity_tolerance = 1e-12;
  ExactOptions exact;
};

/// Structural properties of the information curve of (hstar, cls, d):
/// I(e) >= e at breakpoints, monotonicity, subclass anti-monotonicity,
/// pairwise rel_info >= -log(1 - d_ete) >= d_ete, the gamma identity and bracket.
std::vector<CheckResult> run_invariant_suite(const CotHypothesis& hstar, HypothesisId hstar_id,
                                             const HypothesisClass& cls, const FiniteDistribution& d,
                                             const SuiteOptions& opts = {});

/// The same checks over the built-in reference classes (small DFA classes,
/// LinThresh d=4, and the synthetic classes with their closed-form curves).
std::vector<CheckResult> run_reference_suite(const SuiteOptions& opts = {});

}  // namespace cotlearn
