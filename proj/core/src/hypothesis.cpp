#include "cotlearn/hypothesis.hpp"

#include <string>

namespace cotlearn {

ReferenceBehavior::ReferenceBehavior(const CotHypothesis& hstar, const FiniteDistribution& d)
    : hstar_(&hstar), d_(&d), outputs_(d.size()) {
  InputSeq x;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.input_at(i, x);
    hstar.eval_into(x, outputs_[i]);
  }
}

void generic_agreement_row(const CotHypothesis& h, const ReferenceBehavior& ref, AgreementRow& row) {
  const auto& d = ref.distribution();
  row.ete.assign(d.size());
  row.joint.assign(d.size());
  InputSeq x;
  CotOutput out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.input_at(i, x);
    h.eval_into(x, out);
    const CotOutput& want = ref.output(i);
    if (out.y != want.y) continue;
    row.ete.set(i);
    if (out.z == want.z) row.joint.set(i);
  }
}

void HypothesisClass::agreement_row(const CotHypothesis& h, const ReferenceBehavior& ref, AgreementRow& row) const {
  generic_agreement_row(h, ref, row);
}

void HypothesisClass::check_id(HypothesisId id) const {
  if (id >= size()) {
    throw PreconditionError("hypothesis id " + std::to_string(id) + " out of range for class of size " +
                            std::to_string(size()));
  }
}

double weighted_mass(const BitRow& row, const FiniteDistribution& d, bool clear) {
  double total = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (row.test(i) != clear) total += d.probability(i);
  }
  return total;
}

}  // namespace cotlearn
