#include "cotlearn/synthetic.hpp"

#include <string>

namespace cotlearn {

namespace {

void check_maps(const std::vector<TableMap>& maps, const char* what, std::size_t domain) {
  if (maps.empty()) throw PreconditionError(std::string(what) + " is empty");
  for (const auto& f : maps) {
    if (f.empty()) throw PreconditionError(std::string(what) + " contains a map on an empty domain");
    if (f.size() != domain) throw PreconditionError(std::string(what) + " maps disagree on the domain size");
  }
}

}  // namespace

TableHypothesis::TableHypothesis(Shape shape, const TableMap* ete, const TableMap* cot, HypothesisId id,
                                 std::size_t tuple)
    : shape_(shape), ete_(ete), cot_(cot), id_(id), tuple_(tuple) {}

Token TableHypothesis::lookup(const TableMap& f, Symbol a) const {
  if (a >= f.size()) throw DomainError("symbol " + std::to_string(a) + " outside a domain of size " + std::to_string(f.size()));
  return f[a];
}

void TableHypothesis::eval_into(std::span<const Symbol> x, CotOutput& out) const {
  const std::size_t want = shape_ == Shape::kIid ? tuple_ : 1;
  if (x.size() != want) {
    throw DomainError("expected an input of length " + std::to_string(want) + ", got " + std::to_string(x.size()));
  }
  switch (shape_) {
    case Shape::kProduct:
      out.y = lookup(*ete_, x[0]);
      out.z.assign(1, lookup(*cot_, x[0]));
      break;
    case Shape::kFullyInformative:
      out.y = lookup(*ete_, x[0]);
      out.z.assign(1, static_cast<Token>(id_));
      break;
    case Shape::kIid:
      out.z.resize(x.size());
      for (std::size_t t = 0; t < x.size(); ++t) out.z[t] = lookup(*ete_, x[t]);
      out.y = out.z.back();
      break;
  }
}

ProductClass::ProductClass(std::vector<TableMap> cot_part, std::vector<TableMap> ete_part)
    : cot_(std::move(cot_part)), ete_(std::move(ete_part)) {
  check_maps(ete_, "product class output part", ete_.empty() || ete_.front().empty() ? 1 : ete_.front().size());
  check_maps(cot_, "product class CoT part", ete_.front().size());
}

std::unique_ptr<CotHypothesis> ProductClass::hypothesis(HypothesisId id) const {
  check_id(id);
  const auto& f = ete_[id % ete_.size()];
  const auto& g = cot_[id / ete_.size()];
  return std::make_unique<TableHypothesis>(TableHypothesis::Shape::kProduct, &f, &g, id);
}

nlohmann::json ProductClass::parameters() const { return {{"cot_part", cot_}, {"ete_part", ete_}}; }

FullyInformativeClass::FullyInformativeClass(std::vector<TableMap> base) : base_(std::move(base)) {
  check_maps(base_, "fully informative base", base_.empty() || base_.front().empty() ? 1 : base_.front().size());
}

std::unique_ptr<CotHypothesis> FullyInformativeClass::hypothesis(HypothesisId id) const {
  check_id(id);
  return std::make_unique<TableHypothesis>(TableHypothesis::Shape::kFullyInformative, &base_[id], nullptr, id);
}

nlohmann::json FullyInformativeClass::parameters() const { return {{"base", base_}}; }

IidReplicationClass::IidReplicationClass(std::vector<TableMap> base, std::size_t replication)
    : base_(std::move(base)), replication_(replication) {
  check_maps(base_, "iid base class", base_.empty() || base_.front().empty() ? 1 : base_.front().size());
  if (replication_ == 0) throw PreconditionError("replication factor must be positive");
}

std::unique_ptr<CotHypothesis> IidReplicationClass::hypothesis(HypothesisId id) const {
  check_id(id);
  return std::make_unique<TableHypothesis>(TableHypothesis::Shape::kIid, &base_[id], nullptr, id, replication_);
}

nlohmann::json IidReplicationClass::parameters() const { return {{"base", base_}, {"T", replication_}}; }

ProductClass build_product(std::vector<TableMap> cot_part, std::vector<TableMap> ete_part) {
  return ProductClass(std::move(cot_part), std::move(ete_part));
}

FullyInformativeClass build_fully_informative(std::vector<TableMap> base) {
  return FullyInformativeClass(std::move(base));
}

IidReplicationClass build_iid(std::vector<TableMap> base, std::size_t replication) {
  return IidReplicationClass(std::move(base), replication);
}

}  // namespace cotlearn
