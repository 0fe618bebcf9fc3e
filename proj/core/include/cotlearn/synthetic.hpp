#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cotlearn/hypothesis.hpp"

namespace cotlearn {

/// A map on the finite domain {0..K-1}, stored as its value table.
using TableMap = std::vector<Token>;

/// Hypothesis over single-symbol inputs x = (a) or T-tuples, defined by lookup
/// tables. Shared by all synthetic classes; the class decides how y and z are formed.
/// It borrows the class's tables, so it must not outlive the class.
class TableHypothesis final : public CotHypothesis {
 public:
  enum class Shape { kProduct, kFullyInformative, kIid };

  TableHypothesis(Shape shape, const TableMap* ete, const TableMap* cot, HypothesisId id, std::size_t tuple = 1);

  [[nodiscard]] HypothesisId id() const override { return id_; }
  void eval_into(std::span<const Symbol> x, CotOutput& out) const override;

 private:
  Token lookup(const TableMap& f, Symbol a) const;

  Shape shape_;
  const TableMap* ete_;
  const TableMap* cot_;
  HypothesisId id_;
  std::size_t tuple_;
};

/// h_{g,f}(x) = (f(x), g(x)). Id = cot_index * |ete_part| + ete_index.
class ProductClass final : public HypothesisClass {
 public:
  ProductClass(std::vector<TableMap> cot_part, std::vector<TableMap> ete_part);

  [[nodiscard]] std::uint64_t size() const override { return cot_.size() * ete_.size(); }
  [[nodiscard]] std::unique_ptr<CotHypothesis> hypothesis(HypothesisId id) const override;
  [[nodiscard]] std::string kind() const override { return "product"; }
  [[nodiscard]] nlohmann::json parameters() const override;
  [[nodiscard]] std::size_t domain_size() const { return ete_.front().size(); }

 private:
  std::vector<TableMap> cot_;
  std::vector<TableMap> ete_;
};

/// h_f(x) = (f(x), id of f): the CoT names the hypothesis outright.
class FullyInformativeClass final : public HypothesisClass {
 public:
  explicit FullyInformativeClass(std::vector<TableMap> base);

  [[nodiscard]] std::uint64_t size() const override { return base_.size(); }
  [[nodiscard]] std::unique_ptr<CotHypothesis> hypothesis(HypothesisId id) const override;
  [[nodiscard]] std::string kind() const override { return "fully_informative"; }
  [[nodiscard]] nlohmann::json parameters() const override;
  [[nodiscard]] std::size_t domain_size() const { return base_.front().size(); }

 private:
  std::vector<TableMap> base_;
};

/// Input is a T-tuple (x_1..x_T); CoT = (f(x_1)..f(x_T)) and y = f(x_T).
class IidReplicationClass final : public HypothesisClass {
 public:
  IidReplicationClass(std::vector<TableMap> base, std::size_t replication);

  [[nodiscard]] std::uint64_t size() const override { return base_.size(); }
  [[nodiscard]] std::unique_ptr<CotHypothesis> hypothesis(HypothesisId id) const override;
  [[nodiscard]] std::string kind() const override { return "iid"; }
  [[nodiscard]] nlohmann::json parameters() const override;
  [[nodiscard]] std::size_t domain_size() const { return base_.front().size(); }
  [[nodiscard]] std::size_t replication() const { return replication_; }

 private:
  std::vector<TableMap> base_;
  std::size_t replication_;
};

ProductClass build_product(std::vector<TableMap> cot_part, std::vector<TableMap> ete_part);
FullyInformativeClass build_fully_informative(std::vector<TableMap> base);
IidReplicationClass build_iid(std::vector<TableMap> base, std::size_t replication);

}  // namespace cotlearn
