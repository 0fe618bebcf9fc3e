#include "cotlearn/dfa.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace cotlearn {

void DfaSpec::validate() const {
  if (num_states == 0) throw PreconditionError("DFA needs at least one state");
  if (alphabet_size == 0) throw PreconditionError("DFA needs a non-empty alphabet");
  if (init >= num_states) throw PreconditionError("DFA init state " + std::to_string(init) + " out of range");
  for (StateId s : accept) {
    if (s >= num_states) throw PreconditionError("DFA accept state " + std::to_string(s) + " out of range");
  }
}

bool DfaSpec::is_accept(StateId s) const { return std::find(accept.begin(), accept.end(), s) != accept.end(); }

DfaHypothesis::DfaHypothesis(DfaSpec spec, std::vector<StateId> table, HypothesisId id)
    : spec_(std::move(spec)), table_(std::move(table)), id_(id) {
  spec_.validate();
  std::sort(spec_.accept.begin(), spec_.accept.end());
  spec_.accept.erase(std::unique(spec_.accept.begin(), spec_.accept.end()), spec_.accept.end());
  if (table_.size() != std::size_t{spec_.num_states} * spec_.alphabet_size) {
    throw PreconditionError("DFA table has " + std::to_string(table_.size()) + " entries, expected " +
                            std::to_string(std::size_t{spec_.num_states} * spec_.alphabet_size));
  }
  for (StateId s : table_) {
    if (s >= spec_.num_states) throw PreconditionError("DFA table entry " + std::to_string(s) + " is not a state");
  }
  accepting_.assign(spec_.num_states, 0);
  for (StateId s : spec_.accept) accepting_[s] = 1;
}

void DfaHypothesis::eval_into(std::span<const Symbol> x, CotOutput& out) const {
  const std::size_t keep = spec_.cot_length(x.size());
  out.z.resize(keep);
  StateId s = spec_.init;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (x[t] >= spec_.alphabet_size) {
      throw DomainError("symbol " + std::to_string(x[t]) + " outside DFA alphabet of size " +
                        std::to_string(spec_.alphabet_size));
    }
    s = step(s, x[t]);
    if (t < keep) out.z[t] = s;
  }
  out.y = accepting_[s];
}

DfaHypothesis DfaHypothesis::with_detail(std::optional<std::size_t> detail) const {
  DfaSpec spec = spec_;
  spec.detail = detail;
  return DfaHypothesis(std::move(spec), table_, id_);
}

nlohmann::json DfaHypothesis::to_json() const {
  return {{"num_states", spec_.num_states},
          {"alphabet_size", spec_.alphabet_size},
          {"init", spec_.init},
          {"accept", spec_.accept},
          {"detail", spec_.detail ? nlohmann::json(*spec_.detail) : nlohmann::json("full")},
          {"table", table_}};
}

DfaHypothesis DfaHypothesis::from_json(const nlohmann::json& j) {
  DfaSpec spec;
  spec.num_states = j.at("num_states").get<std::uint32_t>();
  spec.alphabet_size = j.at("alphabet_size").get<std::uint32_t>();
  spec.init = j.at("init").get<StateId>();
  spec.accept = j.at("accept").get<std::vector<StateId>>();
  if (j.contains("detail") && !j["detail"].is_string()) spec.detail = j["detail"].get<std::size_t>();
  return DfaHypothesis(std::move(spec), j.at("table").get<std::vector<StateId>>());
}

DfaClass::DfaClass(DfaSpec spec) : spec_(std::move(spec)), size_(1) {
  spec_.validate();
  std::sort(spec_.accept.begin(), spec_.accept.end());
  spec_.accept.erase(std::unique(spec_.accept.begin(), spec_.accept.end()), spec_.accept.end());
  const std::uint64_t entries = std::uint64_t{spec_.num_states} * spec_.alphabet_size;
  for (std::uint64_t i = 0; i < entries; ++i) {
    if (size_ > std::numeric_limits<std::uint64_t>::max() / spec_.num_states) {
      throw SizeError("DFA class size " + std::to_string(spec_.num_states) + "^" + std::to_string(entries) +
                      " does not fit in 64 bits");
    }
    size_ *= spec_.num_states;
  }
}

DfaHypothesis DfaClass::decode(HypothesisId id) const {
  check_id(id);
  std::vector<StateId> table(std::size_t{spec_.num_states} * spec_.alphabet_size);
  HypothesisId rest = id;
  for (std::size_t k = table.size(); k-- > 0;) {
    table[k] = static_cast<StateId>(rest % spec_.num_states);
    rest /= spec_.num_states;
  }
  return DfaHypothesis(spec_, std::move(table), id);
}

HypothesisId DfaClass::encode(std::span<const StateId> table) const {
  if (table.size() != std::size_t{spec_.num_states} * spec_.alphabet_size) {
    throw PreconditionError("DFA table size does not match the class");
  }
  HypothesisId id = 0;
  for (StateId s : table) {
    if (s >= spec_.num_states) throw PreconditionError("DFA table entry is not a state");
    id = id * spec_.num_states + s;
  }
  return id;
}

std::unique_ptr<CotHypothesis> DfaClass::hypothesis(HypothesisId id) const {
  return std::make_unique<DfaHypothesis>(decode(id));
}

nlohmann::json DfaClass::parameters() const {
  nlohmann::json j = {{"num_states", spec_.num_states},
                      {"alphabet_size", spec_.alphabet_size},
                      {"init", spec_.init},
                      {"accept", spec_.accept}};
  if (spec_.detail) {
    j["detail"] = *spec_.detail;
  } else {
    j["detail"] = "full";
  }
  return j;
}

namespace {

// Walks the prefix trie of alphabet^n depth-first, carrying both automata's
// states. Leaf order equals the uniform distribution's index order.
struct TrieWalk {
  const DfaHypothesis& h;
  const DfaHypothesis& ref;
  std::size_t n;
  std::size_t keep;
  std::uint32_t a;
  AgreementRow& row;
  std::size_t leaf = 0;

  void run(std::size_t depth, StateId sh, StateId sr, bool cot_same) {
    if (depth == n) {
      const bool yh = h.accepts(sh);
      const bool yr = ref.accepts(sr);
      if (yh == yr) {
        row.ete.set(leaf);
        if (cot_same) row.joint.set(leaf);
      }
      ++leaf;
      return;
    }
    for (Symbol s = 0; s < a; ++s) {
      const StateId nh = h.step(sh, s);
      const StateId nr = ref.step(sr, s);
      run(depth + 1, nh, nr, cot_same && (depth >= keep || nh == nr));
    }
  }
};

}  // namespace

void DfaClass::agreement_row(const CotHypothesis& h, const ReferenceBehavior& ref, AgreementRow& row) const {
  const auto* dh = dynamic_cast<const DfaHypothesis*>(&h);
  const auto* dr = dynamic_cast<const DfaHypothesis*>(&ref.hypothesis());
  const auto& d = ref.distribution();
  const bool fast = dh && dr && d.is_uniform() && d.alphabet_size() <= spec_.alphabet_size &&
                    d.alphabet_size() <= dr->spec().alphabet_size && dh->spec().detail == dr->spec().detail;
  if (!fast) {
    generic_agreement_row(h, ref, row);
    return;
  }
  row.ete.assign(d.size());
  row.joint.assign(d.size());
  TrieWalk walk{*dh, *dr, d.length(), dh->spec().cot_length(d.length()), d.alphabet_size(), row};
  walk.run(0, dh->spec().init, dr->spec().init, true);
}

DfaHypothesis figure4_target(std::optional<std::size_t> detail) {
  DfaSpec spec{4, 2, 0, {3}, detail};
  // Row-major: (state, symbol) -> next.
  std::vector<StateId> table = {1, 3, 0, 3, 3, 1, 3, 2};
  DfaClass cls(spec);
  const HypothesisId id = cls.encode(table);
  return DfaHypothesis(std::move(spec), std::move(table), id);
}

DfaHypothesis shuffle_ideal_dfa(const InputSeq& u, std::uint32_t alphabet_size) {
  if (u.empty()) throw PreconditionError("shuffle ideal generator must be non-empty");
  const auto k = static_cast<std::uint32_t>(u.size());
  DfaSpec spec{k + 1, alphabet_size, 0, {k}, std::nullopt};
  std::vector<StateId> table(std::size_t{k + 1} * alphabet_size);
  for (StateId s = 0; s <= k; ++s) {
    for (Symbol a = 0; a < alphabet_size; ++a) {
      if (s < k && u[s] >= alphabet_size) throw PreconditionError("shuffle ideal generator symbol outside alphabet");
      table[s * alphabet_size + a] = (s < k && a == u[s]) ? s + 1 : s;
    }
  }
  return DfaHypothesis(std::move(spec), std::move(table));
}

double connectivity_bound(const DfaHypothesis& hstar, std::size_t ell) {
  const auto& spec = hstar.spec();
  constexpr auto unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> depth(spec.num_states, unseen);
  std::deque<StateId> queue{spec.init};
  depth[spec.init] = 0;
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (Symbol a = 0; a < spec.alphabet_size; ++a) {
      const StateId t = hstar.step(s, a);
      if (depth[t] == unseen) {
        depth[t] = depth[s] + 1;
        queue.push_back(t);
      }
    }
  }
  for (StateId s = 0; s < spec.num_states; ++s) {
    if (depth[s] != unseen && depth[s] > ell) {
      throw PreconditionError("state " + std::to_string(s) + " is first reached after " + std::to_string(depth[s]) +
                              " steps, more than ell = " + std::to_string(ell));
    }
  }
  return std::pow(static_cast<double>(spec.alphabet_size), -static_cast<double>(ell + 1));
}

}  // namespace cotlearn
