#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cotlearn/harness.hpp"

namespace cotlearn {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("field '" + field + "': " + why);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(where, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) bad(where.empty() ? k : where + "." + k, "unknown key");
  }
}

template <typename T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    bad(field, "has the wrong type (" + j.dump() + ")");
  }
}

std::uint64_t get_count(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    bad(field, "must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

double get_real(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "must be a number");
  return j.get<double>();
}

std::vector<std::uint64_t> parse_grid(const json& j) {
  if (j.is_array()) {
    std::vector<std::uint64_t> grid;
    for (std::size_t i = 0; i < j.size(); ++i) grid.push_back(get_count(j[i], "m_grid[" + std::to_string(i) + "]"));
    if (grid.empty()) bad("m_grid", "must not be empty");
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (grid[i] <= grid[i - 1]) bad("m_grid", "must be strictly increasing");
    }
    return grid;
  }
  only_keys(j, "m_grid", {"geometric"});
  const json& g = j.at("geometric");
  only_keys(g, "m_grid.geometric", {"start", "stop", "ratio"});
  const std::uint64_t start = g.contains("start") ? get_count(g["start"], "m_grid.geometric.start") : 1;
  if (!g.contains("stop")) bad("m_grid.geometric.stop", "is required");
  const std::uint64_t stop = get_count(g["stop"], "m_grid.geometric.stop");
  const double ratio = g.contains("ratio") ? get_real(g["ratio"], "m_grid.geometric.ratio") : std::sqrt(2.0);
  if (!(ratio > 1.0)) bad("m_grid.geometric.ratio", "must exceed 1");
  if (stop < start) bad("m_grid.geometric.stop", "must be at least start");
  return geometric_grid(start, stop, ratio);
}

std::vector<std::size_t> parse_sizes(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(field, "must be a non-empty list");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(static_cast<std::size_t>(get_count(j[i], field + "[" + std::to_string(i) + "]")));
  }
  return out;
}

SweepConfig parse_sweep(const json& j) {
  only_keys(j, "sweep", {"kind", "values", "train_length", "test_lengths"});
  SweepConfig s;
  if (!j.contains("kind")) bad("sweep.kind", "is required");
  const auto kind = get_as<std::string>(j["kind"], "sweep.kind");
  if (kind == "length" || kind == "detail") {
    s.kind = kind == "length" ? SweepKind::kLength : SweepKind::kDetail;
    if (!j.contains("values")) bad("sweep.values", "is required");
    s.values = parse_sizes(j["values"], "sweep.values");
  } else if (kind == "transfer") {
    s.kind = SweepKind::kTransfer;
    if (j.contains("train_length")) s.train_length = get_count(j["train_length"], "sweep.train_length");
    if (!j.contains("test_lengths")) bad("sweep.test_lengths", "is required");
    s.test_lengths = parse_sizes(j["test_lengths"], "sweep.test_lengths");
  } else {
    bad("sweep.kind", "must be length, detail or transfer");
  }
  return s;
}

BoundsConfig parse_bounds(const json& j) {
  only_keys(j, "bounds",
            {"delta", "vc", "gamma_ratio", "channel_error", "channel_outcomes", "epsilons", "m_values", "fano",
             "packing_epsilon"});
  BoundsConfig b;
  if (j.contains("delta")) b.delta = get_real(j["delta"], "bounds.delta");
  if (!(b.delta > 0.0 && b.delta <= 1.0)) bad("bounds.delta", "must lie in (0, 1]");
  if (j.contains("vc")) b.vc = get_real(j["vc"], "bounds.vc");
  if (j.contains("gamma_ratio")) b.gamma_ratio = get_real(j["gamma_ratio"], "bounds.gamma_ratio");
  if (j.contains("channel_error")) b.channel_error = get_real(j["channel_error"], "bounds.channel_error");
  if (!(b.channel_error >= 0.0 && b.channel_error <= 1.0)) bad("bounds.channel_error", "must lie in [0, 1]");
  if (j.contains("channel_outcomes")) b.channel_outcomes = get_real(j["channel_outcomes"], "bounds.channel_outcomes");
  if (!(b.channel_outcomes >= 2.0)) bad("bounds.channel_outcomes", "must be at least 2");
  if (j.contains("epsilons")) {
    b.epsilons.clear();
    for (const auto& e : j["epsilons"]) b.epsilons.push_back(get_real(e, "bounds.epsilons"));
    if (b.epsilons.empty()) bad("bounds.epsilons", "must not be empty");
  }
  if (j.contains("m_values")) {
    b.m_values.clear();
    for (const auto& m : j["m_values"]) b.m_values.push_back(get_count(m, "bounds.m_values"));
  }
  if (j.contains("fano")) b.fano = get_as<bool>(j["fano"], "bounds.fano");
  if (j.contains("packing_epsilon")) b.packing_epsilon = get_real(j["packing_epsilon"], "bounds.packing_epsilon");
  return b;
}

}  // namespace

ExperimentConfig::ExperimentConfig() : m_grid(geometric_grid(1, 32768, std::sqrt(2.0))), target_eps(default_target_eps()) {}

std::vector<double> default_target_eps() {
  return {0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001, 0.0005, 0.0002, 0.0001, 0.0};
}

std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t stop, double ratio) {
  if (!(ratio > 1.0)) throw PreconditionError("geometric grid ratio must exceed 1");
  std::vector<std::uint64_t> grid;
  if (start == 0) {
    grid.push_back(0);
    start = 1;
  }
  for (int k = 0;; ++k) {
    const double v = std::round(static_cast<double>(start) * std::pow(ratio, k));
    if (v > static_cast<double>(stop)) break;
    const auto m = static_cast<std::uint64_t>(v);
    if (grid.empty() || m > grid.back()) grid.push_back(m);
  }
  return grid;
}

ExperimentConfig parse_config(const json& j) {
  only_keys(j, "",
            {"class", "target", "distribution", "rules", "m_grid", "target_eps", "trials", "seed", "mode",
             "mc_samples", "workers", "budget", "out", "prior", "sweep", "bounds"});
  ExperimentConfig cfg;
  if (j.contains("class")) {
    if (!j["class"].is_object() || !j["class"].contains("kind")) bad("class.kind", "is required");
    cfg.class_spec = j["class"];
    if (j["class"].contains("detail") == false && j["class"]["kind"] == "dfa") cfg.class_spec["detail"] = "full";
  }
  if (j.contains("target")) {
    if (!j["target"].is_object() || !j["target"].contains("kind")) bad("target.kind", "is required");
    cfg.target = j["target"];
  }
  if (j.contains("distribution")) {
    if (!j["distribution"].is_object() || !j["distribution"].contains("kind")) bad("distribution.kind", "is required");
    cfg.distribution = j["distribution"];
  }
  if (j.contains("rules")) {
    if (!j["rules"].is_array() || j["rules"].empty()) bad("rules", "must be a non-empty list");
    cfg.rules.clear();
    for (const auto& r : j["rules"]) {
      try {
        cfg.rules.push_back(parse_rule(get_as<std::string>(r, "rules")));
      } catch (const ConfigError& e) {
        bad("rules", e.what());
      }
    }
  }
  if (j.contains("m_grid")) cfg.m_grid = parse_grid(j["m_grid"]);
  if (j.contains("target_eps")) {
    cfg.target_eps.clear();
    for (const auto& e : j["target_eps"]) cfg.target_eps.push_back(get_real(e, "target_eps"));
    if (cfg.target_eps.empty()) bad("target_eps", "must not be empty");
  }
  if (j.contains("trials")) cfg.trials = get_count(j["trials"], "trials");
  if (cfg.trials < 1) bad("trials", "must be at least 1");
  if (j.contains("seed")) cfg.seed = get_count(j["seed"], "seed");
  if (j.contains("mode")) {
    const auto mode = get_as<std::string>(j["mode"], "mode");
    if (mode == "exact") {
      cfg.mode = EstimationMode::kExact;
    } else if (mode == "mc") {
      cfg.mode = EstimationMode::kMonteCarlo;
    } else {
      bad("mode", "must be exact or mc");
    }
  }
  if (j.contains("mc_samples")) cfg.mc_samples = get_count(j["mc_samples"], "mc_samples");
  if (cfg.mc_samples < 1) bad("mc_samples", "must be at least 1");
  if (j.contains("workers")) cfg.workers = static_cast<unsigned>(get_count(j["workers"], "workers"));
  if (j.contains("budget")) cfg.budget = get_count(j["budget"], "budget");
  if (j.contains("out")) cfg.out_dir = get_as<std::string>(j["out"], "out");
  if (j.contains("prior")) cfg.prior = j["prior"];
  if (j.contains("sweep")) cfg.sweep = parse_sweep(j["sweep"]);
  if (j.contains("bounds")) cfg.bounds = parse_bounds(j["bounds"]);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace cotlearn
