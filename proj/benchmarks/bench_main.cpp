#include <benchmark/benchmark.h>

#include <random>

#include "cotlearn/cotinfo.hpp"
#include "cotlearn/dfa.hpp"
#include "cotlearn/linthresh.hpp"
#include "cotlearn/rules.hpp"

using namespace cotlearn;

namespace {

void BM_DfaAgreementRowTrie(benchmark::State& state) {
  const DfaClass cls(DfaSpec{4, 2, 0, {3}, std::nullopt});
  const auto d = FiniteDistribution::uniform(2, static_cast<std::size_t>(state.range(0)));
  const ReferenceBehavior ref(figure4_target(), d);
  std::mt19937_64 rng(1);
  AgreementRow row;
  for (auto _ : state) {
    cls.agreement_row(cls.decode(rng() % cls.size()), ref, row);
    benchmark::DoNotOptimize(row);
  }
}
BENCHMARK(BM_DfaAgreementRowTrie)->Arg(6)->Arg(10);

void BM_DfaAgreementRowGeneric(benchmark::State& state) {
  const DfaClass cls(DfaSpec{4, 2, 0, {3}, std::nullopt});
  const auto d = FiniteDistribution::uniform(2, static_cast<std::size_t>(state.range(0)));
  const ReferenceBehavior ref(figure4_target(), d);
  std::mt19937_64 rng(1);
  AgreementRow row;
  for (auto _ : state) {
    generic_agreement_row(cls.decode(rng() % cls.size()), ref, row);
    benchmark::DoNotOptimize(row);
  }
}
BENCHMARK(BM_DfaAgreementRowGeneric)->Arg(6)->Arg(10);

void BM_LinThreshAgreementRow(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const LinThreshClass cls(LinThreshSpec{8, 16, n});
  const auto d = FiniteDistribution::uniform(2, n);
  const ReferenceBehavior ref(cls.decode(3519), d);
  std::mt19937_64 rng(2);
  AgreementRow row;
  for (auto _ : state) {
    cls.agreement_row(cls.decode(rng() % cls.size()), ref, row);
    benchmark::DoNotOptimize(row);
  }
}
BENCHMARK(BM_LinThreshAgreementRow)->Arg(8)->Arg(12);

void BM_InfoCurveDfa(benchmark::State& state) {
  const DfaClass cls(DfaSpec{4, 2, 0, {3}, std::nullopt});
  const auto d = FiniteDistribution::uniform(2, static_cast<std::size_t>(state.range(0)));
  const auto hstar = figure4_target();
  for (auto _ : state) benchmark::DoNotOptimize(info_curve(hstar, cls, d, ExactOptions{kDefaultExactBudget, 1}));
}
BENCHMARK(BM_InfoCurveDfa)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_LearningTableConsistency(benchmark::State& state) {
  const DfaClass cls(DfaSpec{4, 2, 0, {3}, std::nullopt});
  const auto d = FiniteDistribution::uniform(2, 8);
  const ReferenceBehavior ref(figure4_target(), d);
  const LearningTable table(cls, ref, 1);
  std::mt19937_64 rng(3);
  IndexedSample sample;
  sample.cot.resize(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (auto& i : sample.cot) i = rng() % d.size();
    benchmark::DoNotOptimize(table.consistency_set(sample, SupervisionMode::kCoT));
  }
}
BENCHMARK(BM_LearningTableConsistency)->Arg(4)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
