#include <gtest/gtest.h>

#include <random>

#include "cotlearn/cotinfo.hpp"
#include "cotlearn/linthresh.hpp"
#include "oracle.hpp"

using namespace cotlearn;

TEST(LinThreshClassTest, Cardinalities) {
  EXPECT_EQ(LinThreshClass(LinThreshSpec{8, 16, 8}).size(), 6561U);
  EXPECT_EQ(LinThreshClass(LinThreshSpec{1, 1, 1}).size(), 3U);
  EXPECT_EQ(LinThreshClass(LinThreshSpec{2, 3, 2}).size(), 9U);
}

TEST(LinThreshClassTest, Base3Ids) {
  const LinThreshClass cls(LinThreshSpec{2, 3, 2});
  const auto mid = cls.decode(4);
  EXPECT_EQ(std::vector<int>(mid.weights().begin(), mid.weights().end()), (std::vector<int>{0, 0}));
  const auto first = cls.decode(0);
  EXPECT_EQ(std::vector<int>(first.weights().begin(), first.weights().end()), (std::vector<int>{-1, -1}));
  // w_0 is the least significant digit.
  const auto one = cls.decode(1);
  EXPECT_EQ(std::vector<int>(one.weights().begin(), one.weights().end()), (std::vector<int>{0, -1}));
  for (HypothesisId id = 0; id < cls.size(); ++id) EXPECT_EQ(cls.encode(cls.decode(id).weights()), id);
  EXPECT_THROW((void)cls.encode(std::vector<int>{2, 0}), PreconditionError);
}

TEST(LinThreshTraceTest, Examples) {
  const LinThreshHypothesis zeros(LinThreshSpec{3, 4, 3}, {0, 0, 0});
  EXPECT_EQ(zeros.eval(InputSeq{1, 0, 1}), (CotOutput{1, {1, 1, 1, 1}}));

  const LinThreshHypothesis neg(LinThreshSpec{3, 2, 3}, {-1, 0, 0});
  EXPECT_EQ(neg.eval(InputSeq{0, 0, 1}).z.front(), 0U);

  // Frozen from oracle_fixtures.
  const LinThreshHypothesis h(LinThreshSpec{2, 3, 2}, {1, -1});
  EXPECT_EQ(eval_trace(h, InputSeq{1, 0}), (CotOutput{1, {0, 1, 1}}));
}

TEST(LinThreshTraceTest, ZeroPaddingForShortInputs) {
  const LinThreshHypothesis h(LinThreshSpec{4, 2, 1}, {0, 0, 0, -1});
  // The fourth lookback reaches before the start and reads 0.
  EXPECT_EQ(h.eval(InputSeq{1}), (CotOutput{1, {1, 1}}));
  EXPECT_EQ(h.eval(InputSeq{}), (CotOutput{1, {1, 1}}));
}

TEST(LinThreshTraceTest, RejectsNonBinaryInput) {
  const LinThreshHypothesis h(LinThreshSpec{2, 1, 2}, {1, 1});
  EXPECT_THROW(h.eval(InputSeq{0, 2}), DomainError);
}

TEST(LinThreshTraceTest, JsonRoundTrip) {
  const LinThreshHypothesis h(LinThreshSpec{3, 5, 7}, {1, 0, -1});
  const auto j = h.to_json();
  EXPECT_EQ(j.at("T"), 5);
  const auto g = LinThreshHypothesis::from_json(j);
  EXPECT_EQ(g.spec(), h.spec());
  EXPECT_EQ(g.eval(InputSeq{1, 1, 0, 1}), h.eval(InputSeq{1, 1, 0, 1}));
}

TEST(LinThreshProperty, MatchesOracleAndOutputIsLastToken) {
  const LinThreshClass cls(LinThreshSpec{4, 6, 6});
  const auto xs = oracle::all_strings(2, 6);
  for (HypothesisId id = 0; id < cls.size(); ++id) {
    const auto h = cls.decode(id);
    const std::vector<int> w(h.weights().begin(), h.weights().end());
    for (const auto& x : xs) {
      const auto out = h.eval(InputSeq(x.begin(), x.end()));
      const auto ref = oracle::run_linthresh(w, 6, x);
      ASSERT_EQ(out.y, ref.y);
      ASSERT_EQ(std::vector<unsigned>(out.z.begin(), out.z.end()), ref.z);
      ASSERT_EQ(out.y, out.z.back());
    }
  }
}

TEST(LinThreshProperty, JointAgreementEqualsCotAgreement) {
  const LinThreshClass cls(LinThreshSpec{4, 5, 6});
  const auto d = FiniteDistribution::uniform(2, 6);
  const auto hstar = cls.decode(17);
  const ReferenceBehavior ref(hstar, d);
  for (HypothesisId id = 0; id < cls.size(); ++id) {
    const auto h = cls.decode(id);
    double cot_only = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (h.eval(d.input_at(i)).z == ref.output(i).z) cot_only += d.probability(i);
    }
    EXPECT_EQ(pair_stats(hstar, h, d).joint_agreement, cot_only);
  }
}

TEST(LinThreshFastPath, MatchesGenericRows) {
  std::mt19937_64 rng(4);
  for (std::uint32_t n : {2U, 6U, 10U}) {
    const LinThreshClass cls(LinThreshSpec{6, 9, n});
    const auto d = FiniteDistribution::uniform(2, n);
    const auto hstar = cls.decode(rng() % cls.size());
    const ReferenceBehavior ref(hstar, d);
    for (int k = 0; k < 60; ++k) {
      const auto h = cls.decode(rng() % cls.size());
      AgreementRow fast;
      AgreementRow slow;
      cls.agreement_row(h, ref, fast);
      generic_agreement_row(h, ref, slow);
      ASSERT_EQ(fast.ete, slow.ete);
      ASSERT_EQ(fast.joint, slow.joint);
    }
  }
}

// Only the last d symbols matter, so the curve is the same for every n >= d.
TEST(LinThreshProperty, CurveStableOnceInputCoversWindow) {
  const LinThreshClass cls(LinThreshSpec{3, 4, 3});
  const auto hstar = cls.decode(5);
  const InfoCurve a = info_curve(hstar, cls, FiniteDistribution::uniform(2, 3));
  const InfoCurve b = info_curve(hstar, cls, FiniteDistribution::uniform(2, 7));
  ASSERT_EQ(a.breakpoints.size(), b.breakpoints.size());
  for (std::size_t i = 0; i < a.breakpoints.size(); ++i) {
    EXPECT_DOUBLE_EQ(a.breakpoints[i].epsilon, b.breakpoints[i].epsilon);
    EXPECT_EQ(a.breakpoints[i].info.is_inf(), b.breakpoints[i].info.is_inf());
    if (!a.breakpoints[i].info.is_inf()) {
      EXPECT_NEAR(a.breakpoints[i].info.value(), b.breakpoints[i].info.value(), 1e-12);
    }
  }
}
