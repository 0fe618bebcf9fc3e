#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cotlearn/cotinfo.hpp"
#include "cotlearn/dfa.hpp"
#include "cotlearn/synthetic.hpp"

using namespace cotlearn;

namespace {

DfaHypothesis figure4_redirected() {
  const DfaHypothesis f = figure4_target();
  std::vector<StateId> t(f.table().begin(), f.table().end());
  t[1] = 2;  // delta(0,1)
  return DfaHypothesis(f.spec(), t);
}

Breakpoint bp(double eps, double info, HypothesisId id) { return {eps, ExtReal(info), id, eps}; }

}  // namespace

TEST(PairStatsTest, Identity) {
  const auto f = figure4_target();
  const auto s = pair_stats(f, f, FiniteDistribution::uniform(2, 5));
  EXPECT_EQ(s.d_ete, 0.0);
  EXPECT_EQ(s.joint_agreement, 1.0);
  EXPECT_EQ(s.rel_info, ExtReal(0.0));
}

// Frozen from oracle_fixtures (all 8 strings of length 3).
TEST(PairStatsTest, FourStateRedirectedPair) {
  const auto s = pair_stats(figure4_target(), figure4_redirected(), FiniteDistribution::uniform(2, 3));
  EXPECT_EQ(s.d_ete, 0.375);
  EXPECT_EQ(s.joint_agreement, 0.375);
  EXPECT_EQ(s.rel_info.value(), 0.98082925301172619);
}

TEST(PairStatsTest, BudgetIsEnforced) {
  const DfaClass cls(DfaSpec{4, 2, 0, {3}, std::nullopt});
  ExactOptions opts;
  opts.budget = 1000;
  try {
    (void)pairwise_stats(figure4_target(), cls, FiniteDistribution::uniform(2, 4), opts);
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_NE(std::string(e.what()).find("Monte Carlo"), std::string::npos);
  }
}

TEST(InfoCurveTest, SingletonClassIsInfinite) {
  const auto cls = build_product({{0, 1}}, {{1, 0}});
  const InfoCurve curve = info_curve(*cls.hypothesis(0), cls, FiniteDistribution::uniform(2, 1));
  EXPECT_TRUE(curve.breakpoints.empty());
  EXPECT_FALSE(curve.epsilon_star.has_value());
  EXPECT_TRUE(curve.evaluate(0.0).is_inf());
  EXPECT_TRUE(curve.ratio_at_zero().is_inf());
  std::ostringstream os;
  write_info_curve_csv(os, curve);
  EXPECT_EQ(os.str(), "epsilon,info,ratio_to_eps_plus\n0,inf,inf\n");
}

TEST(InfoCurveTest, StrictInequalityAtBreakpoints) {
  std::vector<PairStats> pairs = {
      {0, 0.0, 1.0, ExtReal(0.0)},
      {1, 0.25, 0.5, ExtReal(std::log(2.0))},
      {2, 0.5, 0.25, ExtReal(std::log(4.0))},
      {3, 0.5, 0.5, ExtReal(std::log(2.0))},
      {4, 0.75, 0.125, ExtReal(std::log(8.0))},
  };
  const InfoCurve c = curve_from_pairs(pairs);
  ASSERT_EQ(c.breakpoints.size(), 3U);
  EXPECT_EQ(c.epsilon_star, 0.25);
  // Suffix minimum: the d=0.5 level keeps log 2 from id 3 (lowest id among ties is 1 for the first level).
  EXPECT_EQ(c.breakpoints[0].info.value(), std::log(2.0));
  EXPECT_EQ(c.breakpoints[0].minimizer, 1U);
  EXPECT_EQ(c.breakpoints[1].info.value(), std::log(2.0));
  EXPECT_EQ(c.breakpoints[1].minimizer, 3U);
  EXPECT_EQ(c.breakpoints[2].info.value(), std::log(8.0));
  EXPECT_EQ(c.evaluate(0.0).value(), std::log(2.0));
  EXPECT_EQ(c.evaluate(0.25).value(), std::log(2.0));  // Delta(0.25) = {2, 3, 4}
  EXPECT_EQ(c.evaluate(0.5).value(), std::log(8.0));   // d = 0.5 no longer exceeds eps
  EXPECT_TRUE(c.evaluate(0.75).is_inf());
  EXPECT_THROW((void)c.evaluate(-0.1), PreconditionError);

  const auto rows = c.rows();
  ASSERT_EQ(rows.size(), 4U);
  EXPECT_EQ(rows[0].epsilon, 0.0);
  EXPECT_EQ(rows[0].ratio.value(), std::log(2.0) / 0.25);
  EXPECT_EQ(rows[2].epsilon, 0.5);
  EXPECT_EQ(rows[2].ratio.value(), std::log(8.0) / 0.5);
  EXPECT_TRUE(rows[3].info.is_inf());
}

TEST(InfoCurveTest, RatioClipping) {
  EXPECT_EQ(ratio_to_eps_plus(ExtReal(1.0), 0.0, 0.25).value(), 4.0);
  EXPECT_EQ(ratio_to_eps_plus(ExtReal(1.0), 0.5, 0.25).value(), 2.0);
  EXPECT_TRUE(ratio_to_eps_plus(ExtReal::infinity(), 0.5, 0.25).is_inf());
}

TEST(InfoCurveTest, CsvSchemas) {
  std::vector<PairStats> pairs = {{0, 0.0, 1.0, ExtReal(0.0)}, {1, 0.5, 0.0, ExtReal::infinity()}};
  std::ostringstream p;
  write_pairwise_csv(p, pairs);
  EXPECT_EQ(p.str(), "hypothesis_id,d_ete,joint_agreement,rel_info\n0,0,1,0\n1,0.5,0,inf\n");
  std::ostringstream c;
  write_info_curve_csv(c, curve_from_pairs(pairs));
  EXPECT_EQ(c.str(), "epsilon,info,ratio_to_eps_plus\n0,inf,inf\n0.5,inf,inf\n");
}

TEST(InfoCurveTest, PairwiseFastPathMatchesPairStats) {
  const DfaClass cls(DfaSpec{3, 2, 0, {2}, std::nullopt});
  const auto d = FiniteDistribution::uniform(2, 6);
  const auto hstar = cls.decode(300);
  const auto pairs = pairwise_stats(hstar, cls, d);
  for (HypothesisId id = 0; id < cls.size(); id += 13) {
    const auto s = pair_stats(hstar, cls.decode(id), d);
    EXPECT_EQ(pairs[id].d_ete, s.d_ete);
    EXPECT_EQ(pairs[id].joint_agreement, s.joint_agreement);
  }
}

TEST(InfoCurveTest, WorkerCountDoesNotChangeResult) {
  const DfaClass cls(DfaSpec{3, 3, 0, {2}, std::nullopt});
  const auto d = FiniteDistribution::uniform(3, 4);
  const auto hstar = cls.decode(1234);
  std::ostringstream a;
  std::ostringstream b;
  write_pairwise_csv(a, pairwise_stats(hstar, cls, d, ExactOptions{kDefaultExactBudget, 1}));
  write_pairwise_csv(b, pairwise_stats(hstar, cls, d, ExactOptions{kDefaultExactBudget, 8}));
  EXPECT_EQ(a.str(), b.str());
}

TEST(MonteCarloTest, IdentityEstimatesZero) {
  const auto f = figure4_target();
  const auto s = monte_carlo_pair_stats(f, f, UniformSequenceSampler(2, 12), 500, 1);
  EXPECT_EQ(s.rel_info, ExtReal(0.0));
  EXPECT_FALSE(s.censored);
}

TEST(MonteCarloTest, WithinFourSigmaOfExact) {
  const auto d = FiniteDistribution::uniform(2, 3);
  const auto exact = pair_stats(figure4_target(), figure4_redirected(), d);
  const auto mc = monte_carlo_pair_stats(figure4_target(), figure4_redirected(), DistributionSampler(d), 100000, 99);
  EXPECT_NEAR(mc.d_ete, exact.d_ete, 4 * mc.d_ete_se);
  EXPECT_NEAR(mc.joint_agreement, exact.joint_agreement, 4 * mc.joint_agreement_se);
  EXPECT_NEAR(mc.rel_info.value(), exact.rel_info.value(), 4 * mc.rel_info_se.value());
}

TEST(MonteCarloTest, ZeroCountIsCensored) {
  const auto cls = build_fully_informative({{0, 1}, {1, 0}});
  const auto s = monte_carlo_pair_stats(*cls.hypothesis(0), *cls.hypothesis(1), UniformSequenceSampler(2, 1), 100, 5);
  EXPECT_TRUE(s.rel_info.is_inf());
  EXPECT_TRUE(s.censored);
  EXPECT_DOUBLE_EQ(s.censor_level, std::log(100.0));
}

TEST(MonteCarloTest, SeededCurveIsReproducible) {
  const DfaClass cls(DfaSpec{3, 2, 0, {2}, std::nullopt});
  const auto hstar = cls.decode(77);
  const UniformSequenceSampler s(2, 20);
  const auto a = monte_carlo_info_curve(hstar, cls, s, 2000, 3);
  const auto b = monte_carlo_info_curve(hstar, cls, s, 2000, 3, ExactOptions{kDefaultExactBudget, 4});
  ASSERT_EQ(a.pairs.size(), b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    EXPECT_EQ(a.pairs[i].d_ete, b.pairs[i].d_ete);
    EXPECT_EQ(a.pairs[i].joint_agreement, b.pairs[i].joint_agreement);
  }
}

TEST(GammaTest, SingletonIsEmpty) {
  const auto cls = build_product({{0, 1}}, {{1, 0}});
  const auto g = gamma_of_epsilon(*cls.hypothesis(0), cls, FiniteDistribution::uniform(2, 1), 0.0);
  EXPECT_TRUE(g.empty);
  EXPECT_EQ(g.gamma, 1.0);
}

TEST(GammaTest, IdentityOnDfaClass) {
  const DfaClass cls(DfaSpec{3, 2, 0, {2}, std::nullopt});
  const auto d = FiniteDistribution::uniform(2, 5);
  const auto hstar = cls.decode(500);
  const InfoCurve curve = info_curve(hstar, cls, d);
  const auto profile = risk_profile(hstar, cls, d);
  for (const auto& row : curve.rows()) {
    const auto g = gamma_of_epsilon(profile, row.epsilon);
    if (row.info.is_inf()) {
      EXPECT_TRUE(g.empty || g.gamma == 1.0);
      continue;
    }
    EXPECT_NEAR(-std::log(1.0 - g.gamma), row.info.value(), 1e-12);
  }
}

namespace {

// Three output maps over {0,1,2,3} with one shared CoT map; hstar = member 0.
ProductClass three_member_class() { return build_product({{0, 1, 2, 3}}, {{0, 0, 1, 1}, {0, 1, 1, 1}, {1, 1, 0, 0}}); }

JointDistribution labelled_by(const CotHypothesis& h, const std::vector<double>& ps) {
  std::vector<JointPoint> pts;
  for (Symbol a = 0; a < 4; ++a) {
    const auto o = h.eval(InputSeq{a});
    pts.push_back({{a}, o.y, o.z, ps[a]});
  }
  return JointDistribution(pts);
}

}  // namespace

TEST(AgnosticTest, RealizableReducesToNonStrictGamma) {
  const auto cls = three_member_class();
  const std::vector<double> ps = {0.1, 0.2, 0.3, 0.4};
  const auto hstar = cls.hypothesis(0);
  const auto jd = labelled_by(*hstar, ps);
  const auto d = FiniteDistribution::from_support({{0}, {1}, {2}, {3}}, ps);
  const auto profile = risk_profile(*hstar, cls, d);
  for (double eps : {0.0, 0.1, 0.2, 0.5, 0.9, 1.0, 1.1}) {
    ExtReal want = ExtReal::infinity();
    for (const auto& r : profile) {
      if (r.ete >= eps) want = std::min(want, ExtReal(r.cot));
    }
    EXPECT_EQ(agnostic_info(cls, jd, eps), want) << "eps " << eps;
  }
  // Member 1 differs only on x=1 (mass 0.2): with >= it is still in the set at eps = 0.2.
  EXPECT_DOUBLE_EQ(agnostic_info(cls, jd, 0.2).value(), 0.2);
  EXPECT_TRUE(agnostic_info(cls, jd, 1.01).is_inf());
}

TEST(AgnosticTest, AntiRealizableCotIsUninformative) {
  const auto cls = three_member_class();
  std::vector<JointPoint> pts;
  const auto h0 = cls.hypothesis(0);
  for (Symbol a = 0; a < 4; ++a) pts.push_back({{a}, h0->eval(InputSeq{a}).y, {99}, 0.25});
  const JointDistribution jd(pts);
  for (double eps : {0.0, 0.25, 0.5, 1.0}) EXPECT_EQ(agnostic_info(cls, jd, eps), ExtReal(0.0)) << eps;
}

TEST(TransferTest, SameDistributionReproducesPlainCurve) {
  const DfaClass cls(DfaSpec{3, 2, 0, {2}, std::nullopt});
  const auto d = FiniteDistribution::uniform(2, 4);
  const auto hstar = cls.decode(321);
  const InfoCurve a = info_curve(hstar, cls, d);
  const InfoCurve b = transfer_info_curve(hstar, cls, d, d);
  ASSERT_EQ(a.breakpoints.size(), b.breakpoints.size());
  for (std::size_t i = 0; i < a.breakpoints.size(); ++i) {
    EXPECT_EQ(a.breakpoints[i].epsilon, b.breakpoints[i].epsilon);
    EXPECT_EQ(a.breakpoints[i].info, b.breakpoints[i].info);
  }
}

TEST(TransferTest, DisjointSupportGivesZeroInformation) {
  const auto cls = build_product({{0, 0}}, {{0, 0}, {0, 1}});
  const auto train = FiniteDistribution::from_support({{0}}, {1.0});
  const auto test = FiniteDistribution::from_support({{1}}, {1.0});
  const InfoCurve c = transfer_info_curve(*cls.hypothesis(0), cls, train, test);
  ASSERT_EQ(c.breakpoints.size(), 1U);
  EXPECT_EQ(c.breakpoints[0].epsilon, 1.0);
  EXPECT_EQ(c.evaluate(0.0), ExtReal(0.0));
  EXPECT_EQ(c.evaluate(0.5), ExtReal(0.0));
}

TEST(CurveProperty, BreakpointHelperSanity) {
  // A hand-built curve behaves like one built from pairs.
  InfoCurve c;
  c.breakpoints = {bp(0.1, 0.5, 1), bp(0.3, 0.9, 2)};
  c.epsilon_star = 0.1;
  c.info_at_zero_plus = ExtReal(0.5);
  EXPECT_EQ(c.evaluate(0.05).value(), 0.5);
  EXPECT_EQ(c.evaluate(0.1).value(), 0.9);
  EXPECT_TRUE(c.evaluate(0.3).is_inf());
  EXPECT_EQ(c.ratio_at_zero().value(), 5.0);
}
