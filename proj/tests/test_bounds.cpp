#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cotlearn/bounds.hpp"
#include "cotlearn/synthetic.hpp"

using namespace cotlearn;

namespace {

const double kE1 = std::exp(-1.0);

InfoCurve two_step_curve() {
  const std::vector<PairStats> pairs = {
      {0, 0.0, 1.0, ExtReal(0.0)},
      {1, 0.2, std::exp(-0.5), ExtReal(0.5)},
      {2, 0.6, std::exp(-2.0), ExtReal(2.0)},
  };
  return curve_from_pairs(pairs);
}

// Four output maps over a 4-point domain with a shared constant CoT.
// Distances: d01 = d12 = 1/4, d02 = d23 = 1/2, d13 = 3/4, d03 = 1.
ProductClass four_maps() {
  return build_product({{0, 0, 0, 0}}, {{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 1, 1, 1}});
}

}  // namespace

TEST(RealizableUpperTest, FiniteClass) {
  const auto b = realizable_upper(std::log(2.0), ExtReal(std::log(2.0)), 0.5, RealizableVariant::kFinite);
  EXPECT_DOUBLE_EQ(b.value, 2.0);
  EXPECT_TRUE(b.flag.empty());
  EXPECT_DOUBLE_EQ(realizable_upper(3.0, ExtReal(1.5), 1.0, RealizableVariant::kFinite).value, 2.0);
}

TEST(RealizableUpperTest, DegenerateInformation) {
  const auto inf = realizable_upper(5.0, ExtReal::infinity(), 0.1, RealizableVariant::kFinite);
  EXPECT_EQ(inf.value, 1.0);
  EXPECT_FALSE(inf.flag.empty());
  const auto zero = realizable_upper(5.0, ExtReal(0.0), 0.1, RealizableVariant::kFinite);
  EXPECT_TRUE(std::isinf(zero.value));
  EXPECT_FALSE(zero.flag.empty());
  EXPECT_THROW(realizable_upper(5.0, ExtReal(1.0), 0.0, RealizableVariant::kFinite), PreconditionError);
  EXPECT_THROW(realizable_upper(5.0, ExtReal(1.0), 1.5, RealizableVariant::kFinite), PreconditionError);
}

TEST(RealizableUpperTest, GeneralVariant) {
  // (1/I + 1)(VC log(1/I + 1) + log 1/delta) with VC = 1, I = 1, delta = 1.
  EXPECT_DOUBLE_EQ(realizable_upper(1.0, ExtReal(1.0), 1.0, RealizableVariant::kGeneral).value, 2.0 * std::log(2.0));
}

TEST(AgnosticUpperTest, Examples) {
  EXPECT_DOUBLE_EQ(agnostic_upper(1.0, ExtReal(1.0), kE1).value, 2.0);
  EXPECT_DOUBLE_EQ(agnostic_upper(3.0, ExtReal(0.5), kE1).value, 16.0);
  const auto zero = agnostic_upper(3.0, ExtReal(0.0), kE1);
  EXPECT_TRUE(std::isinf(zero.value));
  EXPECT_FALSE(zero.flag.empty());
}

TEST(TwoPointLowerTest, Examples) {
  EXPECT_NEAR(two_point_lower(ExtReal(0.5), 0.1).value, std::log(10.0) / 0.5, 1e-12);
  EXPECT_NEAR(two_point_lower(ExtReal(0.5), 0.1).value, 4.6052, 1e-4);
  EXPECT_EQ(two_point_lower(ExtReal::infinity(), 0.1).value, 0.0);
}

TEST(ExpectedErrorLowerTest, StepCurve) {
  const InfoCurve c = two_step_curve();
  EXPECT_DOUBLE_EQ(expected_error_lower(c, 0), 0.3);
  EXPECT_DOUBLE_EQ(expected_error_lower(c, 1), 0.5 * std::max(0.2 * std::exp(-0.5), 0.6 * std::exp(-2.0)));
  EXPECT_DOUBLE_EQ(expected_error_lower(c, 10), 0.5 * 0.2 * std::exp(-5.0));
}

TEST(ExpectedErrorLowerTest, InfiniteCurveIsZeroOnceSampled) {
  const std::vector<PairStats> pairs = {{0, 0.0, 1.0, ExtReal(0.0)}, {1, 0.4, 0.0, ExtReal::infinity()}};
  const InfoCurve c = curve_from_pairs(pairs);
  EXPECT_DOUBLE_EQ(expected_error_lower(c, 0), 0.2);
  EXPECT_EQ(expected_error_lower(c, 1), 0.0);
}

TEST(ChannelTest, CapacityFactor) {
  EXPECT_EQ(channel_capacity_factor({1.0, 2.0}).value(), 0.0);
  EXPECT_DOUBLE_EQ(channel_capacity_factor({0.5, 2.0}).value(), 0.5 * std::log(3.0));
  EXPECT_TRUE(channel_capacity_factor({0.0, 2.0}).is_inf());
  EXPECT_NEAR(channel_capacity_factor({0.01, 1000.0}).value(), 11.39, 0.01);
  EXPECT_THROW(channel_capacity_factor({1.5, 2.0}), PreconditionError);
  EXPECT_THROW(channel_capacity_factor({0.5, 1.0}), PreconditionError);
}

TEST(ChannelProperty, DecreasingInErrorRate) {
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 1000; ++k) {
    const double c = channel_capacity_factor({k / 1000.0, 50.0}).value();
    EXPECT_LT(c, prev) << "e=" << k / 1000.0;
    prev = c;
  }
}

TEST(PackingTest, HandToy) {
  const auto cls = four_maps();
  const auto d = FiniteDistribution::uniform(4, 1);
  EXPECT_EQ(greedy_packing(cls, std::nullopt, d, 0.5).members, (std::vector<HypothesisId>{0, 2, 3}));
  EXPECT_EQ(greedy_packing(cls, HypothesisId{1}, d, 0.5).members, (std::vector<HypothesisId>{1, 3}));
  EXPECT_EQ(greedy_packing(cls, std::nullopt, d, 0.0).members, (std::vector<HypothesisId>{0, 1, 2, 3}));
  EXPECT_EQ(greedy_packing(cls, std::nullopt, d, 1.5).members, (std::vector<HypothesisId>{0}));
  EXPECT_THROW(greedy_packing(cls, HypothesisId{9}, d, 0.5), PreconditionError);
}

TEST(PackingProperty, MembersAreSeparated) {
  const auto cls = build_product({{0, 1, 0}}, {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 0, 1}, {1, 0, 0}});
  const auto d = FiniteDistribution::from_support({{0}, {1}, {2}}, {0.5, 0.3, 0.2});
  for (double eps : {0.1, 0.25, 0.5, 0.8}) {
    const auto p = greedy_packing(cls, std::nullopt, d, eps);
    for (std::size_t a = 0; a < p.members.size(); ++a) {
      for (std::size_t b = a + 1; b < p.members.size(); ++b) {
        EXPECT_GE(e2e_risk(*cls.hypothesis(p.members[a]), *cls.hypothesis(p.members[b]), d), eps);
      }
    }
    // Maximal: every outsider is within eps of some member.
    for (HypothesisId id = 0; id < cls.size(); ++id) {
      if (std::find(p.members.begin(), p.members.end(), id) != p.members.end()) continue;
      bool close = false;
      for (HypothesisId m : p.members) close |= e2e_risk(*cls.hypothesis(id), *cls.hypothesis(m), d) < eps;
      EXPECT_TRUE(close) << "eps=" << eps << " id=" << id;
    }
  }
}

TEST(FanoTest, SingletonPackingIsVacuous) {
  const auto cls = four_maps();
  const auto d = FiniteDistribution::uniform(4, 1);
  const auto r = fano_lower(cls, d, {0.5, 2.0}, 1.5, PairInfoMode::kMaxPairHalf);
  EXPECT_TRUE(r.vacuous);
  EXPECT_EQ(r.packing_size, 1U);
  EXPECT_EQ(r.m_threshold, 0.0);
  EXPECT_EQ(r.error_probability_bound(0.0), 0.0);
}

TEST(FanoTest, TwoHypothesisProxies) {
  const auto cls = build_product({{0, 0, 0, 0}}, {{0, 0, 0, 0}, {1, 0, 0, 0}});
  const auto d = FiniteDistribution::uniform(4, 1);
  const double info = -std::log(0.75);
  const SymmetricChannel q{0.5, 2.0};
  const double cap = 0.5 * std::log(3.0);

  const auto half = fano_lower(cls, d, q, 0.25, PairInfoMode::kMaxPairHalf);
  EXPECT_EQ(half.packing_size, 2U);
  EXPECT_DOUBLE_EQ(half.upper_proxy.value(), info);
  EXPECT_DOUBLE_EQ(half.lower_proxy.value(), info / 2.0);
  EXPECT_LE(half.lower_proxy, half.uniform_prior_value);
  EXPECT_LE(half.uniform_prior_value, half.upper_proxy);
  EXPECT_DOUBLE_EQ(half.m_threshold, std::log(2.0) / (2.0 * (cap * info / 2.0 + std::log(2.0))));
  EXPECT_EQ(half.error_probability_bound(0.0), 0.0);

  const auto full = fano_lower(cls, d, q, 0.25, PairInfoMode::kMaxEntry);
  EXPECT_EQ(full.proxy_used, full.upper_proxy);
  EXPECT_LT(full.m_threshold, half.m_threshold);
}

TEST(FanoTest, ErrorBoundFormula) {
  const auto cls = four_maps();
  const auto d = FiniteDistribution::uniform(4, 1);
  const auto r = fano_lower(cls, d, {0.1, 4.0}, 0.25, PairInfoMode::kMaxEntry);
  ASSERT_EQ(r.packing_size, 4U);
  ASSERT_FALSE(r.proxy_used.is_inf());
  for (double m : {0.0, 0.5, 2.0}) {
    const double expect =
        std::max(0.0, 1.0 - (m * r.capacity.value() * r.proxy_used.value() + std::log(2.0)) / std::log(4.0));
    EXPECT_DOUBLE_EQ(r.error_probability_bound(m), expect);
  }
}

TEST(MixedUpperTest, Example) {
  EXPECT_DOUBLE_EQ(mixed_upper(std::log(8.0), 2.0, ExtReal(0.3), 0.1, kE1).value, (std::log(8.0) + 1.0) / 0.5);
  EXPECT_DOUBLE_EQ(mixed_upper(std::log(8.0), 0.0, ExtReal(0.3), 0.1, kE1).value,
                   realizable_upper(std::log(8.0), ExtReal(0.3), kE1, RealizableVariant::kFinite).value);
  EXPECT_TRUE(std::isinf(mixed_upper(1.0, 0.0, ExtReal(0.0), 0.1, 0.5).value));
  EXPECT_THROW(mixed_upper(1.0, -1.0, ExtReal(0.3), 0.1, 0.5), PreconditionError);
}

TEST(MdlUpperTest, Examples) {
  EXPECT_DOUBLE_EQ(mdl_upper(1.0, ExtReal(0.5), 0.1).value, std::log(10.0) / 0.5);
  EXPECT_DOUBLE_EQ(mdl_upper(0.25, ExtReal(2.0), kE1).value, (std::log(4.0) + 1.0) / 2.0);
  EXPECT_TRUE(std::isinf(mdl_upper(0.0, ExtReal(1.0), 0.5).value));
  EXPECT_DOUBLE_EQ(mdl_upper_nats(ExtReal(std::log(8.0)), ExtReal(0.3), kE1).value,
                   realizable_upper(std::log(8.0), ExtReal(0.3), kE1, RealizableVariant::kFinite).value);
}

TEST(MdlErrorBoundTest, GeneralisedInverse) {
  const InfoCurve c = two_step_curve();
  // numerator log 1/p + log 1/delta = 1
  EXPECT_EQ(mdl_error_bound(c, 1.0, 1, kE1), 0.2);
  EXPECT_EQ(mdl_error_bound(c, 1.0, 4, kE1), 0.0);
  EXPECT_EQ(mdl_error_bound(c, 1.0, 0, kE1), 0.6);
  EXPECT_EQ(mdl_error_bound(c, 1.0, 2, 1.0), 0.0);
  EXPECT_THROW(mdl_error_bound(c, 0.0, 2, 0.5), PreconditionError);
}

TEST(TvIdentityTest, IdenticalPairIsZero) {
  const auto cls = four_maps();
  const auto d = FiniteDistribution::uniform(4, 1);
  const auto r = tv_distance_identity_check(*cls.hypothesis(2), *cls.hypothesis(2), d, 3);
  EXPECT_EQ(r.tv, 0.0);
  EXPECT_EQ(r.identity_residual, 0.0);
}

TEST(TvIdentityTest, HalfAgreementToy) {
  const auto cls = build_product({{0, 0}}, {{0, 0}, {0, 1}});
  const auto d = FiniteDistribution::uniform(2, 1);
  const auto one = tv_distance_identity_check(*cls.hypothesis(0), *cls.hypothesis(1), d, 1);
  EXPECT_DOUBLE_EQ(one.tv, 0.5);
  const auto two = tv_distance_identity_check(*cls.hypothesis(0), *cls.hypothesis(1), d, 2);
  EXPECT_DOUBLE_EQ(two.tv, 0.75);
  EXPECT_LT(two.identity_residual, 1e-12);
}

TEST(TvIdentityTest, BudgetGuard) {
  const auto cls = four_maps();
  const auto d = FiniteDistribution::uniform(4, 1);
  EXPECT_THROW(tv_distance_identity_check(*cls.hypothesis(0), *cls.hypothesis(3), d, 12, 1000), BudgetError);
}

TEST(BoundsCsvTest, Format) {
  std::ostringstream os;
  write_bounds_csv(os, {{"realizable", {{"epsilon", "0.1"}, {"delta", "0.05"}}, {2.0, ""}},
                        {"agnostic", {}, {std::numeric_limits<double>::infinity(), "CoT supervision uninformative"}}});
  EXPECT_EQ(os.str(),
            "bound_name,params,value,flag\n"
            "realizable,epsilon=0.1;delta=0.05,2,\n"
            "agnostic,,inf,CoT supervision uninformative\n");
}
