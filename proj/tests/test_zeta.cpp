#include <pseudomoments/ehrhart.hpp>
#include <pseudomoments/zeta.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace pseudomoments;
using namespace pseudomoments::zeta;

TEST(DivisorProfile, HandEnumerations)
{
    const auto p23 = divisor_profile(2, 3);
    EXPECT_EQ(p23[4], 1u);  // only 2*2
    EXPECT_EQ(p23[6], 2u);
    EXPECT_EQ(p23[5], 0u);

    const auto p22 = divisor_profile(2, 2);
    EXPECT_EQ(p22.counts, (std::map<std::uint64_t, std::uint64_t>{{1, 1}, {2, 2}, {4, 1}}));

    const auto p15 = divisor_profile(1, 5);
    for (std::uint64_t n = 1; n <= 5; ++n) EXPECT_EQ(p15[n], 1u);
    EXPECT_EQ(p15.counts.size(), 5u);
}

TEST(DivisorProfile, ConservesTuplesAndIgnoresBoundOrder)
{
    for (int k = 1; k <= 3; ++k) {
        for (std::uint64_t x : {1u, 2u, 7u, 12u}) {
            const auto p = divisor_profile(k, x);
            EXPECT_EQ(p.total(), static_cast<std::uint64_t>(std::pow(x, k)));
            EXPECT_EQ(p[1], 1u);
            EXPECT_EQ(p.counts.rbegin()->first, static_cast<std::uint64_t>(std::pow(x, k)));
        }
    }
    std::vector<std::uint64_t> bounds{3, 5, 7};
    const auto reference = divisor_profile(bounds).counts;
    std::sort(bounds.begin(), bounds.end());
    do {
        EXPECT_EQ(divisor_profile(bounds).counts, reference);
    } while (std::next_permutation(bounds.begin(), bounds.end()));
}

TEST(DivisorProfile, BudgetRefusal)
{
    EXPECT_THROW(divisor_profile(3, 1000, 1e6), SizeLimitError);
    EXPECT_THROW(divisor_profile(std::vector<std::uint64_t>{}), std::invalid_argument);
}

TEST(MvPseudomoment, Examples)
{
    EXPECT_EQ(mv_pseudomoment(divisor_profile(1, 3)), Rational(11, 6));
    EXPECT_EQ(mv_pseudomoment(divisor_profile(2, 2)), Rational(13, 4));
    for (int k = 1; k <= 4; ++k) EXPECT_EQ(mv_pseudomoment(divisor_profile(k, 1)), 1);
    EXPECT_EQ(mv_pseudomoment(divisor_profile(1, 10)), Rational(7381, 2520));
}

TEST(MvPseudomoment, ApproximationTracksExactValue)
{
    const auto p = divisor_profile(2, 40);
    EXPECT_NEAR(mv_pseudomoment_approx(p), mv_pseudomoment(p).convert_to<double>(), 1e-12);
}

TEST(MvPseudomoment, NondecreasingInXForKTwo)
{
    Rational previous = 0;
    for (std::uint64_t x = 1; x <= 30; ++x) {
        const Rational v = mv_pseudomoment(divisor_profile(2, x));
        EXPECT_GE(v, previous);
        previous = v;
    }
}

TEST(PairSumOracle, MatchesMvOnGrid)
{
    for (std::uint64_t x = 1; x <= 30; ++x) EXPECT_EQ(pair_sum_oracle(1, x), mv_pseudomoment(divisor_profile(1, x)));
    for (std::uint64_t x = 1; x <= 10; ++x) EXPECT_EQ(pair_sum_oracle(2, x), mv_pseudomoment(divisor_profile(2, x)));
    for (std::uint64_t x = 1; x <= 3; ++x) EXPECT_EQ(pair_sum_oracle(3, x), mv_pseudomoment(divisor_profile(3, x)));
    EXPECT_EQ(pair_sum_oracle(2, 2), Rational(13, 4));
    EXPECT_THROW(pair_sum_oracle(3, 100), SizeLimitError);
}

TEST(NumericMoment, ConstantIntegrandForXOne)
{
    for (int k = 1; k <= 3; ++k) {
        const auto m = numeric_moment(k, 1, 123.4, 1000);
        EXPECT_NEAR(m.value, 1.0, 1e-15);
        EXPECT_NEAR(m.error_estimate, 0.0, 1e-15);
    }
}

TEST(NumericMoment, ApproachesHarmonicSum)
{
    const auto m = numeric_moment(1, 10, 2e4, 400000);
    EXPECT_NEAR(m.value, 7381.0 / 2520.0, 0.01 * 7381.0 / 2520.0);
    EXPECT_FALSE(m.under_resolved);
}

TEST(NumericMoment, FlagsCoarseGrids)
{
    EXPECT_TRUE(numeric_moment(1, 10, 1e4, 100).under_resolved);
}

TEST(NumericMoment, ThreadCountOnlyReassociates)
{
    const auto one = numeric_moment(2, 5, 1000, 20000, 1);
    const auto four = numeric_moment(2, 5, 1000, 20000, 4);
    EXPECT_NEAR(one.value, four.value, 1e-10 * one.value);
    EXPECT_EQ(numeric_moment(2, 5, 1000, 20000, 3).value, numeric_moment(2, 5, 1000, 20000, 3).value);
}

TEST(Prediction, KOne)
{
    const auto g1 = ehrhart::pseudomagic_polynomial(1);
    const auto p = prediction(1, std::exp(2.0), 1.0, g1);
    EXPECT_NEAR(p.full, 3.0, 1e-12);
    EXPECT_NEAR(p.leading_only, 2.0, 1e-12);
    EXPECT_NEAR(prediction(1, 1e6, 1.0, g1).full, std::log(1e6) + 1, 1e-12);
}

TEST(Prediction, KTwo)
{
    const auto g2 = ehrhart::pseudomagic_polynomial(2);
    const double a2 = 6 / (std::numbers::pi * std::numbers::pi);
    const double l = std::log(1000.0);
    const double expected = a2 * (l + 1) * (l + 2) * (l * l + 3 * l + 3) / 6;
    EXPECT_NEAR(prediction(2, 1000, a2, g2).full, expected, 1e-12 * expected);
}

TEST(ConvergenceLadder, KOneApproachesOne)
{
    const auto rows = convergence_ladder(1, {100, 10000, 1000000}, 1.0, ehrhart::pseudomagic_polynomial(1));
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].ratio_full, rows[i - 1].ratio_full);
    // H_X / (log X + 1) with H_X the harmonic number.
    EXPECT_NEAR(rows[0].ratio_full, 0.9254629824812676, 1e-12);
    EXPECT_TRUE(rows[0].mv_exact.has_value());
    EXPECT_FALSE(rows[2].mv_exact.has_value());
}

TEST(ConvergenceLadder, XOneEndpoint)
{
    const auto rows = convergence_ladder(2, {1}, 0.6, ehrhart::pseudomagic_polynomial(2));
    EXPECT_EQ(*rows[0].mv_exact, 1);
    EXPECT_NEAR(rows[0].full_prediction, 0.6, 1e-15);
}
