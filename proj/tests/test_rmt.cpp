#include <pseudomoments/rmt.hpp>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

using namespace pseudomoments;
using namespace pseudomoments::rmt;

namespace {

// e_j of the eigenvalues by expanding prod_i (1 + lambda_i x).
std::vector<Complex> elementary_from_eigenvalues(const UnitaryMatrix& m)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.entries());
    const auto& lambda = solver.eigenvalues();
    std::vector<Complex> e{1.0};
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        e.push_back(0.0);
        for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += lambda(i) * e[j - 1];
    }
    return e;
}

} // namespace

TEST(HaarUnitary, UnitaryAndReproducible)
{
    for (int n : {1, 2, 5, 16, 32}) {
        const auto m = haar_unitary(n, 42u);
        EXPECT_LT(UnitaryMatrix::unitarity_residual(m.entries()), unitarity_tolerance);
        EXPECT_EQ(m.entries(), haar_unitary(n, 42u).entries());
    }
    EXPECT_NEAR(std::abs(haar_unitary(1, 7u).entries()(0, 0)), 1.0, 1e-14);
    EXPECT_NE(haar_unitary(3, 1u).entries(), haar_unitary(3, 2u).entries());
}

TEST(UnitaryMatrix, RejectsNonUnitary)
{
    EXPECT_THROW(UnitaryMatrix(Eigen::MatrixXcd::Identity(3, 3) * 2.0), ConsistencyError);
    EXPECT_THROW(UnitaryMatrix(Eigen::MatrixXcd(2, 3)), std::invalid_argument);
}

TEST(SecularCoefficients, IdentityGivesBinomials)
{
    const auto sc = secular_coefficients(UnitaryMatrix(Eigen::MatrixXcd::Identity(6, 6)));
    for (int j = 0; j <= 6; ++j) {
        EXPECT_NEAR(std::abs(sc[static_cast<std::size_t>(j)] - binomial(6, j).convert_to<double>()), 0.0, 1e-10);
    }
}

TEST(SecularCoefficients, TraceDeterminantAndEigenvalueExpansion)
{
    for (int n = 1; n <= 6; ++n) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto m = haar_unitary(n, seed);
            const auto sc = secular_coefficients(m);
            EXPECT_NEAR(std::abs(sc[1] - m.entries().trace()), 0.0, 1e-10);
            EXPECT_NEAR(std::abs(sc[static_cast<std::size_t>(n)] - m.entries().determinant()), 0.0, 1e-10);
            EXPECT_NEAR(std::abs(sc[static_cast<std::size_t>(n)]), 1.0, 1e-10);
            const auto oracle = elementary_from_eigenvalues(m);
            for (int j = 0; j <= n; ++j) {
                EXPECT_NEAR(std::abs(sc[static_cast<std::size_t>(j)] - oracle[static_cast<std::size_t>(j)]), 0.0, 1e-8);
            }
        }
    }
}

TEST(TruncatedCharacteristic, FullTruncationIsDeterminant)
{
    const auto m = haar_unitary(4, 9u);
    const Complex z = std::polar(1.0, 0.3);
    const Complex direct = (z * Eigen::MatrixXcd::Identity(4, 4) - m.entries()).determinant();
    EXPECT_NEAR(std::abs(truncated_characteristic(secular_coefficients(m), 4, z) - direct), 0.0, 1e-10);
}

TEST(MonteCarlo, HaarSanity)
{
    const auto mean_sc1 = mixed_moment_mc({1}, {0}, 6, 20000, 11);
    ASSERT_TRUE(mean_sc1.target.has_value());
    EXPECT_EQ(*mean_sc1.target, 0);
    EXPECT_TRUE(mean_sc1.within(3)) << *mean_sc1.z_score();

    const auto sc1_sq = secular_abs_moment_mc(1, 1, 6, 20000, 12);
    EXPECT_EQ(*sc1_sq.target, 1);
    EXPECT_TRUE(sc1_sq.within(3)) << *sc1_sq.z_score();
}

TEST(MonteCarlo, SecularMomentTargets)
{
    const auto e = secular_abs_moment_mc(1, 2, 4, 20000, 13);
    EXPECT_EQ(*e.target, 2);
    EXPECT_TRUE(e.within(3)) << *e.z_score();
    // N < jk: reported without a target.
    EXPECT_FALSE(secular_abs_moment_mc(3, 2, 4, 10, 1).target.has_value());
}

TEST(MonteCarlo, MixedMoments)
{
    // E[Sc_1^2 conj(Sc_2)] = N_{(1,1),(2)} = 1.
    const auto e = mixed_moment_mc({2, 0}, {0, 1}, 4, 20000, 14);
    EXPECT_EQ(*e.target, 1);
    EXPECT_TRUE(e.within(3)) << *e.z_score();
    const auto odd = mixed_moment_mc({2}, {1}, 4, 20000, 15);
    EXPECT_EQ(*odd.target, 0);
    EXPECT_TRUE(odd.within(3)) << *odd.z_score();
}

TEST(MonteCarlo, TruncatedPolynomialMoments)
{
    const auto l0 = truncated_poly_moment_mc(0, 3, 5, 1.0, 100, 1);
    EXPECT_EQ(l0.mean, Complex(1.0, 0.0));
    EXPECT_EQ(l0.std_error, 0.0);
    EXPECT_TRUE(l0.within(0));

    const auto l1 = truncated_poly_moment_mc(1, 1, 4, 1.0, 20000, 16);
    EXPECT_EQ(*l1.target, 2);
    EXPECT_TRUE(l1.within(3)) << *l1.z_score();

    // Target recomputed by the counter: G_2(2) = 26.
    const auto l2 = truncated_poly_moment_mc(2, 2, 8, 1.0, 20000, 17);
    EXPECT_EQ(*l2.target, 26);
    EXPECT_TRUE(l2.within(3)) << *l2.z_score();

    EXPECT_THROW(truncated_poly_moment_mc(1, 1, 4, Complex(1.1, 0.0), 10, 1), std::invalid_argument);
}

TEST(MonteCarlo, ZIndependence)
{
    const auto at_one = truncated_poly_moment_mc(2, 1, 6, 1.0, 20000, 18);
    const auto rotated = truncated_poly_moment_mc(2, 1, 6, std::polar(1.0, 0.7), 20000, 19);
    const double combined = std::hypot(at_one.std_error, rotated.std_error);
    EXPECT_LT(std::abs(at_one.mean - rotated.mean), 3 * combined);
}

TEST(MonteCarlo, FullPolynomialSecondMoment)
{
    const auto e = truncated_poly_moment_mc(5, 1, 5, 1.0, 20000, 20);
    // G_1(5) = 6 = N + 1.
    EXPECT_EQ(*e.target, 6);
    EXPECT_TRUE(e.within(3)) << *e.z_score();
    EXPECT_LT(std::abs(e.mean.real() - full_poly_moment_exact(5, 1).convert_to<double>()), 3 * e.std_error);
}

TEST(MonteCarlo, DeterministicForSeedAndThreads)
{
    const auto a = secular_abs_moment_mc(2, 1, 5, 2000, 99, 3);
    const auto b = secular_abs_moment_mc(2, 1, 5, 2000, 99, 3);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(FullPolyMomentExact, Examples)
{
    EXPECT_EQ(full_poly_moment_exact(2, 1), 3);
    EXPECT_EQ(full_poly_moment_exact(1, 1), 2);
    EXPECT_EQ(full_poly_moment_exact(7, 0), 1);
    for (int n = 1; n <= 20; ++n) EXPECT_EQ(full_poly_moment_exact(n, 1), n + 1);
}

TEST(FullPolyMomentExact, MatchesGammaProduct)
{
    for (int n = 1; n <= 8; ++n) {
        for (int k = 0; k <= 3; ++k) {
            Rational direct = 1;
            for (int j = 1; j <= n; ++j) {
                direct *= Rational(factorial(static_cast<unsigned>(j - 1)) * factorial(static_cast<unsigned>(j + 2 * k - 1)),
                                   factorial(static_cast<unsigned>(j + k - 1)) * factorial(static_cast<unsigned>(j + k - 1)));
            }
            EXPECT_EQ(full_poly_moment_exact(n, k), direct);
        }
    }
}

TEST(GFactor, KnownConstants)
{
    EXPECT_EQ(g_factor(1), 1);
    EXPECT_EQ(g_factor(2), Rational(1, 12));
    EXPECT_EQ(g_factor(3) * Rational(factorial(9)), 42);
    EXPECT_EQ(g_factor(4) * Rational(factorial(16)), 24024);
}

TEST(GFactor, LimitOfFullMoment)
{
    const Rational ratio50 = full_poly_moment_exact(50, 2) / Rational(BigInt(50) * 50 * 50 * 50);
    const Rational ratio200 = full_poly_moment_exact(200, 2) / Rational(BigInt(200) * 200 * 200 * 200);
    const double g2 = g_factor(2).convert_to<double>();
    EXPECT_LT(std::abs(ratio50.convert_to<double>() / g2 - 1), 0.2);
    EXPECT_LT(std::abs(ratio200.convert_to<double>() / g2 - 1), 0.1);
}
