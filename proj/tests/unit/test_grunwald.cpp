#include <gtest/gtest.h>

#include <cmath>

#include "fracpen/errors.hpp"
#include "fracpen/grunwald.hpp"

namespace fracpen {
namespace {

TEST(Grunwald, FirstTwoCoefficients)
{
    const auto g = grunwald_coeffs(1.5, 2);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], 1.0);
    EXPECT_EQ(g[1], -1.5);
}

TEST(Grunwald, HandComputedFour)
{
    // (1 - 2.5/2)(-1.5) = 0.375, (1 - 2.5/3)(0.375) = 0.0625
    const auto g = grunwald_coeffs(1.5, 4);
    EXPECT_DOUBLE_EQ(g[0], 1.0);
    EXPECT_DOUBLE_EQ(g[1], -1.5);
    EXPECT_DOUBLE_EQ(g[2], 0.375);
    EXPECT_DOUBLE_EQ(g[3], 0.0625);
}

TEST(Grunwald, RejectsBadParameters)
{
    EXPECT_THROW((void)grunwald_coeffs(1.0, 4), ParameterError);
    EXPECT_THROW((void)grunwald_coeffs(2.0, 4), ParameterError);
    EXPECT_THROW((void)grunwald_coeffs(0.5, 4), ParameterError);
    EXPECT_THROW((void)grunwald_coeffs(std::nan(""), 4), ParameterError);
    EXPECT_THROW((void)grunwald_coeffs(1.5, 1), ParameterError);
    EXPECT_THROW((void)grunwald_coeffs(1.5, 0), ParameterError);
}

TEST(Grunwald, SignPatternAndPartialSums)
{
    for (double alpha : {1.01, 1.1, 1.25, 1.4, 1.5, 1.7, 1.9, 1.99}) {
        const std::size_t count = 10000;
        const auto g = grunwald_coeffs(alpha, count);
        EXPECT_EQ(g[0], 1.0);
        EXPECT_NEAR(g[1], -alpha, 1e-14 * alpha);
        double partial = g[0];
        double prev_abs = std::abs(g[0]);
        for (std::size_t l = 1; l < count; ++l) {
            if (l >= 2) {
                ASSERT_GT(g[l], 0.0) << "alpha=" << alpha << " l=" << l;
            }
            if (l >= 2 && l + 1 < count) {
                ASSERT_GT(g[l], g[l + 1]) << "alpha=" << alpha << " l=" << l;
            }
            partial += g[l];
            ASSERT_LT(partial, 0.0) << "alpha=" << alpha << " n=" << l;
            // The tail is positive and sums to -partial, so |partial| shrinks.
            if (l >= 2) {
                ASSERT_LT(std::abs(partial), prev_abs) << "alpha=" << alpha << " n=" << l;
            }
            prev_abs = std::abs(partial);
        }
    }
}

}  // namespace
}  // namespace fracpen
