#include <cmath>

#include <gtest/gtest.h>

#include "coupon_delay/exact_chain.hpp"

using namespace coupon_delay;

TEST(ExactMeanSmall, HarmonicCases)
{
    EXPECT_NEAR(exact_mean_small({1, 2}).value, 3.0, 1e-12);
    EXPECT_NEAR(exact_mean_small({1, 3}).value, 5.5, 1e-12);
    EXPECT_NEAR(exact_mean_small({2, 1}).value, 2.0, 1e-12);
    EXPECT_EQ(exact_mean_small({2, 1}).method, MomentMethod::oracle);
}

TEST(ExactDistSmall, DegenerateSingleCoupon)
{
    const auto dist = exact_dist_small({2, 1});
    EXPECT_EQ(dist.first_k, 2);
    ASSERT_EQ(dist.pmf.size(), 1u);
    EXPECT_DOUBLE_EQ(dist.pmf[0], 1.0);
    EXPECT_DOUBLE_EQ(dist.probability(2), 1.0);
    EXPECT_DOUBLE_EQ(dist.probability(3), 0.0);
}

TEST(ExactDistSmall, TwoCouponsGeometric)
{
    const auto dist = exact_dist_small({1, 2});
    for (int k = 2; k < 30; ++k)
        EXPECT_NEAR(dist.probability(k), std::pow(0.5, k - 1), 1e-15);
    EXPECT_NEAR(dist.variance(), 2.0, 1e-10); // truncated tail still carries ~k^2 * 1e-15
}

TEST(ExactDistSmall, MassAndMeanConsistency)
{
    for (int m = 1; m <= 4; ++m)
        for (int n = 1; n <= 5; ++n)
        {
            const auto dist = exact_dist_small({m, n});
            double total = dist.tail_mass;
            for (double p : dist.pmf)
                total += p;
            EXPECT_NEAR(total, 1.0, 1e-12);
            EXPECT_LE(dist.tail_mass, 1e-12);
            const double mean = exact_mean_small({m, n}).value;
            EXPECT_NEAR(dist.mean() / mean, 1.0, 1e-12) << m << "," << n;
        }
}

TEST(ExactChain, StateBound)
{
    EXPECT_NO_THROW(exact_mean_small({5, 6}));
    EXPECT_THROW(exact_mean_small({10, 20}), DomainError);
    EXPECT_THROW(exact_dist_small({2, 2}, 1e-3), DomainError);
}
