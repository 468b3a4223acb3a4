#include <chrono>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "coupon_delay/alpha_solver.hpp"

using namespace coupon_delay;

namespace
{
// Plain bisection on alpha - beta ln alpha - (beta - beta ln beta + 1) over (beta, hi].
double bisection_alpha(double beta)
{
    auto f = [beta](double a) { return a - beta * std::log(a) - (beta - beta * std::log(beta) + 1.0); };
    double lo = beta;
    double hi = beta + 1.0;
    while (f(hi) < 0.0)
        hi *= 2.0;
    for (int i = 0; i < 200; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
} // namespace

TEST(SolveAlpha, BetaOne)
{
    const auto sol = solve_alpha(1.0);
    EXPECT_NEAR(sol.alpha, 3.146193220620582585, 1e-12);
    EXPECT_LE(std::fabs(sol.residual), 1e-12);
    EXPECT_EQ(sol.beta, 1.0);
}

TEST(SolveAlpha, SmallBetaApproachesOne)
{
    const auto sol = solve_alpha(1e-6);
    EXPECT_GT(sol.alpha, 1.0);
    EXPECT_LT(sol.alpha - 1.0, 1e-2);
}

TEST(SolveAlpha, BetaTwoAgreesWithBisection)
{
    EXPECT_NEAR(solve_alpha(2.0).alpha, bisection_alpha(2.0), 1e-10);
    // 40-digit reference: 4.715353347891798116809...
    EXPECT_NEAR(solve_alpha(2.0).alpha, 4.7153533478917981168, 1e-12);
}

TEST(SolveAlpha, DomainErrors)
{
    EXPECT_THROW(solve_alpha(0.0), DomainError);
    EXPECT_THROW(solve_alpha(-1.0), DomainError);
}

TEST(SolveAlpha, ConvergesAcrossRange)
{
    for (double lb = -6.0; lb <= 6.0; lb += 0.25)
    {
        const double beta = std::pow(10.0, lb);
        const auto sol = solve_alpha(beta);
        EXPECT_LE(std::fabs(sol.residual), 1e-12) << beta;
        EXPECT_GT(sol.alpha, beta + 1.0) << beta;
        EXPECT_LE(sol.iterations, 200);
    }
}

TEST(SolveAlpha, StrictlyIncreasingInBeta)
{
    double prev = 0.0;
    for (double lb = -3.0; lb <= 3.0; lb += 0.05)
    {
        const double alpha = solve_alpha(std::pow(10.0, lb)).alpha;
        EXPECT_GT(alpha, prev);
        prev = alpha;
    }
}

TEST(SolveAlpha, DirectResidualForModerateBeta)
{
    for (double beta : {0.01, 0.5, 1.0, 3.0, 10.0})
    {
        const double a = solve_alpha(beta).alpha;
        const double direct = a - beta * std::log(a) - (beta - beta * std::log(beta) + 1.0);
        EXPECT_LE(std::fabs(direct), 1e-12) << beta;
    }
}

TEST(SolveAlpha, LargeBetaExpansion)
{
    // sqrt(beta) |alpha/beta - 1 - sqrt(2/beta)| stays bounded.
    for (double beta : {1e2, 1e4, 1e6})
    {
        const double a = solve_alpha(beta).alpha;
        const double dev = std::sqrt(beta) * std::fabs(a / beta - 1.0 - std::sqrt(2.0 / beta));
        EXPECT_LT(dev, 1.0) << beta;
    }
}

TEST(SolveAlpha, Fast)
{
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 100; ++i)
        (void)solve_alpha(1.0 + i * 1e-3);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    EXPECT_LT(std::chrono::duration<double>(elapsed).count(), 0.1);
}

TEST(BridgingGap, Values)
{
    EXPECT_NEAR(bridging_gap(1.0), 3.146193220620582585 - 1.0 - std::numbers::sqrt2, 1e-12);
    const double g4 = bridging_gap(1e4);
    const double g8 = bridging_gap(1e8);
    EXPECT_LE(std::fabs(g4), 1.0);
    EXPECT_LE(std::fabs(g8), 0.1);
    EXPECT_LT(std::fabs(g8), std::fabs(g4));
}

TEST(BridgingGap, ShrinksMonotonically)
{
    double prev = bridging_gap(10.0);
    for (double beta : {1e2, 1e3, 1e4, 1e5, 1e6, 1e7})
    {
        const double g = bridging_gap(beta);
        EXPECT_LT(std::fabs(g), std::fabs(prev));
        EXPECT_LE(std::fabs(g), 10.0 * std::pow(beta, -0.25));
        prev = g;
    }
}
