#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "coupon_delay/limit_laws.hpp"
#include "coupon_delay/moments.hpp"

using namespace coupon_delay;

namespace
{
const double alpha_one = 3.146193220620582585;
}

TEST(Normalization, FixedMOne)
{
    const auto norm = normalization(regime::FixedM{1}, 1, 10000);
    EXPECT_NEAR(norm.center, 1e4 * std::log(1e4), 1e-8);
    EXPECT_DOUBLE_EQ(norm.scale, 1e4);
    EXPECT_TRUE(std::holds_alternative<target::StandardGumbel>(norm.target));
}

TEST(Normalization, SupercriticalScale)
{
    const auto norm = normalization(regime::Supercritical{}, 30000, 1000);
    const double expected = 3e7 / std::sqrt(6e4 * std::log(1e3));
    EXPECT_NEAR(norm.scale, expected, 1e-8);
    EXPECT_NEAR(norm.scale / 4.66e4, 1.0, 1e-3);
}

TEST(Normalization, SupercriticalMatchesDisplayedStatistic)
{
    // y = sqrt(2 m ln n) (d/(nm) - 1) - 2 ln n + (ln ln n)/2 + ln(2 sqrt(pi))
    for (auto [m, n] : {std::pair{30000, 1000}, std::pair{500, 50}, std::pair{2000000, 100000}})
    {
        const auto norm = normalization(regime::Supercritical{}, m, n);
        const double L = std::log(n);
        const double nm = static_cast<double>(n) * m;
        for (double d : {nm, 1.1 * nm, 1.3 * nm})
        {
            const double y = std::sqrt(2.0 * m * L) * (d / nm - 1.0) - 2.0 * L + 0.5 * std::log(L)
                             + std::log(2.0 * std::sqrt(std::numbers::pi));
            EXPECT_NEAR(norm.apply(d), y, 1e-9 * std::max(1.0, std::fabs(y)));
        }
    }
}

TEST(Normalization, FixedN)
{
    const auto norm = normalization(regime::FixedN{1}, 25, 1);
    EXPECT_DOUBLE_EQ(norm.center, 25.0);
    EXPECT_DOUBLE_EQ(norm.scale, 5.0);
    EXPECT_NEAR(target_cdf(norm.target, 0.7), normal_cdf(0.7), 1e-15);
}

TEST(Normalization, RejectsSmallNAndMismatch)
{
    EXPECT_THROW(normalization(regime::FixedM{1}, 1, 2), DomainError);
    EXPECT_THROW(normalization(regime::FixedM{2}, 1, 100), DomainError);
    EXPECT_THROW(normalization(regime::Critical{-1.0}, 10, 100), DomainError);
}

TEST(Normalization, CriticalMatchesDisplayedStatistic)
{
    // Standardized statistic
    //   ((a - b)/a) m (d/(nm) - a/b) + (b_n / b) ln n + (ln ln n)/2 + C
    // which equals the raw centering/scaling plus C.
    for (auto [beta, m, n] : {std::tuple{2.0, 20, 22026}, std::tuple{1.0, 9, 10000}, std::tuple{0.5, 7, 100000}})
    {
        const double alpha = solve_alpha(beta).alpha;
        const double L = std::log(n);
        const double b = derive_b(m, n, beta);
        const double c = critical_constant(alpha, beta);
        const auto norm = normalization(regime::Critical{beta}, m, n);
        const auto raw = normalization(regime::Critical{beta}, m, n, Presentation::raw);
        const double nm = static_cast<double>(n) * m;
        for (double d : {0.9 * alpha * n * L, alpha * n * L, 1.1 * alpha * n * L})
        {
            const double y = (alpha - beta) / alpha * m * (d / nm - alpha / beta) + b / beta * L
                             + 0.5 * std::log(L) + c;
            EXPECT_NEAR(norm.apply(d), y, 1e-9 * std::max(1.0, std::fabs(y)));
            // T5ATc form: (d - a n ln n - a(a-b-1)/(b(a-b)) b_n n ln n + a/(2(a-b)) n ln ln n) / (a n/(a-b))
            const double yraw = (d - alpha * n * L - alpha * (alpha - beta - 1.0) / (beta * (alpha - beta)) * b * n * L
                                 + alpha / (2.0 * (alpha - beta)) * n * std::log(L))
                                / (alpha * n / (alpha - beta));
            EXPECT_NEAR(raw.apply(d), yraw, 1e-9 * std::max(1.0, std::fabs(yraw)));
            EXPECT_NEAR(norm.apply(d), raw.apply(d) + c, 1e-9 * std::max(1.0, std::fabs(y)));
        }
    }
}

TEST(CriticalConstant, Values)
{
    EXPECT_NEAR(critical_constant(alpha_one, 1.0), 0.5 * std::log(2.0 * std::numbers::pi * std::pow(alpha_one - 1.0, 2)), 1e-14);
    EXPECT_NEAR(critical_constant(alpha_one, 1.0), 1.68263, 1e-5);
    EXPECT_NEAR(critical_constant(4.0, 2.0), 0.5 * std::log(4.0 * std::numbers::pi), 1e-15);
    const double beta = 1e8;
    EXPECT_NEAR(critical_constant(solve_alpha(beta).alpha, beta), std::log(2.0 * std::sqrt(std::numbers::pi)), 1e-3);
    EXPECT_THROW(critical_constant(1.0, 1.0), DomainError);
}

TEST(LimitCdf, Examples)
{
    EXPECT_NEAR(limit_cdf(regime::FixedM{1}, 0.0), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(limit_cdf(regime::Supercritical{}, 0.0), std::exp(-1.0 / (2.0 * std::sqrt(std::numbers::pi))), 1e-15);
    EXPECT_NEAR(limit_cdf(regime::Supercritical{}, 0.0), 0.754, 1e-3);
    EXPECT_NEAR(limit_cdf(regime::Critical{1.0}, 0.0), 0.8304, 1e-4);
    EXPECT_NEAR(limit_cdf(regime::FixedN{3}, 0.4), std::pow(normal_cdf(0.4), 3), 1e-15);
}

TEST(LimitCdf, ValidCdfs)
{
    const Regime regimes[] = {regime::FixedM{1}, regime::FixedM{4}, regime::Supercritical{},
                              regime::Critical{0.3}, regime::Critical{5.0}, regime::FixedN{1},
                              regime::FixedN{7}};
    for (const auto& r : regimes)
    {
        double prev = 0.0;
        for (double y = -10.0; y <= 10.0; y += 0.01)
        {
            const double f = limit_cdf(r, y);
            EXPECT_GE(f, prev);
            prev = f;
        }
        EXPECT_LT(limit_cdf(r, -40.0), 1e-12);
        EXPECT_GT(limit_cdf(r, 40.0), 1.0 - 1e-12);
    }
}

TEST(LimitCdf, CriticalConstantStandardizes)
{
    for (double beta : {0.2, 1.0, 2.0, 30.0})
    {
        const double alpha = solve_alpha(beta).alpha;
        const double c = critical_constant(alpha, beta);
        for (double y = -5.0; y <= 5.0; y += 0.5)
            EXPECT_NEAR(limit_cdf(regime::Critical{beta}, y), gumbel_cdf(y + c), 1e-12);
    }
}

TEST(LimitCdf, RawTargetsMatchLimitCdf)
{
    for (const Regime& r : {Regime{regime::FixedM{3}}, Regime{regime::Supercritical{}}, Regime{regime::Critical{2.0}}})
    {
        const auto raw = normalization(r, std::holds_alternative<regime::FixedM>(r) ? 3 : 20, 22026, Presentation::raw);
        for (double y = -4.0; y <= 4.0; y += 0.5)
            EXPECT_NEAR(target_cdf(raw.target, y), limit_cdf(r, y), 1e-14);
    }
}

TEST(LimitLaws, FixedMMeanReproducesNewmanShepp)
{
    for (int m : {1, 2, 3, 6})
        for (int n : {10, 1000, 1000000})
        {
            const auto norm = normalization(regime::FixedM{m}, m, n);
            const double predicted = norm.center / n + norm.scale / n * std::numbers::egamma;
            EXPECT_NEAR(predicted, asymptotic_mean_fixed_m(m, n) / n, 1e-12 * std::max(1.0, predicted));
        }
}

TEST(LimitLaws, SupercriticalPresentationsAgreeAsymptotically)
{
    // Same scale; centers differ by scale * [sqrt(2L) sqrt(2L - ln L) - 2L + (ln L)/2] after the
    // ln(2 sqrt(pi)) shift, and that bracket vanishes as n grows.
    double prev = 1e9;
    for (double n : {1e4, 1e8, 1e12, 1e18})
    {
        const auto nn = static_cast<std::int64_t>(std::min(n, 1e18));
        const int m = 40000;
        const auto s = normalization(regime::Supercritical{}, m, nn);
        const auto r = normalization(regime::Supercritical{}, m, nn, Presentation::raw);
        EXPECT_NEAR(s.scale / r.scale, 1.0, 1e-12);
        const double L = std::log(static_cast<double>(nn));
        const double bracket = std::sqrt(2.0 * L) * std::sqrt(2.0 * L - std::log(L)) - 2.0 * L + 0.5 * std::log(L);
        for (double y : {-2.0, 0.0, 3.0})
        {
            const double d = s.center + y * s.scale;
            const double via_raw = r.apply(d) + std::log(2.0 * std::sqrt(std::numbers::pi)) + bracket;
            EXPECT_NEAR(s.apply(d), via_raw, 1e-9 * std::max(1.0, std::fabs(y)));
        }
        EXPECT_LT(std::fabs(bracket), prev);
        prev = std::fabs(bracket);
    }
}

TEST(DeriveB, Values)
{
    EXPECT_NEAR(derive_b(9, 10000, 1.0), 9.0 / std::log(1e4) - 1.0, 1e-15);
    EXPECT_NEAR(derive_b(9, 10000, 1.0), -0.02284, 1e-5);
    EXPECT_NEAR(derive_b(2.0 * std::log(1e6), 1000000, 2.0), 0.0, 1e-14);
    EXPECT_NEAR(derive_b(20, 22026, 2.0), 20.0 / std::log(22026.0) - 2.0, 1e-15);
    EXPECT_THROW(derive_b(5, 1, 1.0), DomainError);
}
