#pragma once

// Delay constant of the critical regime m ~ beta ln n.
//
// alpha is the root on (beta, inf) of
//     alpha - beta ln(alpha) = beta - beta ln(beta) + 1.
// Writing alpha = beta (1 + u) turns this into
//     u - ln(1 + u) = 1 / beta,
// whose left side is evaluated without cancellation for small u. That keeps
// the residual at the 1e-12 level even for beta ~ 1e6 where alpha and
// beta ln(alpha) are both ~1e7.

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace coupon_delay
{

struct AlphaSolution
{
    double beta = 0.0;
    double alpha = 0.0;
    //! alpha - beta ln alpha - (beta - beta ln beta + 1)
    double residual = 0.0;
    int iterations = 0;
};

namespace detail
{

// u - log1p(u) for u > 0.
inline double excess_over_log1p(double u)
{
    if (u < 0.05)
    {
        // Alternating series u^2/2 - u^3/3 + ...; 20 terms reach 1e-27 at u=0.05.
        double power = u * u;
        double sum = 0.0;
        for (int k = 2; k < 24; ++k)
        {
            const double term = power / k;
            sum += (k % 2 == 0) ? term : -term;
            power *= u;
        }
        return sum;
    }
    return u - std::log1p(u);
}

inline double alpha_residual(double beta, double u)
{
    return beta * excess_over_log1p(u) - 1.0;
}

} // namespace detail

//! Solve for alpha(beta) by safeguarded Newton on u = alpha/beta - 1.
inline AlphaSolution solve_alpha(double beta)
{
    detail::require(beta > 0.0 && std::isfinite(beta), "solve_alpha: beta must be > 0");

    constexpr int max_iterations = 200;
    // alpha in [beta + 1, beta + 1 + sqrt(2 beta) + 2 + 1/beta]
    double lo = 1.0 / beta;
    double hi = (1.0 + std::sqrt(2.0 * beta) + 2.0 + 1.0 / beta) / beta;
    while (detail::alpha_residual(beta, hi) <= 0.0)
        hi *= 2.0;

    double u = 0.5 * (lo + hi);
    int iter = 0;
    double residual = detail::alpha_residual(beta, u);
    for (; iter < max_iterations; ++iter)
    {
        if (residual == 0.0)
            break;
        if (residual < 0.0)
            lo = u;
        else
            hi = u;

        const bool residual_ok = std::fabs(residual) <= 1e-12;
        const bool bracket_ok = beta * (hi - lo) <= 1e-14 * (1.0 + beta * (1.0 + u));
        if (residual_ok && bracket_ok)
            break;

        // g'(u) = beta * u / (1 + u)
        const double slope = beta * u / (1.0 + u);
        double next = u - residual / slope;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (next == u)
        {
            if (residual_ok)
                break;
            next = 0.5 * (lo + hi);
        }
        u = next;
        residual = detail::alpha_residual(beta, u);
    }

    if (std::fabs(residual) > 1e-12)
        throw NumericError("solve_alpha: no convergence", beta * (1.0 + u));

    return {beta, beta * (1.0 + u), residual, iter};
}

//! (alpha - beta)/sqrt(beta) - sqrt(2); tends to 0 as beta grows.
inline double bridging_gap(double beta)
{
    const AlphaSolution sol = solve_alpha(beta);
    const double u = sol.alpha / beta - 1.0;
    return std::sqrt(beta) * u - std::numbers::sqrt2;
}

} // namespace coupon_delay
