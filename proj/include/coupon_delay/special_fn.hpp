#pragma once

// Numerical kernels for the Erlang(m, 1) law and the limiting CDFs.
//
// The survival function S_m(x) e^{-x} = Gamma(m, x) / (m-1)! is evaluated in
// the log domain so that it stays usable for m up to ~1e6 and x up to ~1e7,
// far beyond the range where the partial exponential sum can be formed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "errors.hpp"

namespace coupon_delay
{

//! Natural log of a nonnegative quantity; -inf encodes zero.
struct LogValue
{
    double log_magnitude = 0.0;

    double value() const { return std::exp(log_magnitude); }
};

//! sum_{l=0}^{m-1} y^l / l!. Overflows for large y; use erlang_log_sf for tails.
inline double partial_exp_sum(std::int64_t m, double y)
{
    detail::require(m >= 1, "partial_exp_sum: m must be >= 1");
    detail::require(y >= 0.0, "partial_exp_sum: y must be >= 0");
    double term = 1.0;
    double sum = 1.0;
    for (std::int64_t l = 1; l < m; ++l)
    {
        term *= y / static_cast<double>(l);
        sum += term;
    }
    return sum;
}

namespace detail
{

struct ErlangLogTails
{
    double log_cdf; // ln F_m(x)
    double log_sf;  // ln(1 - F_m(x))
};

inline std::int64_t series_cap(double m)
{
    return 100000 + static_cast<std::int64_t>(50.0 * std::sqrt(m));
}

// ln of x^m e^{-x} / Gamma(m + 1), the common prefactor of both tails.
inline double log_poisson_weight(double m, double x)
{
    return -x + m * std::log(x) - std::lgamma(m + 1.0);
}

// Lower tail by the power series
//   P(m, x) = x^m e^{-x} / Gamma(m+1) * sum_k x^k / ((m+1)...(m+k)).
inline double log_lower_series(double m, double x)
{
    double term = 1.0;
    double sum = 1.0;
    const std::int64_t cap = series_cap(m);
    for (std::int64_t k = 1; k < cap; ++k)
    {
        term *= x / (m + static_cast<double>(k));
        sum += term;
        if (term < sum * 1e-17)
            return log_poisson_weight(m, x) + std::log(sum);
    }
    throw NumericError("erlang tail: lower series did not converge",
                       log_poisson_weight(m, x) + std::log(sum));
}

// Upper tail by the continued fraction for Gamma(m, x) (modified Lentz).
inline double log_upper_fraction(double m, double x)
{
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - m;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    const std::int64_t cap = series_cap(m);
    for (std::int64_t i = 1; i < cap; ++i)
    {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - m);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16)
            return -x + m * std::log(x) - std::lgamma(m) + std::log(h);
    }
    throw NumericError("erlang tail: continued fraction did not converge",
                       -x + m * std::log(x) - std::lgamma(m) + std::log(h));
}

inline ErlangLogTails erlang_log_tails(std::int64_t m, double x)
{
    if (x <= 0.0)
        return {-std::numeric_limits<double>::infinity(), 0.0};
    if (std::isinf(x))
        return {0.0, -std::numeric_limits<double>::infinity()};
    if (m == 1) // ln(1 - e^{-x}), switching forms at ln 2 to avoid cancellation
        return {x < std::numbers::ln2 ? std::log(-std::expm1(-x)) : std::log1p(-std::exp(-x)), -x};

    const double md = static_cast<double>(m);
    if (x <= md + std::sqrt(md))
    {
        const double log_cdf = log_lower_series(md, x);
        return {log_cdf, std::log1p(-std::exp(log_cdf))};
    }
    const double log_sf = log_upper_fraction(md, x);
    return {std::log1p(-std::exp(log_sf)), log_sf};
}

} // namespace detail

//! ln P{Erlang(m,1) > x} = ln(S_m(x) e^{-x}).
inline LogValue erlang_log_sf(std::int64_t m, double x)
{
    detail::require(m >= 1, "erlang_log_sf: m must be >= 1");
    detail::require(x >= 0.0, "erlang_log_sf: x must be >= 0");
    return {detail::erlang_log_tails(m, x).log_sf};
}

//! ln F_m(x), accurate where F_m(x) is tiny.
inline LogValue erlang_log_cdf(std::int64_t m, double x)
{
    detail::require(m >= 1, "erlang_log_cdf: m must be >= 1");
    detail::require(x >= 0.0, "erlang_log_cdf: x must be >= 0");
    return {detail::erlang_log_tails(m, x).log_cdf};
}

//! F_m(x) = 1 - S_m(x) e^{-x}.
inline double erlang_cdf(std::int64_t m, double x)
{
    const double f = -std::expm1(erlang_log_sf(m, x).log_magnitude);
    return std::clamp(f, 0.0, 1.0);
}

//! Tricomi's large-deviation approximation of ln(1 - F_m(x)).
//!
//! Valid only for x > m with sqrt(m) / (x - m) < 1; outside that window the
//! caller must fall back to erlang_log_sf.
inline LogValue tricomi_log_sf(std::int64_t m, double x)
{
    detail::require(m >= 1, "tricomi_log_sf: m must be >= 1");
    const double md = static_cast<double>(m);
    const double excess = x - md;
    detail::require(excess > 0.0 && std::sqrt(md) / excess < 1.0,
                    "tricomi_log_sf: x outside the validity window "
                    "x > m, sqrt(m)/(x-m) < 1");
    const double mu = md - 1.0;
    const double gap = x - mu;
    const double correction = 1.0 - mu / (gap * gap) + 2.0 * mu / (gap * gap * gap);
    const double log_value = -0.5 * std::log(2.0 * std::numbers::pi) - excess
                             + md * std::log(x / md) + 0.5 * std::log(md)
                             - std::log(excess + 1.0) + std::log(correction);
    return {log_value};
}

//! Standard normal CDF.
inline double normal_cdf(double u)
{
    return 0.5 * std::erfc(-u / std::numbers::sqrt2);
}

//! |(1 - F_m(x)) - Phi((m - x)/sqrt(m))|, a diagnostic for the normal approximation.
inline double berry_esseen_gap(std::int64_t m, double x)
{
    detail::require(m >= 1, "berry_esseen_gap: m must be >= 1");
    const double md = static_cast<double>(m);
    const double sf = x <= 0.0 ? 1.0 : erlang_log_sf(m, x).value();
    return std::fabs(sf - normal_cdf((md - x) / std::sqrt(md)));
}

//! Standard Gumbel CDF exp(-e^{-y}).
inline double gumbel_cdf(double y)
{
    return std::exp(-std::exp(-y));
}

} // namespace coupon_delay
