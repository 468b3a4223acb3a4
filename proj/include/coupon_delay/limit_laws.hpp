#pragma once

// Affine normalizations of the delay and the limiting laws they approach.
//
// Two presentations exist for each Gumbel regime. The "standardized" map
// absorbs the regime constant into the centering so that the target is the
// standard Gumbel law exp(-e^{-y}). The "raw" map leaves it out, and the
// target becomes exp(-e^{-y - shift}), with shift = ln (m-1)! (fixed m),
// ln(2 sqrt(pi)) (supercritical), or C (critical).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>

#include "alpha_solver.hpp"
#include "errors.hpp"
#include "regime.hpp"
#include "special_fn.hpp"

namespace coupon_delay
{

namespace target
{
struct StandardGumbel
{
};
//! CDF gumbel_cdf(y + shift) = exp(-e^{-shift} e^{-y}).
struct GumbelWithLogShift
{
    double shift = 0.0;
};
//! Law of the maximum of n iid standard normals: Phi(y)^n.
struct MaxOfNormals
{
    std::int64_t n = 1;
};
} // namespace target

using TargetLaw = std::variant<target::StandardGumbel, target::GumbelWithLogShift, target::MaxOfNormals>;

inline double target_cdf(const TargetLaw& law, double y)
{
    struct Cdf
    {
        double y;
        double operator()(const target::StandardGumbel&) const { return gumbel_cdf(y); }
        double operator()(const target::GumbelWithLogShift& g) const { return gumbel_cdf(y + g.shift); }
        double operator()(const target::MaxOfNormals& g) const
        {
            return std::pow(normal_cdf(y), static_cast<double>(g.n));
        }
    };
    return std::visit(Cdf{y}, law);
}

inline std::string target_name(const TargetLaw& law)
{
    struct Namer
    {
        std::string operator()(const target::StandardGumbel&) const { return "standard-gumbel"; }
        std::string operator()(const target::GumbelWithLogShift&) const { return "gumbel-log-shift"; }
        std::string operator()(const target::MaxOfNormals&) const { return "max-of-normals"; }
    };
    return std::visit(Namer{}, law);
}

//! y = (d - center) / scale.
struct Normalization
{
    double center = 0.0;
    double scale = 1.0;
    TargetLaw target = target::StandardGumbel{};

    double apply(double d) const { return (d - center) / scale; }
    double cdf_at(double d) const { return target_cdf(target, apply(d)); }
};

enum class Presentation
{
    standardized,
    raw,
};

//! b = m / ln n - beta, so that m = (beta + b) ln n.
inline double derive_b(double m, std::int64_t n, double beta)
{
    detail::require(n >= 2, "derive_b: n must be >= 2");
    return m / std::log(static_cast<double>(n)) - beta;
}

//! C = (1/2) ln(2 pi (alpha - beta)^2 / beta).
inline double critical_constant(double alpha, double beta)
{
    detail::require(beta > 0.0, "critical_constant: beta must be > 0");
    detail::require(alpha > beta, "critical_constant: alpha must exceed beta");
    const double gap = alpha - beta;
    return 0.5 * std::log(2.0 * std::numbers::pi * gap * gap / beta);
}

namespace detail
{

inline const double log_two_sqrt_pi = std::log(2.0 * std::sqrt(std::numbers::pi));

struct NormalizationBuilder
{
    std::int64_t m;
    std::int64_t n;
    Presentation presentation;

    double nd() const { return static_cast<double>(n); }
    double md() const { return static_cast<double>(m); }

    Normalization operator()(const regime::FixedM& r) const
    {
        require(r.m == m, "normalization: FixedM regime m differs from m");
        require(n >= 3, "normalization: fixed-m regime needs n >= 3");
        const double ln_n = std::log(nd());
        const double shift = std::lgamma(md()); // ln (m-1)!
        const double raw_center = nd() * (ln_n + (md() - 1.0) * std::log(ln_n));
        if (presentation == Presentation::raw)
            return {raw_center, nd(), target::GumbelWithLogShift{shift}};
        return {raw_center - nd() * shift, nd(), target::StandardGumbel{}};
    }

    Normalization operator()(const regime::Supercritical&) const
    {
        require(n >= 3, "normalization: supercritical regime needs n >= 3");
        const double ln_n = std::log(nd());
        const double lnln_n = std::log(ln_n);
        const double nm = nd() * md();
        const double root = std::sqrt(2.0 * md() * ln_n);
        const double scale = nm / root; // = n sqrt(m / (2 ln n))
        if (presentation == Presentation::raw)
        {
            const double center = nm + nd() * std::sqrt(md()) * std::sqrt(2.0 * ln_n - lnln_n);
            return {center, scale, target::GumbelWithLogShift{log_two_sqrt_pi}};
        }
        const double center = nm * (1.0 + (2.0 * ln_n - 0.5 * lnln_n - log_two_sqrt_pi) / root);
        return {center, scale, target::StandardGumbel{}};
    }

    Normalization operator()(const regime::Critical& r) const
    {
        require(n >= 3, "normalization: critical regime needs n >= 3");
        const double beta = r.beta;
        const double alpha = solve_alpha(beta).alpha;
        const double ln_n = std::log(nd());
        const double lnln_n = std::log(ln_n);
        const double b = derive_b(md(), n, beta);
        const double c = critical_constant(alpha, beta);
        const double gap = alpha - beta;
        // Raw: (d - center) / scale with
        //   center = alpha n ln n + alpha (alpha - beta - 1) / (beta (alpha - beta)) b n ln n
        //            - alpha / (2 (alpha - beta)) n ln ln n,
        //   scale  = alpha n / (alpha - beta).
        const double scale = alpha * nd() / gap;
        const double raw_center = alpha * nd() * ln_n
                                  + alpha * (gap - 1.0) / (beta * gap) * b * nd() * ln_n
                                  - alpha / (2.0 * gap) * nd() * lnln_n;
        if (presentation == Presentation::raw)
            return {raw_center, scale, target::GumbelWithLogShift{c}};
        // Standardized: y = ((a-b)/a) m (d/(nm) - a/b) + (b/beta) ln n + (ln ln n)/2 + C,
        // the same map shifted by C.
        const double center = alpha * md() * nd() / beta
                              - scale * (b / beta * ln_n + 0.5 * lnln_n + c);
        return {center, scale, target::StandardGumbel{}};
    }

    Normalization operator()(const regime::FixedN& r) const
    {
        require(r.n == n, "normalization: FixedN regime n differs from n");
        return {nd() * md(), nd() * std::sqrt(md()), target::MaxOfNormals{n}};
    }
};

} // namespace detail

//! Affine map sending D_{m,n} (or Delta_{m,n}) to the scale of its limit law.
inline Normalization normalization(const Regime& reg, std::int64_t m, std::int64_t n,
                                   Presentation presentation = Presentation::standardized)
{
    validate(reg);
    detail::require(m >= 1 && n >= 1, "normalization: m and n must be >= 1");
    return std::visit(detail::NormalizationBuilder{m, n, presentation}, reg);
}

//! Limiting CDF in the regime's raw form (constant not absorbed).
//!
//! Fixed m: exp(-e^{-y} / (m-1)!). Supercritical: exp(-e^{-y} / (2 sqrt(pi))).
//! Critical: exp(-(sqrt(beta) / (sqrt(2 pi) (alpha - beta))) e^{-y}). Fixed n: Phi(y)^n.
inline double limit_cdf(const Regime& reg, double y)
{
    validate(reg);
    struct Cdf
    {
        double y;
        double operator()(const regime::FixedM& r) const
        {
            return std::exp(-std::exp(-y - std::lgamma(static_cast<double>(r.m))));
        }
        double operator()(const regime::Supercritical&) const
        {
            return std::exp(-std::exp(-y) / (2.0 * std::sqrt(std::numbers::pi)));
        }
        double operator()(const regime::Critical& r) const
        {
            const double alpha = solve_alpha(r.beta).alpha;
            const double rate = std::sqrt(r.beta) / (std::sqrt(2.0 * std::numbers::pi) * (alpha - r.beta));
            return std::exp(-rate * std::exp(-y));
        }
        double operator()(const regime::FixedN& r) const
        {
            return std::pow(normal_cdf(y), static_cast<double>(r.n));
        }
    };
    return std::visit(Cdf{y}, reg);
}

} // namespace coupon_delay
