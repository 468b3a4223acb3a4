#pragma once

// Exact moments of the delay through its Poissonized counterpart.
//
// With Delta the time at which n independent rate-1/n Poisson streams have
// each produced m events, E[D^{(r)}] = E[Delta^r] where D^{(r)} is the rising
// factorial D (D+1) ... (D+r-1), and for s > 0
//     E[Delta^s] = s n^s  int_0^inf [1 - F_m(tau)^n] tau^{s-1} dtau.
// The integral is taken in xi = tau / m, over [0, U] with U the first point
// where the remaining tail is negligible.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include "alpha_solver.hpp"
#include "errors.hpp"
#include "problem_size.hpp"
#include "quadrature.hpp"
#include "regime.hpp"
#include "special_fn.hpp"

namespace coupon_delay
{

enum class MomentMethod
{
    quadrature,
    oracle,
    asymptotic,
};

inline std::string to_string(MomentMethod method)
{
    switch (method)
    {
    case MomentMethod::quadrature:
        return "quadrature";
    case MomentMethod::oracle:
        return "oracle";
    case MomentMethod::asymptotic:
        return "asymptotic";
    }
    return "unknown";
}

struct MomentResult
{
    double value = 0.0;
    double abs_err = 0.0;
    MomentMethod method = MomentMethod::quadrature;
};

struct QuadratureConfig
{
    double rel_tol = 1e-9;
    int max_subdivisions = 4000;
    //! Cutoff on ln(n * P{Erlang > m U}); defaults to ln(1e-16 / n).
    std::optional<double> tail_log_threshold;

    double threshold_for(std::int64_t n) const
    {
        return tail_log_threshold.value_or(std::log(1e-16 / static_cast<double>(n)));
    }

    void validate() const
    {
        detail::require(rel_tol > 0.0 && rel_tol <= 1e-2,
                        "QuadratureConfig: rel_tol must lie in (0, 1e-2]");
        detail::require(max_subdivisions >= 1,
                        "QuadratureConfig: max_subdivisions must be >= 1");
        if (tail_log_threshold)
            detail::require(*tail_log_threshold < 0.0,
                            "QuadratureConfig: tail_log_threshold must be negative");
    }
};

namespace detail
{

// 1 - F_m(m xi)^n.
inline double max_survival(const ProblemSize& ps, double xi)
{
    const double x = static_cast<double>(ps.m) * xi;
    const double log_cdf = erlang_log_tails(ps.m, x).log_cdf;
    return -std::expm1(static_cast<double>(ps.n) * log_cdf);
}

// Smallest xi (up to bisection resolution) beyond which
// log_tail(xi) < threshold. log_tail must eventually decrease.
template<class LogTail>
double find_upper_limit(const LogTail& log_tail, double threshold)
{
    double hi = 1.0;
    int doublings = 0;
    while (log_tail(hi) >= threshold)
    {
        hi *= 2.0;
        if (++doublings > 200)
            throw NumericError("moments: could not bound the integration domain", hi);
    }
    double lo = 0.5 * hi;
    if (log_tail(lo) < threshold)
        return lo;
    for (int i = 0; i < 60 && hi - lo > 1e-9 * hi; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (log_tail(mid) < threshold ? hi : lo) = mid;
    }
    return hi;
}

inline double log_n_sf(const ProblemSize& ps, double xi)
{
    return std::log(static_cast<double>(ps.n))
           + erlang_log_tails(ps.m, static_cast<double>(ps.m) * xi).log_sf;
}

inline QuadratureResult checked(const QuadratureResult& q, double scale, const char* what)
{
    if (!q.converged)
        throw NumericError(std::string(what) + ": quadrature tolerance not met", q.value * scale);
    return q;
}

} // namespace detail

//! E[Delta_{m,n}^s] for real s > 0.
inline MomentResult delta_power_moment(const ProblemSize& ps, double s,
                                       const QuadratureConfig& cfg = {})
{
    detail::require(s > 0.0 && std::isfinite(s), "delta_power_moment: s must be > 0");
    cfg.validate();

    const double threshold = cfg.threshold_for(ps.n);
    const double upper = detail::find_upper_limit(
        [&](double xi) {
            return detail::log_n_sf(ps, xi) + std::max(s - 1.0, 0.0) * std::log(std::max(xi, 1.0));
        },
        threshold);
    const double nm = static_cast<double>(ps.n) * static_cast<double>(ps.m);
    const double scale = std::pow(nm, s);

    QuadratureResult q;
    double factor = 0.0;
    if (s >= 1.0)
    {
        // s (nm)^s int_0^U g(xi) xi^{s-1} dxi
        auto integrand = [&](double xi) {
            const double g = detail::max_survival(ps, xi);
            return s == 1.0 ? g : g * std::pow(xi, s - 1.0);
        };
        factor = s * scale;
        q = integrate_adaptive(integrand, 0.0, upper, cfg.rel_tol, 0.0, cfg.max_subdivisions);
    }
    else
    {
        // xi = v^{1/s} removes the endpoint singularity: (nm)^s int_0^{U^s} g(v^{1/s}) dv
        auto integrand = [&](double v) { return detail::max_survival(ps, std::pow(v, 1.0 / s)); };
        factor = scale;
        q = integrate_adaptive(integrand, 0.0, std::pow(upper, s), cfg.rel_tol, 0.0,
                               cfg.max_subdivisions);
    }
    detail::checked(q, factor, "delta_power_moment");
    return {factor * q.value, factor * q.abs_err, MomentMethod::quadrature};
}

//! E[D (D+1) ... (D+r-1)] = E[Delta^r].
inline MomentResult rising_moment(const ProblemSize& ps, int r, const QuadratureConfig& cfg = {})
{
    detail::require(r >= 1, "rising_moment: r must be >= 1");
    return delta_power_moment(ps, static_cast<double>(r), cfg);
}

inline MomentResult mean_delay(const ProblemSize& ps, const QuadratureConfig& cfg = {})
{
    return rising_moment(ps, 1, cfg);
}

//! V[D] = E[Delta^2] - E[Delta]^2 - E[Delta].
inline MomentResult variance_delay(const ProblemSize& ps, const QuadratureConfig& cfg = {})
{
    const MomentResult first = rising_moment(ps, 1, cfg);
    const MomentResult second = rising_moment(ps, 2, cfg);
    const double value = second.value - first.value * first.value - first.value;
    const double err = second.abs_err + (2.0 * first.value + 1.0) * first.abs_err
                       + 4.0 * std::numeric_limits<double>::epsilon() * second.value;
    if (value < -err)
        throw NumericError("variance_delay: negative variance beyond error budget", value);
    return {std::max(value, 0.0), err, MomentMethod::quadrature};
}

//! E[(1 - z)^{-D}] = E[e^{z Delta}] = 1 + z n int_0^inf [1 - F_m^n] e^{n z tau} dtau, z < 1/n.
inline double mgf_delta(const ProblemSize& ps, double z, const QuadratureConfig& cfg = {})
{
    const double nd = static_cast<double>(ps.n);
    const double md = static_cast<double>(ps.m);
    detail::require(std::isfinite(z) && z * nd < 1.0, "mgf_delta: z must be < 1/n");
    cfg.validate();
    if (z == 0.0)
        return 1.0;

    const double rate = nd * z * md; // exponent per unit xi
    const double threshold = cfg.threshold_for(ps.n);
    const double upper = detail::find_upper_limit(
        [&](double xi) { return std::min(0.0, detail::log_n_sf(ps, xi)) + rate * xi; },
        threshold);
    auto integrand = [&](double xi) {
        return detail::max_survival(ps, xi) * std::exp(rate * xi);
    };
    const auto q = integrate_adaptive(integrand, 0.0, upper, cfg.rel_tol, 0.0,
                                      cfg.max_subdivisions);
    detail::checked(q, z * nd * md, "mgf_delta");
    return 1.0 + z * nd * md * q.value;
}

//! Leading-order prediction of E[D^{(r)}] in the given regime.
//!
//! Supercritical and fixed-n: (nm)^r. Critical: (alpha n ln n)^r.
//! Fixed-m: (n ln n)^r.
inline double asymptotic_moment(const ProblemSize& ps, const Regime& reg, int r)
{
    detail::require(r >= 1, "asymptotic_moment: r must be >= 1");
    validate(reg);
    const double nd = static_cast<double>(ps.n);
    const double md = static_cast<double>(ps.m);
    struct Predictor
    {
        const ProblemSize& ps;
        double nd;
        double md;
        double operator()(const regime::Supercritical&) const { return nd * md; }
        double operator()(const regime::FixedN& f) const
        {
            detail::require(f.n == ps.n, "asymptotic_moment: FixedN regime n differs from problem n");
            return nd * md;
        }
        double operator()(const regime::Critical& c) const
        {
            detail::require(ps.n >= 2, "asymptotic_moment: critical regime needs n >= 2");
            return solve_alpha(c.beta).alpha * nd * std::log(nd);
        }
        double operator()(const regime::FixedM& f) const
        {
            detail::require(f.m == ps.m, "asymptotic_moment: FixedM regime m differs from problem m");
            detail::require(ps.n >= 2, "asymptotic_moment: fixed-m regime needs n >= 2");
            return nd * std::log(nd);
        }
    };
    return std::pow(std::visit(Predictor{ps, nd, md}, reg), r);
}

//! n ln n + (m-1) n ln ln n + n (gamma - ln (m-1)!).
inline double asymptotic_mean_fixed_m(std::int64_t m, std::int64_t n)
{
    detail::require(m >= 1, "asymptotic_mean_fixed_m: m must be >= 1");
    const double nd = static_cast<double>(n);
    detail::require(nd > std::numbers::e, "asymptotic_mean_fixed_m: n must exceed e");
    const double ln_n = std::log(nd);
    const double c_m = std::numbers::egamma - std::lgamma(static_cast<double>(m));
    return nd * ln_n + static_cast<double>(m - 1) * nd * std::log(ln_n) + nd * c_m;
}

} // namespace coupon_delay
