#pragma once

// Asymptotic regimes of the delay as m and/or n grow.

#include <cstdint>
#include <string>
#include <variant>

#include "errors.hpp"

namespace coupon_delay
{

namespace regime
{
//! m fixed, n -> inf (Erdos-Renyi).
struct FixedM
{
    std::int64_t m = 1;
};
//! m >> ln^3 n.
struct Supercritical
{
};
//! m = beta ln n + o(sqrt(ln n)).
struct Critical
{
    double beta = 1.0;
};
//! n fixed, m -> inf.
struct FixedN
{
    std::int64_t n = 1;
};
} // namespace regime

using Regime = std::variant<regime::FixedM, regime::Supercritical, regime::Critical,
                            regime::FixedN>;

inline void validate(const Regime& r)
{
    if (auto* f = std::get_if<regime::FixedM>(&r))
        detail::require(f->m >= 1, "FixedM regime requires m >= 1");
    else if (auto* c = std::get_if<regime::Critical>(&r))
        detail::require(c->beta > 0.0, "Critical regime requires beta > 0");
    else if (auto* n = std::get_if<regime::FixedN>(&r))
        detail::require(n->n >= 1, "FixedN regime requires n >= 1");
}

inline std::string regime_name(const Regime& r)
{
    struct Namer
    {
        std::string operator()(const regime::FixedM&) const { return "fixed-m"; }
        std::string operator()(const regime::Supercritical&) const { return "super"; }
        std::string operator()(const regime::Critical&) const { return "critical"; }
        std::string operator()(const regime::FixedN&) const { return "fixed-n"; }
    };
    return std::visit(Namer{}, r);
}

} // namespace coupon_delay
