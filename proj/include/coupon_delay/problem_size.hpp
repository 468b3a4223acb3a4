#pragma once

#include <cstdint>

#include "errors.hpp"

namespace coupon_delay
{

//! m packets per user, n users (equivalently: m detections of n coupons).
struct ProblemSize
{
    std::int64_t m = 1;
    std::int64_t n = 1;

    ProblemSize() = default;
    ProblemSize(std::int64_t packets, std::int64_t users) : m(packets), n(users)
    {
        detail::require(m >= 1, "ProblemSize: m must be >= 1");
        detail::require(n >= 1, "ProblemSize: n must be >= 1");
    }

    //! D_{m,n} >= m n surely.
    std::int64_t min_delay() const { return m * n; }

    friend bool operator==(const ProblemSize&, const ProblemSize&) = default;
};

} // namespace coupon_delay
