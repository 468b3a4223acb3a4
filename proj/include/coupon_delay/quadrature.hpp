#pragma once

// Globally adaptive Gauss-Legendre quadrature on a finite interval.
//
// Each panel is integrated with a 15-point Gauss rule, once over the whole
// panel and once over each half; the halved value is kept and the difference
// is the error estimate. The panel with the largest estimate is split until
// the total estimate meets the tolerance. Panels are summed in order of their
// left endpoint, so the result depends only on the integrand and the limits.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include "errors.hpp"

namespace coupon_delay
{

struct QuadratureResult
{
    double value = 0.0;
    double abs_err = 0.0;
    int panels = 0;
    bool converged = false;
};

namespace detail
{

template<int N>
struct GaussLegendreRule
{
    std::array<double, N> nodes{};
    std::array<double, N> weights{};
};

// Nodes on [-1, 1] by Newton iteration on P_N.
template<int N>
GaussLegendreRule<N> make_gauss_legendre()
{
    GaussLegendreRule<N> rule;
    for (int i = 0; i < N; ++i)
    {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= N; ++k)
            {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16)
                break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

inline const GaussLegendreRule<15>& gauss15()
{
    static const GaussLegendreRule<15> rule = make_gauss_legendre<15>();
    return rule;
}

template<class F>
double gauss_panel(const F& f, double a, double b)
{
    const auto& rule = gauss15();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < 15; ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

struct Panel
{
    double a;
    double b;
    double value;
    double err;

    bool operator<(const Panel& other) const { return err < other.err; }
};

template<class F>
Panel make_panel(const F& f, double a, double b)
{
    const double mid = 0.5 * (a + b);
    const double coarse = gauss_panel(f, a, b);
    const double fine = gauss_panel(f, a, mid) + gauss_panel(f, mid, b);
    return {a, b, fine, std::fabs(fine - coarse)};
}

} // namespace detail

//! Integrate f over [a, b] to max(abs_tol, rel_tol * |I|).
template<class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double rel_tol,
                                    double abs_tol = 0.0, int max_panels = 4000,
                                    int initial_panels = 16)
{
    detail::require(b >= a, "integrate_adaptive: b must be >= a");
    QuadratureResult result;
    if (b == a)
    {
        result.converged = true;
        return result;
    }

    initial_panels = std::clamp(initial_panels, 1, std::max(max_panels, 1));
    std::priority_queue<detail::Panel> queue;
    const double width = (b - a) / initial_panels;
    double total = 0.0;
    double total_err = 0.0;
    for (int i = 0; i < initial_panels; ++i)
    {
        const double lo = a + i * width;
        const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
        auto panel = detail::make_panel(f, lo, hi);
        total += panel.value;
        total_err += panel.err;
        queue.push(panel);
    }

    auto tolerance = [&] { return std::max(abs_tol, rel_tol * std::fabs(total)); };
    while (total_err > tolerance() && static_cast<int>(queue.size()) < max_panels)
    {
        const detail::Panel worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            break;
        queue.pop();
        auto left = detail::make_panel(f, worst.a, mid);
        auto right = detail::make_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        queue.push(left);
        queue.push(right);
    }

    std::vector<detail::Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty())
    {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });

    // Running totals drift; resum in order.
    double value = 0.0;
    double err = 0.0;
    for (const auto& p : panels)
    {
        value += p.value;
        err += p.err;
    }
    result.value = value;
    result.abs_err = err;
    result.panels = static_cast<int>(panels.size());
    result.converged = err <= std::max(abs_tol, rel_tol * std::fabs(value));
    return result;
}

} // namespace coupon_delay
