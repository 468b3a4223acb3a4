#pragma once

// Sample statistics and Kolmogorov-Smirnov distances for simulated delays.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "errors.hpp"
#include "limit_laws.hpp"
#include "regime.hpp"
#include "simulator.hpp"

namespace coupon_delay
{

struct Estimate
{
    double value = 0.0;
    double std_error = 0.0;
};

//! Sample mean with its standard error s / sqrt(N).
inline Estimate mean_estimate(std::span<const double> xs)
{
    detail::require(!xs.empty(), "mean_estimate: empty sample");
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs)
        mean += x;
    mean /= n;
    if (xs.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

//! Unbiased sample variance.
inline double sample_variance(std::span<const double> xs)
{
    detail::require(xs.size() >= 2, "sample_variance: need at least two values");
    const double mean = mean_estimate(xs).value;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

//! Per-replication statistics used to check the Poissonization identities.
enum class Statistic
{
    d_power,          // D^r
    delta_power,      // Delta^r
    d_rising,         // D (D+1) ... (D+r-1)
    inv_delta,        // 1 / Delta
    inv_d_minus_one,  // 1 / (D - 1)
};

namespace detail
{

inline std::vector<double> statistic_values(const SampleBatch& batch, Statistic stat, int r)
{
    auto need_d = [&]() -> const std::vector<std::int64_t>& {
        require(batch.d_values.has_value(), "statistic needs D samples");
        return *batch.d_values;
    };
    auto need_delta = [&]() -> const std::vector<double>& {
        require(batch.delta_values.has_value(), "statistic needs Delta samples");
        return *batch.delta_values;
    };

    std::vector<double> out;
    switch (stat)
    {
    case Statistic::d_power:
        for (auto d : need_d())
            out.push_back(std::pow(static_cast<double>(d), r));
        break;
    case Statistic::delta_power:
        for (double x : need_delta())
            out.push_back(std::pow(x, r));
        break;
    case Statistic::d_rising:
        for (auto d : need_d())
        {
            double product = 1.0;
            for (int k = 0; k < r; ++k)
                product *= static_cast<double>(d + k);
            out.push_back(product);
        }
        break;
    case Statistic::inv_delta:
        for (double x : need_delta())
            out.push_back(1.0 / x);
        break;
    case Statistic::inv_d_minus_one:
        for (auto d : need_d())
        {
            require(d >= 2, "1/(D-1) needs D >= 2");
            out.push_back(1.0 / static_cast<double>(d - 1));
        }
        break;
    }
    return out;
}

} // namespace detail

//! Mean of the chosen per-replication statistic with its standard error.
inline Estimate empirical_moments(const SampleBatch& batch, Statistic stat, int r = 1)
{
    detail::require(r >= 1, "empirical_moments: r must be >= 1");
    const auto values = detail::statistic_values(batch, stat, r);
    return mean_estimate(values);
}

//! E[a - b] from paired replications, with the standard error of the differences.
inline Estimate paired_difference(const SampleBatch& batch, Statistic a, int ra, Statistic b, int rb)
{
    const auto xa = detail::statistic_values(batch, a, ra);
    const auto xb = detail::statistic_values(batch, b, rb);
    std::vector<double> diff(xa.size());
    for (std::size_t i = 0; i < xa.size(); ++i)
        diff[i] = xa[i] - xb[i];
    return mean_estimate(diff);
}

//! Batch-means estimate of a sample functional.
//!
//! The replications are cut into `batches` contiguous groups; the functional
//! is evaluated on each and the spread of those values gives the standard
//! error. The point estimate is the functional on the full index range.
inline Estimate batch_means(std::size_t count,
                            const std::function<double(std::size_t, std::size_t)>& functional,
                            std::size_t batches = 50)
{
    detail::require(batches >= 2 && count >= 2 * batches, "batch_means: too few replications");
    std::vector<double> per_batch(batches);
    for (std::size_t k = 0; k < batches; ++k)
        per_batch[k] = functional(k * count / batches, (k + 1) * count / batches);
    const Estimate spread = mean_estimate(per_batch);
    return {functional(0, count), spread.std_error};
}

//! var(D) - (var(Delta) - mean(Delta)); zero in expectation for coupled samples.
inline Estimate variance_identity_gap(const SampleBatch& batch, std::size_t batches = 50)
{
    detail::require(batch.d_values && batch.delta_values,
                    "variance_identity_gap: needs a coupled batch");
    const auto& d = *batch.d_values;
    const auto& delta = *batch.delta_values;
    auto gap = [&](std::size_t begin, std::size_t end) {
        std::vector<double> dd(d.begin() + static_cast<std::ptrdiff_t>(begin),
                               d.begin() + static_cast<std::ptrdiff_t>(end));
        std::span<const double> xs(delta.data() + begin, end - begin);
        return sample_variance(dd) - (sample_variance(xs) - mean_estimate(xs).value);
    };
    return batch_means(d.size(), gap, batches);
}

//! Exact sup_y |F_N(y) - F(y)| for a continuous model CDF; ties handled.
inline double ks_statistic(std::vector<double> ys, const std::function<double(double)>& cdf)
{
    detail::require(!ys.empty(), "ks_statistic: empty sample");
    std::sort(ys.begin(), ys.end());
    const double n = static_cast<double>(ys.size());
    double sup = 0.0;
    std::size_t i = 0;
    while (i < ys.size())
    {
        std::size_t j = i;
        while (j + 1 < ys.size() && ys[j + 1] == ys[i])
            ++j;
        const double f = cdf(ys[i]);
        const double below = static_cast<double>(i) / n;
        const double above = static_cast<double>(j + 1) / n;
        sup = std::max({sup, f - below, above - f});
        i = j + 1;
    }
    return std::clamp(sup, 0.0, 1.0);
}

struct KSReport
{
    double statistic = 0.0;
    std::uint64_t reps = 0;
    Regime regime;
    Normalization normalization;
};

enum class SampleVariable
{
    automatic, // D when present, otherwise Delta
    delay,
    poissonized,
};

//! KS distance between the normalized sample and the regime's limit law.
inline KSReport ks_distance(const SampleBatch& batch, const Regime& reg,
                            SampleVariable which = SampleVariable::automatic)
{
    detail::require(batch.size() > 0, "ks_distance: empty batch");
    const auto& ps = batch.config.ps;
    const Normalization norm = normalization(reg, ps.m, ps.n);

    bool use_d = batch.d_values.has_value();
    if (which == SampleVariable::delay)
        use_d = true;
    else if (which == SampleVariable::poissonized)
        use_d = false;
    detail::require(use_d ? batch.d_values.has_value() : batch.delta_values.has_value(),
                    "ks_distance: requested variable not present in batch");

    std::vector<double> ys;
    ys.reserve(batch.size());
    if (use_d)
        for (auto d : *batch.d_values)
            ys.push_back(norm.apply(static_cast<double>(d)));
    else
        for (double x : *batch.delta_values)
            ys.push_back(norm.apply(x));

    const double stat = ks_statistic(std::move(ys), [&](double y) { return target_cdf(norm.target, y); });
    return {stat, batch.size(), reg, norm};
}

//! Asymptotic 1 - p quantile of sqrt(N) * KS under the null (Kolmogorov law).
inline double kolmogorov_critical_value(std::uint64_t reps, double p = 0.01)
{
    detail::require(reps >= 1 && p > 0.0 && p < 1.0, "kolmogorov_critical_value: bad arguments");
    return std::sqrt(-0.5 * std::log(p / 2.0)) / std::sqrt(static_cast<double>(reps));
}

} // namespace coupon_delay
