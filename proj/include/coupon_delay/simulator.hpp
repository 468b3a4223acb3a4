#pragma once

// Monte Carlo draws of the delay D, its Poissonized version Delta, and the
// coupled pair (D, Delta) with Delta = U_1 + ... + U_D, U_k iid Exp(1).

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "problem_size.hpp"
#include "random.hpp"

namespace coupon_delay
{

enum class SimMode
{
    discrete,
    poissonized,
    coupled,
};

inline std::string to_string(SimMode mode)
{
    switch (mode)
    {
    case SimMode::discrete:
        return "discrete";
    case SimMode::poissonized:
        return "poissonized";
    case SimMode::coupled:
        return "coupled";
    }
    return "unknown";
}

inline SimMode parse_sim_mode(const std::string& text)
{
    if (text == "discrete")
        return SimMode::discrete;
    if (text == "poissonized")
        return SimMode::poissonized;
    if (text == "coupled")
        return SimMode::coupled;
    throw DomainError("unknown simulation mode '" + text + "'");
}

struct SimConfig
{
    ProblemSize ps;
    std::uint64_t reps = 1;
    std::uint64_t seed = 0;
    SimMode mode = SimMode::discrete;
};

struct SampleBatch
{
    std::optional<std::vector<std::int64_t>> d_values;
    std::optional<std::vector<double>> delta_values;
    SimConfig config;

    std::size_t size() const
    {
        return d_values ? d_values->size() : (delta_values ? delta_values->size() : 0);
    }
};

//! Worker count from COUPON_DELAY_THREADS, else the hardware thread count.
inline unsigned default_worker_count()
{
    if (const char* env = std::getenv("COUPON_DELAY_THREADS"))
    {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value >= 1)
            return static_cast<unsigned>(std::min(value, 1024L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail
{

// Runs body(i) for i in [0, count) on `workers` threads in contiguous chunks.
template<class Body>
void parallel_for(std::uint64_t count, unsigned workers, const Body& body)
{
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(count, 1)));
    if (workers == 1)
    {
        for (std::uint64_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w)
    {
        const std::uint64_t begin = w * chunk;
        const std::uint64_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        threads.emplace_back([&body, begin, end] {
            for (std::uint64_t i = begin; i < end; ++i)
                body(i);
        });
    }
}

// Trials until every one of n coupons has been drawn m times.
template<class Rng>
std::int64_t draw_delay(Rng& rng, const ProblemSize& ps, std::vector<std::int64_t>& counts)
{
    std::fill(counts.begin(), counts.end(), 0);
    std::int64_t deficient = ps.n;
    std::int64_t trials = 0;
    const auto n = static_cast<std::uint64_t>(ps.n);
    while (deficient > 0)
    {
        ++trials;
        const auto label = uniform_index(rng, n);
        if (++counts[label] == ps.m)
            --deficient;
    }
    return trials;
}

// n max_j Gamma_j(m, 1).
template<class Rng>
double draw_poissonized(Rng& rng, const ProblemSize& ps)
{
    const double shape = static_cast<double>(ps.m);
    double largest = 0.0;
    for (std::int64_t j = 0; j < ps.n; ++j)
        largest = std::max(largest, standard_gamma(rng, shape));
    return static_cast<double>(ps.n) * largest;
}

inline void require_mode(const SimConfig& cfg, SimMode mode)
{
    require(cfg.mode == mode, "simulator: configuration mode does not match the sampler");
    require(cfg.reps >= 1, "simulator: reps must be >= 1");
}

} // namespace detail

//! Runs the discrete coupon process; records D per replication.
inline SampleBatch sample_discrete(const SimConfig& cfg, unsigned workers = default_worker_count())
{
    detail::require_mode(cfg, SimMode::discrete);
    std::vector<std::int64_t> d(cfg.reps);
    detail::parallel_for(cfg.reps, workers, [&](std::uint64_t i) {
        thread_local std::vector<std::int64_t> counts;
        counts.resize(static_cast<std::size_t>(cfg.ps.n));
        auto rng = replication_stream(cfg.seed, i);
        d[i] = detail::draw_delay(rng, cfg.ps, counts);
    });
    return {std::move(d), std::nullopt, cfg};
}

//! Delta = maximum of n independent Erlang(m, rate 1/n) times.
inline SampleBatch sample_poissonized(const SimConfig& cfg, unsigned workers = default_worker_count())
{
    detail::require_mode(cfg, SimMode::poissonized);
    std::vector<double> delta(cfg.reps);
    detail::parallel_for(cfg.reps, workers, [&](std::uint64_t i) {
        auto rng = replication_stream(cfg.seed, i);
        delta[i] = detail::draw_poissonized(rng, cfg.ps);
    });
    return {std::nullopt, std::move(delta), cfg};
}

//! D from the discrete process, then Delta ~ Gamma(D, 1) from the same stream.
inline SampleBatch sample_coupled(const SimConfig& cfg, unsigned workers = default_worker_count())
{
    detail::require_mode(cfg, SimMode::coupled);
    std::vector<std::int64_t> d(cfg.reps);
    std::vector<double> delta(cfg.reps);
    detail::parallel_for(cfg.reps, workers, [&](std::uint64_t i) {
        thread_local std::vector<std::int64_t> counts;
        counts.resize(static_cast<std::size_t>(cfg.ps.n));
        auto rng = replication_stream(cfg.seed, i);
        d[i] = detail::draw_delay(rng, cfg.ps, counts);
        delta[i] = standard_gamma(rng, static_cast<double>(d[i]));
    });
    return {std::move(d), std::move(delta), cfg};
}

//! Dispatches on cfg.mode.
inline SampleBatch simulate(const SimConfig& cfg, unsigned workers = default_worker_count())
{
    switch (cfg.mode)
    {
    case SimMode::discrete:
        return sample_discrete(cfg, workers);
    case SimMode::poissonized:
        return sample_poissonized(cfg, workers);
    case SimMode::coupled:
        return sample_coupled(cfg, workers);
    }
    throw DomainError("simulate: unknown mode");
}

} // namespace coupon_delay
