#pragma once

// Brute-force law of D for small (m, n) via the absorbing Markov chain of
// coupon counts.
//
// Coupons are exchangeable, so a state is the histogram h[c] = number of
// coupons currently seen c times (counts capped at m). There are
// C(m + n, n) such states. Every non-idle step moves one coupon from c to
// c + 1, so the total progress sum_c c h[c] strictly increases and the chain
// is a DAG apart from self-loops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "moments.hpp"
#include "problem_size.hpp"

namespace coupon_delay
{

//! P{D = k} for k = first_k, first_k + 1, ...; mass beyond the table is tail_mass.
struct ExactDistribution
{
    std::int64_t first_k = 0;
    std::vector<double> pmf;
    double tail_mass = 0.0;

    template<class F>
    double expectation(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < pmf.size(); ++i)
            sum += pmf[i] * f(static_cast<double>(first_k + static_cast<std::int64_t>(i)));
        return sum;
    }

    double mean() const
    {
        return expectation([](double k) { return k; });
    }

    double variance() const
    {
        const double mu = mean();
        return expectation([mu](double k) { return (k - mu) * (k - mu); });
    }

    double probability(std::int64_t k) const
    {
        if (k < first_k || k >= first_k + static_cast<std::int64_t>(pmf.size()))
            return 0.0;
        return pmf[static_cast<std::size_t>(k - first_k)];
    }
};

namespace detail
{

constexpr double max_chain_states = 1e6;

inline double binomial(std::int64_t top, std::int64_t bottom)
{
    return std::exp(std::lgamma(top + 1.0) - std::lgamma(bottom + 1.0)
                    - std::lgamma(top - bottom + 1.0));
}

class CountChain
{
  public:
    using Histogram = std::vector<std::int64_t>;

    explicit CountChain(const ProblemSize& ps) : ps_(ps)
    {
        const double states = binomial(ps.m + ps.n, ps.n);
        detail::require(states <= max_chain_states * (1.0 + 1e-9),
                        "exact oracle: state space exceeds 1e6 histograms");
        Histogram h(static_cast<std::size_t>(ps.m + 1), 0);
        enumerate(h, 0, ps.n);
        for (std::size_t i = 0; i < states_.size(); ++i)
            index_.emplace(states_[i], i);
        transitions_.resize(states_.size());
        for (std::size_t i = 0; i < states_.size(); ++i)
            build_transitions(i);
    }

    std::size_t size() const { return states_.size(); }
    const Histogram& state(std::size_t i) const { return states_[i]; }

    std::size_t start() const
    {
        Histogram h(static_cast<std::size_t>(ps_.m + 1), 0);
        h[0] = ps_.n;
        return index_.at(h);
    }

    bool absorbing(std::size_t i) const { return states_[i][static_cast<std::size_t>(ps_.m)] == ps_.n; }

    //! Calls visit(target, probability) for each transition out of state i.
    template<class Visit>
    void for_each_transition(std::size_t i, Visit&& visit) const
    {
        for (const auto& [target, p] : transitions_[i])
            visit(target, p);
    }

    std::int64_t progress(std::size_t i) const
    {
        std::int64_t total = 0;
        for (std::size_t c = 0; c < states_[i].size(); ++c)
            total += static_cast<std::int64_t>(c) * states_[i][c];
        return total;
    }

  private:
    void build_transitions(std::size_t i)
    {
        const auto& h = states_[i];
        const double nd = static_cast<double>(ps_.n);
        for (std::size_t c = 0; c < static_cast<std::size_t>(ps_.m); ++c)
        {
            if (h[c] == 0)
                continue;
            Histogram next = h;
            --next[c];
            ++next[c + 1];
            transitions_[i].emplace_back(index_.at(next), static_cast<double>(h[c]) / nd);
        }
        const double idle = static_cast<double>(h[static_cast<std::size_t>(ps_.m)]) / nd;
        if (idle > 0.0)
            transitions_[i].emplace_back(i, idle);
    }

    void enumerate(Histogram& h, std::size_t slot, std::int64_t remaining)
    {
        if (slot + 1 == h.size())
        {
            h[slot] = remaining;
            states_.push_back(h);
            return;
        }
        for (std::int64_t k = 0; k <= remaining; ++k)
        {
            h[slot] = k;
            enumerate(h, slot + 1, remaining - k);
        }
        h[slot] = 0;
    }

    ProblemSize ps_;
    std::vector<Histogram> states_;
    std::map<Histogram, std::size_t> index_;
    std::vector<std::vector<std::pair<std::size_t, double>>> transitions_;
};

} // namespace detail

//! Exact E[D] by backward recursion over the count chain.
inline MomentResult exact_mean_small(const ProblemSize& ps)
{
    const detail::CountChain chain(ps);
    std::vector<std::size_t> order(chain.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return chain.progress(a) > chain.progress(b);
    });

    // T(s) = (1 + sum_{s' != s} p(s, s') T(s')) / (1 - p(s, s))
    std::vector<double> hitting(chain.size(), 0.0);
    for (std::size_t s : order)
    {
        if (chain.absorbing(s))
            continue;
        double stay = 0.0;
        double acc = 1.0;
        chain.for_each_transition(s, [&](std::size_t t, double p) {
            if (t == s)
                stay += p;
            else
                acc += p * hitting[t];
        });
        hitting[s] = acc / (1.0 - stay);
    }
    const double mean = hitting[chain.start()];
    return {mean, 1e-13 * mean, MomentMethod::oracle};
}

//! Exact P{D = k} by forward propagation until the unabsorbed mass is below tail_tol.
inline ExactDistribution exact_dist_small(const ProblemSize& ps, double tail_tol = 1e-15)
{
    detail::require(tail_tol > 0.0 && tail_tol <= 1e-12,
                    "exact_dist_small: tail tolerance must lie in (0, 1e-12]");
    const detail::CountChain chain(ps);
    std::vector<double> mass(chain.size(), 0.0);
    std::vector<double> next(chain.size(), 0.0);
    mass[chain.start()] = 1.0;

    ExactDistribution dist;
    dist.first_k = ps.min_delay();
    double remaining = 1.0;
    constexpr std::int64_t max_steps = 50'000'000;
    for (std::int64_t step = 1; step <= max_steps; ++step)
    {
        std::fill(next.begin(), next.end(), 0.0);
        double absorbed = 0.0;
        for (std::size_t s = 0; s < chain.size(); ++s)
        {
            if (mass[s] == 0.0)
                continue;
            chain.for_each_transition(s, [&](std::size_t t, double p) {
                if (chain.absorbing(t))
                    absorbed += mass[s] * p;
                else
                    next[t] += mass[s] * p;
            });
        }
        std::swap(mass, next);
        if (step >= dist.first_k)
            dist.pmf.push_back(absorbed);
        remaining = 0.0;
        for (double v : mass)
            remaining += v;
        if (remaining <= tail_tol)
            break;
    }
    dist.tail_mass = remaining;
    return dist;
}

} // namespace coupon_delay
