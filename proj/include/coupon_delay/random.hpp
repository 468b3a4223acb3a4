#pragma once

// Reproducible random streams and the variates the simulator needs.
//
// Replication i of a run with seed s draws from its own xoshiro256** state,
// initialized through SplitMix64 from a hash of (s, i). Results therefore do
// not depend on which worker runs which replication. All variate generators
// are implemented here (not std:: distributions) so that output is identical
// across standard library implementations.

#include <cmath>
#include <cstdint>

namespace coupon_delay
{

class SplitMix64
{
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t operator()()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

//! xoshiro256** 1.0.
class Xoshiro256
{
  public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed)
    {
        SplitMix64 init(seed);
        for (auto& word : s_)
            word = init();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()()
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

//! Independent stream for replication `index` of a run seeded with `seed`.
inline Xoshiro256 replication_stream(std::uint64_t seed, std::uint64_t index)
{
    SplitMix64 mix(seed);
    const std::uint64_t a = mix();
    SplitMix64 mix_index(index ^ 0x6a09e667f3bcc909ULL);
    return Xoshiro256(a ^ mix_index());
}

//! Uniform on (0, 1): 53 random bits, never 0.
template<class Rng>
double uniform_open(Rng& rng)
{
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

//! Uniform on {0, ..., n-1} without modulo bias (Lemire).
template<class Rng>
std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
    unsigned __int128 product = static_cast<unsigned __int128>(rng()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n)
    {
        const std::uint64_t threshold = (0 - n) % n;
        while (low < threshold)
        {
            product = static_cast<unsigned __int128>(rng()) * n;
            low = static_cast<std::uint64_t>(product);
        }
    }
    return static_cast<std::uint64_t>(product >> 64);
}

//! Standard normal by the Marsaglia polar method (second value discarded).
template<class Rng>
double standard_normal(Rng& rng)
{
    for (;;)
    {
        const double u = 2.0 * uniform_open(rng) - 1.0;
        const double v = 2.0 * uniform_open(rng) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0)
            return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

//! Exp(1).
template<class Rng>
double standard_exponential(Rng& rng)
{
    return -std::log(uniform_open(rng));
}

//! Gamma(shape, 1) for shape >= 1 by Marsaglia-Tsang squeeze acceptance.
template<class Rng>
double standard_gamma(Rng& rng, double shape)
{
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;)
    {
        double x;
        double v;
        do
        {
            x = standard_normal(rng);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open(rng);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

} // namespace coupon_delay
