// SPDX-License-Identifier: Apache-2.0
//
// d2dcache: coverage analysis and cache-energy optimization for clustered
// device-to-device networks.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace d2dcache {

/// SplitMix64 finalizer; bijective scrambler used for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// xoshiro256** generator with counter-derived streams.
///
/// One master seed plus a stream index identifies a generator state, so any
/// realization can be reproduced in isolation and parallel runs agree with
/// serial ones regardless of scheduling. All samplers are implemented from
/// raw uniforms (no std::*_distribution) to keep sequences identical across
/// standard library implementations.
class RngStream {
  public:
    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream = 0) noexcept {
        std::uint64_t sm = mix64(master_seed ^ mix64(stream + 0x51ed2701ab0bcd1fULL));
        bool nonzero = false;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            word = mix64(sm);
            nonzero |= (word != 0);
        }
        if (!nonzero)
            state_[0] = 1;
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1]; safe as a log() argument.
    double uniform_pos() noexcept {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Unit-mean exponential variate.
    double exponential() noexcept { return -std::log(uniform_pos()); }

    /// One pair of independent N(0, sigma^2) variates (Box-Muller).
    std::pair<double, double> gaussian_pair(double sigma) noexcept {
        const double radius = sigma * std::sqrt(-2.0 * std::log(uniform_pos()));
        const double angle = 2.0 * std::numbers::pi * uniform();
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    /// Uniform point on the disc of the given radius centered at the origin.
    std::pair<double, double> disc_point(double radius) noexcept {
        const double r = radius * std::sqrt(uniform());
        const double angle = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(angle), r * std::sin(angle)};
    }

    /// Poisson variate by Knuth's product method, chunked via Poisson
    /// additivity so exp(-mean) never underflows.
    std::uint64_t poisson(double mean) noexcept {
        std::uint64_t total = 0;
        double remaining = mean;
        while (remaining > 0.0) {
            const double chunk = remaining > 500.0 ? 500.0 : remaining;
            const double limit = std::exp(-chunk);
            std::uint64_t k = 0;
            double product = uniform_pos();
            while (product > limit) {
                ++k;
                product *= uniform_pos();
            }
            total += k;
            remaining -= chunk;
        }
        return total;
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

} // namespace d2dcache
