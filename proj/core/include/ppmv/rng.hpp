// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "ppmv/types.hpp"

namespace ppmv {

/// Named sub-streams. Every random draw in a run is keyed by
/// (master seed, purpose, round, entity) so results do not depend on the
/// order in which entities are processed.
enum class Purpose : std::uint64_t {
    data = 1,
    partition,
    batch,
    gradient_sign,
    dither,
    channel,
    timing,
    noise,
    tie_break,
    ideal_tie,
    init,
    votes,
    monte_carlo,
};

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream keyed by a master seed and an arbitrary path of identifiers.
    static RngStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> path);
    static RngStream derive(std::uint64_t master, Purpose purpose,
                            std::initializer_list<std::uint64_t> path = {});

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    Complex complex_normal(double variance);

    /// Uniform on {lo, ..., hi}.
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
        return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
    }

    /// Fair +1/-1.
    std::int8_t random_sign() { return uniform_int(0, 1) == 0 ? std::int8_t{-1} : std::int8_t{1}; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// sign() with a random pick at exactly zero.
std::int8_t sign_or_random(double value, RngStream& rng);

} // namespace ppmv
