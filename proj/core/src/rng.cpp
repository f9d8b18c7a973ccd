// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/rng.hpp"

#include <cmath>

namespace ppmv {

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream RngStream::derive(std::uint64_t master, std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = mix64(master);
    for (std::uint64_t id : path) {
        h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
    }
    return RngStream(h);
}

RngStream RngStream::derive(std::uint64_t master, Purpose purpose,
                            std::initializer_list<std::uint64_t> path)
{
    std::uint64_t h = mix64(master ^ mix64(static_cast<std::uint64_t>(purpose)));
    for (std::uint64_t id : path) {
        h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
    }
    return RngStream(h);
}

Complex RngStream::complex_normal(double variance)
{
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

std::int8_t sign_or_random(double value, RngStream& rng)
{
    if (value > 0.0) {
        return 1;
    }
    if (value < 0.0) {
        return -1;
    }
    return rng.random_sign();
}

} // namespace ppmv
