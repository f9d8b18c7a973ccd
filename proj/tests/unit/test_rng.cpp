// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "ppmv/parallel.hpp"
#include "ppmv/rng.hpp"

using namespace ppmv;

TEST(RngStream, SamePathGivesSameSequence)
{
    auto a = RngStream::derive(7, Purpose::channel, {3, 4});
    auto b = RngStream::derive(7, Purpose::channel, {3, 4});
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.engine()(), b.engine()());
    }
}

TEST(RngStream, DistinctPathsDiffer)
{
    std::set<std::uint64_t> firsts;
    for (std::uint64_t purpose = 1; purpose <= 13; ++purpose) {
        for (std::uint64_t r = 0; r < 10; ++r) {
            firsts.insert(RngStream::derive(7, static_cast<Purpose>(purpose), {r}).engine()());
        }
    }
    firsts.insert(RngStream::derive(8, Purpose::channel, {0}).engine()());
    EXPECT_EQ(firsts.size(), 13u * 10u + 1u);
}

TEST(RngStream, PathOrderMatters)
{
    EXPECT_NE(RngStream::derive(1, {2, 3}).engine()(), RngStream::derive(1, {3, 2}).engine()());
}

TEST(RngStream, ComplexNormalVariance)
{
    auto rng = RngStream::derive(11, Purpose::monte_carlo, {});
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        sum += std::norm(rng.complex_normal(2.5));
    }
    EXPECT_NEAR(sum / n, 2.5, 0.03);
}

TEST(SignOrRandom, NonZeroIsDeterministic)
{
    RngStream rng(1);
    EXPECT_EQ(sign_or_random(0.3, rng), 1);
    EXPECT_EQ(sign_or_random(-1e-300, rng), -1);
}

TEST(SignOrRandom, ZeroIsFairCoin)
{
    RngStream rng(5);
    int plus = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        plus += sign_or_random(0.0, rng) > 0 ? 1 : 0;
    }
    EXPECT_NEAR(plus / double(n), 0.5, 0.02);
}

TEST(ParallelFor, CoversEveryIndexOnce)
{
    for (std::size_t threads : {1u, 3u, 8u}) {
        std::vector<int> hits(1001, 0);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) {
            ASSERT_EQ(h, 1);
        }
    }
}

TEST(ParallelFor, PropagatesExceptions)
{
    EXPECT_THROW(parallel_for(10, 4, [](std::size_t i) {
                     if (i == 7) {
                         throw std::runtime_error("boom");
                     }
                 }),
                 std::runtime_error);
}
