// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <gtest/gtest.h>

#include <cmath>

#include "ppmv/channel.hpp"
#include "ppmv/obda.hpp"
#include "ppmv/training.hpp"
#include "ppmv/transport.hpp"

using namespace ppmv;

TEST(Obda, SymbolCount)
{
    EXPECT_EQ(obda_symbol_count(123090, 1200), 52u);
    EXPECT_EQ(obda_symbol_count(2400, 1200), 1u);
    EXPECT_EQ(obda_symbol_count(2401, 1200), 2u);
    EXPECT_EQ(obda_symbol_count(1, 1200), 1u);
}

TEST(Obda, NormalizationUsesExponentialIntegral)
{
    // E1(0.04) from its series -gamma - ln x + sum (-1)^{k+1} x^k / (k k!).
    const double x = 0.04;
    double series = -0.5772156649015329 - std::log(x);
    double term = 1.0;
    for (int k = 1; k < 30; ++k) {
        term *= x / k;
        series += (k % 2 ? 1.0 : -1.0) * term / k;
    }
    const auto tci = TciConfig::normalized(0.2);
    EXPECT_NEAR(tci.power_scale, 1.0 / std::sqrt(series), 1e-12);
    EXPECT_NEAR(series, 2.68126, 1e-5);
    EXPECT_DOUBLE_EQ(TciConfig::normalized(0.0).power_scale, 1.0);
    EXPECT_THROW(TciConfig::normalized(-1.0), std::invalid_argument);
}

TEST(Obda, EncodeWithoutTciIsQpsk)
{
    const std::vector<std::int8_t> signs{1, -1, -1, -1, 1};
    const auto frames = obda_encode(signs, {}, TciConfig{}, false, 4);
    ASSERT_EQ(frames.size(), 1u);
    const double a = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(frames[0][0], (Complex{a, -a}));
    EXPECT_EQ(frames[0][1], (Complex{-a, -a}));
    EXPECT_EQ(frames[0][2], (Complex{a, 0.0}));
    EXPECT_EQ(frames[0][3], Complex{});
}

TEST(Obda, EncodeSpillsIntoNextSymbol)
{
    const std::vector<std::int8_t> signs(10, 1);
    const auto frames = obda_encode(signs, {}, TciConfig{}, false, 4);
    ASSERT_EQ(frames.size(), 2u);
    EXPECT_NE(frames[1][0], Complex{});
    EXPECT_EQ(frames[1][1], Complex{});
}

TEST(Obda, TciInvertsAndMutes)
{
    const std::vector<std::int8_t> signs{1, 1, 1, 1};
    const ComplexVec h{Complex{0.0, 2.0}, Complex{0.1, 0.0}};
    const TciConfig tci{0.2, 0.5};
    const auto frames = obda_encode(signs, h, tci, true, 2);
    const double a = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(frames[0][0] - Complex{a, a} / h[0] * 0.5), 0.0, 1e-15);
    EXPECT_EQ(frames[0][1], Complex{});
    EXPECT_THROW(obda_encode(signs, ComplexVec(1), tci, true, 2), std::invalid_argument);
}

TEST(Obda, DetectRoundTrip)
{
    auto rng = RngStream::derive(1, Purpose::votes, {});
    std::vector<std::int8_t> signs(5000);
    for (auto& s : signs) {
        s = rng.random_sign();
    }
    const auto frames = obda_encode(signs, {}, TciConfig{}, false, 1200);
    RngStream tie(1);
    EXPECT_EQ(obda_detect(frames, signs.size(), tie), signs);
    EXPECT_THROW(obda_detect(frames, 8000, tie), std::invalid_argument);
}

TEST(Obda, PerfectInversionMatchesIdealVote)
{
    constexpr std::size_t k_devices = 5;
    constexpr std::size_t q = 3000;
    const OfdmConfig ofdm;
    ObdaTransport obda(ofdm, q, TciConfig{0.0, 1.0}, true, {epa_profile(), 0.0, 0.0});
    for (std::size_t round = 0; round < 3; ++round) {
        auto rng = RngStream::derive(2, Purpose::votes, {round});
        std::vector<SignVector> votes(k_devices, SignVector(q));
        for (auto& v : votes) {
            for (auto& s : v) {
                s = rng.random_sign();
            }
        }
        RngStream tie(0);
        EXPECT_EQ(obda.aggregate(votes, RoundContext{2, round, 1}), ideal_mv(votes, tie));
    }
}

TEST(Obda, AirtimeCountsSymbols)
{
    const OfdmConfig ofdm;
    ObdaTransport obda(ofdm, 123090, TciConfig{}, true, {});
    EXPECT_NEAR(obda.airtime_s(), 52 * 2192 / 30.72e6, 1e-12);
}
