// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <gtest/gtest.h>

#include "ppmv/detector.hpp"
#include "ppmv/dsp.hpp"
#include "ppmv/transport.hpp"
#include "ppmv/validation.hpp"

using namespace ppmv;

namespace {

std::vector<BinFrame> loopback(const std::vector<std::int8_t>& signs, const PpmLayout& l, std::uint64_t seed)
{
    const OfdmConfig ofdm;
    auto rng = RngStream::derive(seed, Purpose::dither, {});
    const auto tx = encode_votes(signs, default_vote_map(l), l, draw_dithers(rng, l.q));
    std::vector<BinFrame> rx;
    for (const auto& s : tx) {
        rx.push_back(demodulate(strip_cp(modulate(s, ofdm), ofdm), ofdm));
    }
    return rx;
}

} // namespace

TEST(VoteEnergies, LoopbackPulseEnergy)
{
    const auto l = compute_layout(1200, 1, 7, 1);
    const auto rx = loopback({1}, l, 1);
    const auto e = vote_energies(rx, default_vote_map(l), l, 0);
    EXPECT_NEAR(e.plus, 16.0, 1e-9);
    EXPECT_NEAR(e.minus, 0.0, 1e-9);
}

TEST(VoteEnergies, ZeroFrames)
{
    const auto l = compute_layout(1200, 1, 7, 3);
    const std::vector<BinFrame> frames(1, BinFrame(1200));
    const auto e = vote_energies(frames, default_vote_map(l), l, 2);
    EXPECT_EQ(e.plus, 0.0);
    EXPECT_EQ(e.minus, 0.0);
}

TEST(VoteEnergies, OutOfRangeThrows)
{
    const auto l = compute_layout(1200, 1, 7, 100);
    const auto map = default_vote_map(l);
    const std::vector<BinFrame> one(1, BinFrame(1200));
    EXPECT_THROW(vote_energies(one, map, l, 100), std::invalid_argument);
    EXPECT_THROW(vote_energies(one, map, l, 80), std::invalid_argument);
}

TEST(DetectMv, SingleDeviceLoopbackIsExact)
{
    const auto l = compute_layout(1200, 1, 7, 300);
    const auto map = default_vote_map(l);
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
        auto rng = RngStream::derive(trial, Purpose::votes, {});
        std::vector<std::int8_t> signs(300);
        for (auto& s : signs) {
            s = rng.random_sign();
        }
        RngStream tie(trial);
        EXPECT_EQ(detect_mv(loopback(signs, l, trial), map, l, tie), signs);
    }
}

TEST(DetectMv, TieIsFairCoin)
{
    const auto l = compute_layout(1200, 1, 7, 1);
    std::vector<BinFrame> frames(1, BinFrame(1200));
    frames[0][0] = Complex{2.0, 0.0};
    frames[0][8] = Complex{0.0, 2.0};
    const auto map = default_vote_map(l);
    auto rng = RngStream::derive(4, Purpose::tie_break, {});
    int plus = 0;
    for (int t = 0; t < 10000; ++t) {
        plus += detect_mv(frames, map, l, rng)[0] > 0 ? 1 : 0;
    }
    EXPECT_NEAR(plus / 10000.0, 0.5, 0.02);
}

TEST(DetectMv, InvariantToCommonScale)
{
    const auto l = compute_layout(1200, 1, 7, 75);
    auto rng = RngStream::derive(5, Purpose::monte_carlo, {});
    std::vector<BinFrame> frames(1, BinFrame(1200));
    for (auto& v : frames[0]) {
        v = rng.complex_normal(1.0);
    }
    auto scaled = frames;
    for (auto& v : scaled[0]) {
        v *= Complex{-0.3, 2.1};
    }
    const auto map = default_vote_map(l);
    RngStream t1(1);
    RngStream t2(1);
    EXPECT_EQ(detect_mv(frames, map, l, t1), detect_mv(scaled, map, l, t2));
}

TEST(DetectMv, OtherVotesDoNotTouchWindow)
{
    const auto l = compute_layout(1200, 1, 7, 75);
    const auto map = default_vote_map(l);
    std::vector<std::int8_t> a(75, 1);
    std::vector<std::int8_t> b(75, -1);
    a[10] = -1;
    b[10] = -1;
    const auto ea = vote_energies(loopback(a, l, 1), map, l, 10);
    const auto eb = vote_energies(loopback(b, l, 2), map, l, 10);
    EXPECT_NEAR(ea.plus, eb.plus, 1e-9);
    EXPECT_NEAR(ea.minus, eb.minus, 1e-9);
}

TEST(DetectMv, ThreeAgainstOneOverFlatRayleigh)
{
    const auto r = validation::check_three_versus_one(10000, 3);
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(DetectMv, NoiseOnlyWindowEnergy)
{
    const auto r = validation::check_noise_energy(10000, 3);
    EXPECT_TRUE(r.passed) << r.detail;
}
