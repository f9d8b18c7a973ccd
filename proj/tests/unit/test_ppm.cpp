// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "ppmv/channel.hpp"
#include "ppmv/dsp.hpp"
#include "ppmv/ppm.hpp"

using namespace ppmv;

TEST(Layout, SymbolCountsForLargeModel)
{
    constexpr std::size_t q = 123090;
    const std::map<std::size_t, std::pair<std::size_t, std::size_t>> want{
        {1, {75, 1642}}, {3, {60, 2052}}, {8, {40, 3078}}, {13, {30, 4103}}};
    for (const auto& [m_pulse, expect] : want) {
        const auto l = compute_layout(1200, m_pulse, 7, q);
        EXPECT_EQ(l.m_vote, expect.first) << "m_pulse=" << m_pulse;
        EXPECT_EQ(l.n_symbols, expect.second) << "m_pulse=" << m_pulse;
    }
}

// A published table lists 4108 symbols for m_pulse = 13; ceil(123090 / 30) is 4103.
TEST(Layout, PulseWidthThirteenKnownDiscrepancy)
{
    const auto l = compute_layout(1200, 13, 7, 123090);
    EXPECT_EQ(l.n_symbols, 4103u);
    EXPECT_NE(l.n_symbols, 4108u);
}

TEST(Layout, EnergyNormalization)
{
    EXPECT_DOUBLE_EQ(compute_layout(1200, 1, 7, 1).e_s, 16.0);
    EXPECT_DOUBLE_EQ(compute_layout(1200, 2, 6, 1).e_s, 8.0);
    EXPECT_DOUBLE_EQ(compute_layout(1200, 13, 7, 1).e_s, 40.0 / 13.0);
}

TEST(Layout, RejectsImpossibleShapes)
{
    EXPECT_THROW(compute_layout(1200, 0, 7, 10), std::invalid_argument);
    EXPECT_THROW(compute_layout(1200, 1, 7, 0), std::invalid_argument);
    EXPECT_THROW(compute_layout(10, 3, 3, 1), std::invalid_argument);
}

TEST(Guard, EpaWithSyncErrorNeedsFiveBins)
{
    const OfdmConfig ofdm;
    const GuardTiming g{epa_profile().max_excess_delay_ns() * 1e-9, 55.6e-9, ofdm.bin_spacing_s()};
    EXPECT_EQ(g.min_gap(), 5u);
    EXPECT_NO_THROW(compute_layout(1200, 1, 7, 10, g));
    try {
        compute_layout(1200, 1, 3, 10, g);
        FAIL() << "expected a guard violation";
    } catch (const GuardViolation& e) {
        EXPECT_EQ(e.min_m_gap(), 5u);
        EXPECT_NE(std::string(e.what()).find('5'), std::string::npos);
    }
}

TEST(Guard, ExactMultipleDoesNotRoundUp)
{
    const GuardTiming g{100e-9, 0.0, 50e-9};
    EXPECT_EQ(g.min_gap(), 2u);
}

TEST(VoteMap, DistinctPositionsCoverAllSlots)
{
    const auto l = compute_layout(1200, 1, 7, 300);
    const auto map = default_vote_map(l);
    ASSERT_EQ(map.size(), 300u);
    std::set<PulsePosition> seen;
    for (const auto& v : map) {
        EXPECT_TRUE(seen.insert(v.plus).second);
        EXPECT_TRUE(seen.insert(v.minus).second);
        EXPECT_LT(v.plus.slot, l.slots_per_symbol());
        EXPECT_LT(v.plus.symbol, l.n_symbols);
    }
    EXPECT_EQ(seen.size(), 600u);
    EXPECT_NO_THROW(check_vote_map(map, l));
}

TEST(VoteMap, MinusSlotPrecedesPlusSlot)
{
    const auto l = compute_layout(1200, 1, 7, 160);
    const auto map = default_vote_map(l);
    EXPECT_EQ(map[0].minus, (PulsePosition{0, 0}));
    EXPECT_EQ(map[0].plus, (PulsePosition{0, 1}));
    EXPECT_EQ(map[74].plus, (PulsePosition{0, 149}));
    EXPECT_EQ(map[75].minus, (PulsePosition{1, 0}));
    EXPECT_EQ(map[159].plus, (PulsePosition{2, 19}));
}

TEST(VoteMap, CheckRejectsReuse)
{
    const auto l = compute_layout(1200, 1, 7, 4);
    auto map = default_vote_map(l);
    map[2].plus = map[1].minus;
    EXPECT_THROW(check_vote_map(map, l), std::invalid_argument);
    map = default_vote_map(l);
    map[0].plus.slot = l.slots_per_symbol();
    EXPECT_THROW(check_vote_map(map, l), std::invalid_argument);
}

TEST(PulseWeights, AlternatingSigns)
{
    const auto w1 = pulse_weights(compute_layout(1200, 1, 7, 1));
    ASSERT_EQ(w1.size(), 1u);
    EXPECT_DOUBLE_EQ(w1[0].real(), 4.0);
    const auto w2 = pulse_weights(compute_layout(1200, 2, 6, 1));
    ASSERT_EQ(w2.size(), 2u);
    EXPECT_NEAR(w2[0].real(), std::sqrt(8.0), 1e-15);
    EXPECT_NEAR(w2[1].real(), -std::sqrt(8.0), 1e-15);
}

TEST(Encode, SinglePlusVote)
{
    const auto l = compute_layout(1200, 1, 7, 1);
    const std::vector<std::int8_t> signs{1};
    const ComplexVec dither{Complex{1.0, 0.0}};
    const auto frames = encode_votes(signs, default_vote_map(l), l, dither);
    ASSERT_EQ(frames.size(), 1u);
    for (std::size_t n = 0; n < frames[0].size(); ++n) {
        EXPECT_EQ(frames[0][n], (n == 8 ? Complex{4.0, 0.0} : Complex{})) << "bin " << n;
    }
}

TEST(Encode, SingleMinusVote)
{
    const auto l = compute_layout(1200, 1, 7, 1);
    const std::vector<std::int8_t> signs{-1};
    const ComplexVec dither{Complex{1.0, 0.0}};
    const auto frames = encode_votes(signs, default_vote_map(l), l, dither);
    for (std::size_t n = 0; n < frames[0].size(); ++n) {
        EXPECT_EQ(frames[0][n], (n == 0 ? Complex{4.0, 0.0} : Complex{})) << "bin " << n;
    }
}

TEST(Encode, FullSymbolEnergyIsM)
{
    for (std::size_t m_pulse : {1u, 3u, 8u, 13u}) {
        const auto l0 = compute_layout(1200, m_pulse, 7, 1);
        const auto l = compute_layout(1200, m_pulse, 7, l0.m_vote);
        auto rng = RngStream::derive(1, Purpose::votes, {m_pulse});
        std::vector<std::int8_t> signs(l.q);
        for (auto& s : signs) {
            s = rng.random_sign();
        }
        const auto frames = encode_votes(signs, default_vote_map(l), l, draw_dithers(rng, l.q));
        double e = 0.0;
        for (const auto& v : frames[0]) {
            e += std::norm(v);
        }
        EXPECT_NEAR(e, 1200.0, 1e-9) << "m_pulse=" << m_pulse;
    }
}

TEST(Encode, RejectsBadInput)
{
    const auto l = compute_layout(1200, 1, 7, 2);
    const auto map = default_vote_map(l);
    const ComplexVec dither(2, Complex{1.0, 0.0});
    EXPECT_THROW(encode_votes(std::vector<std::int8_t>{1, 0}, map, l, dither), std::invalid_argument);
    EXPECT_THROW(encode_votes(std::vector<std::int8_t>{1}, map, l, dither), std::invalid_argument);
}

TEST(Dither, QpskPointsUniform)
{
    auto rng = RngStream::derive(9, Purpose::dither, {});
    const auto d = draw_dithers(rng, 100000);
    std::map<std::pair<int, int>, int> counts;
    for (const auto& v : d) {
        ASSERT_NEAR(std::abs(v), 1.0, 1e-12);
        ASSERT_NEAR(std::abs(v.real()), std::sqrt(0.5), 1e-12);
        counts[{v.real() > 0 ? 1 : -1, v.imag() > 0 ? 1 : -1}]++;
    }
    ASSERT_EQ(counts.size(), 4u);
    for (const auto& [point, c] : counts) {
        EXPECT_NEAR(c / 100000.0, 0.25, 0.01);
    }
}
