// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "ppmv/channel.hpp"
#include "ppmv/validation.hpp"

using namespace ppmv;
using namespace ppmv::testing;

TEST(Profile, EpaDelaySpread)
{
    const auto p = epa_profile();
    EXPECT_NO_THROW(p.validate());
    // Independent evaluation of the second central moment.
    double ps = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t l = 0; l < p.tap_delays_ns.size(); ++l) {
        const double w = std::pow(10.0, p.tap_powers_db[l] / 10.0);
        ps += w;
        m1 += w * p.tap_delays_ns[l];
        m2 += w * p.tap_delays_ns[l] * p.tap_delays_ns[l];
    }
    const double rms = std::sqrt(m2 / ps - (m1 / ps) * (m1 / ps));
    EXPECT_NEAR(p.rms_delay_spread_ns(), rms, 1e-9);
    EXPECT_NEAR(p.rms_delay_spread_ns(), 43.1, 0.05);
    EXPECT_NEAR(p.max_excess_delay_ns(), 172.5, 0.1);
}

TEST(Profile, NormalizedPowersSumToOne)
{
    const auto w = epa_profile().normalized_powers();
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
}

TEST(Profile, ValidationErrors)
{
    EXPECT_THROW((PowerDelayProfile{{0.0, 10.0}, {0.0}}.validate()), std::invalid_argument);
    EXPECT_THROW((PowerDelayProfile{{10.0, 5.0}, {0.0, 0.0}}.validate()), std::invalid_argument);
    EXPECT_THROW((PowerDelayProfile{{-1.0}, {0.0}}.validate()), std::invalid_argument);
    EXPECT_THROW((PowerDelayProfile{{}, {}}.validate()), std::invalid_argument);
    EXPECT_THROW(profile_by_name("eva"), ConfigError);
}

TEST(DrawChannel, TapPositionsRoundedToSamples)
{
    auto rng = RngStream::derive(1, Purpose::channel, {});
    const auto chn = draw_channel(epa_profile(), rng, 30.72e6, 144);
    std::vector<std::size_t> pos;
    for (const auto& t : chn.taps) {
        pos.push_back(t.position);
    }
    EXPECT_EQ(pos, (std::vector<std::size_t>{0, 1, 2, 3, 3, 6, 13}));
    EXPECT_EQ(chn.timing_offset, 0u);
}

TEST(DrawChannel, TapPowersMatchProfile)
{
    const auto want = epa_profile().normalized_powers();
    std::vector<double> got(want.size(), 0.0);
    auto rng = RngStream::derive(2, Purpose::channel, {});
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const auto chn = draw_channel(epa_profile(), rng, 30.72e6, 144);
        for (std::size_t l = 0; l < want.size(); ++l) {
            got[l] += std::norm(chn.taps[l].gain);
        }
    }
    for (std::size_t l = 0; l < want.size(); ++l) {
        EXPECT_NEAR(got[l] / n, want[l], 0.03 * want[l] + 1e-4) << "tap " << l;
    }
}

TEST(DrawChannel, FlatPhaseIsCircularlySymmetric)
{
    auto rng = RngStream::derive(3, Purpose::channel, {});
    Complex mean{};
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Complex g = draw_channel(flat_profile(), rng, 30.72e6, 144).taps[0].gain;
        mean += g / std::abs(g);
    }
    EXPECT_LT(std::abs(mean / double(n)), 0.01);
}

TEST(DrawChannel, RejectsProfileLongerThanCp)
{
    auto rng = RngStream::derive(3, Purpose::channel, {});
    EXPECT_THROW(draw_channel(epa_profile(), rng, 30.72e6, 10), ConfigError);
}

TEST(TimingOffset, SupportAndUniformity)
{
    auto rng = RngStream::derive(4, Purpose::timing, {});
    EXPECT_EQ(draw_timing_offset(rng, 0.0, 30.72e6), 0u);
    std::vector<int> hist(3, 0);
    for (int i = 0; i < 30000; ++i) {
        const auto d = draw_timing_offset(rng, 55.6e-9, 30.72e6);
        ASSERT_LE(d, 2u);
        hist[d]++;
    }
    for (int h : hist) {
        EXPECT_NEAR(h / 30000.0, 1.0 / 3.0, 0.015);
    }
    const auto r = validation::check_timing_offsets(100000, 4);
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(ChiSquareCritical, KnownQuantiles)
{
    EXPECT_NEAR(validation::chi_square_critical(2, 2.326348), 9.21, 0.15);
    EXPECT_NEAR(validation::chi_square_critical(6, 2.326348), 16.81, 0.1);
}

TEST(ApplyChannel, IdentityAndDelay)
{
    auto rng = RngStream::derive(5, Purpose::monte_carlo, {});
    const auto x = random_complex(rng, 50);
    EXPECT_EQ(apply_channel(x, ChannelRealization::identity()), x);
    ChannelRealization chn{{Tap{2, Complex{0.5, 0.0}}}, 3};
    const auto y = apply_channel(x, chn);
    ASSERT_EQ(y.size(), x.size());
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(y[i], Complex{});
    }
    for (std::size_t i = 5; i < x.size(); ++i) {
        EXPECT_EQ(y[i], 0.5 * x[i - 5]);
    }
}

TEST(ApplyChannel, DemodulationSeesFrequencyResponse)
{
    const OfdmConfig c;
    auto rng = RngStream::derive(6, Purpose::channel, {});
    for (int trial = 0; trial < 3; ++trial) {
        auto chn = draw_channel(epa_profile(), rng, c.sample_rate_hz, c.cp_len);
        chn.timing_offset = static_cast<std::size_t>(trial);
        const auto s = random_complex(rng, c.m_bins);
        const auto got = demodulate_ofdm(strip_cp(apply_channel(modulate_ofdm(s, c), chn), c), c);

        // Oracle: zero-padded impulse response through a brute-force DFT.
        ComplexVec impulse(c.n_idft);
        for (const auto& t : chn.taps) {
            impulse[t.position + chn.timing_offset] += t.gain;
        }
        const auto big_h = brute_dft(impulse, -1);
        const auto h = frequency_response(chn, c, true);
        ComplexVec want(c.m_bins);
        for (std::size_t j = 0; j < c.m_bins; ++j) {
            const Complex hj = big_h[c.first_subcarrier + j] * std::sqrt(double(c.n_idft));
            ASSERT_LT(std::abs(hj - h[j]), 1e-8);
            want[j] = hj * s[j];
        }
        EXPECT_LT(max_abs_diff(got, want), 1e-8);
    }
}

TEST(FrequencyResponse, TimingOffsetOptional)
{
    const OfdmConfig c;
    ChannelRealization chn{{Tap{0, Complex{1.0, 0.0}}}, 4};
    const auto without = frequency_response(chn, c, false);
    const auto with = frequency_response(chn, c, true);
    EXPECT_NEAR(std::abs(without[10] - Complex{1.0, 0.0}), 0.0, 1e-12);
    EXPECT_NEAR(std::arg(with[0]), std::arg(std::polar(1.0, -2.0 * kPi * 424.0 * 4.0 / 2048.0)), 1e-12);
}

TEST(Superpose, NoiseVariance)
{
    auto rng = RngStream::derive(7, Purpose::noise, {});
    const std::vector<ComplexVec> zeros(2, ComplexVec(100000));
    const auto y = superpose(zeros, 1.0, rng);
    EXPECT_NEAR(energy(y) / y.size(), 1.0, 0.03);
}

TEST(Superpose, NoiselessSumIsPermutationInvariant)
{
    auto rng = RngStream::derive(8, Purpose::monte_carlo, {});
    std::vector<ComplexVec> s;
    for (int k = 0; k < 5; ++k) {
        s.push_back(random_complex(rng, 64));
    }
    auto perm = s;
    std::reverse(perm.begin(), perm.end());
    RngStream unused(0);
    EXPECT_LT(max_abs_diff(superpose(s, 0.0, unused), superpose(perm, 0.0, unused)), 1e-12);
}

TEST(Superpose, RejectsBadInput)
{
    RngStream rng(1);
    EXPECT_THROW(superpose(std::vector<ComplexVec>{}, 0.0, rng), std::invalid_argument);
    EXPECT_THROW(superpose(std::vector<ComplexVec>{ComplexVec(3), ComplexVec(4)}, 0.0, rng),
                 std::invalid_argument);
    EXPECT_THROW(superpose(std::vector<ComplexVec>{ComplexVec(3)}, -1.0, rng), std::invalid_argument);
}
