// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ppmv {

void PowerDelayProfile::validate() const
{
    if (tap_delays_ns.empty() || tap_delays_ns.size() != tap_powers_db.size()) {
        throw std::invalid_argument("power delay profile needs matching, non-empty delay/power lists");
    }
    for (std::size_t l = 0; l < tap_delays_ns.size(); ++l) {
        if (!(tap_delays_ns[l] >= 0.0) || !std::isfinite(tap_powers_db[l])) {
            throw std::invalid_argument("power delay profile has a negative delay or non-finite power");
        }
        if (l > 0 && !(tap_delays_ns[l] > tap_delays_ns[l - 1])) {
            throw std::invalid_argument("power delay profile delays must be strictly increasing");
        }
    }
}

std::vector<double> PowerDelayProfile::normalized_powers() const
{
    validate();
    std::vector<double> lin(tap_powers_db.size());
    std::transform(tap_powers_db.begin(), tap_powers_db.end(), lin.begin(),
                   [](double db) { return std::pow(10.0, db / 10.0); });
    const double total = std::accumulate(lin.begin(), lin.end(), 0.0);
    for (auto& p : lin) {
        p /= total;
    }
    return lin;
}

double PowerDelayProfile::mean_delay_ns() const
{
    const auto p = normalized_powers();
    return std::inner_product(p.begin(), p.end(), tap_delays_ns.begin(), 0.0);
}

double PowerDelayProfile::rms_delay_spread_ns() const
{
    const auto p = normalized_powers();
    const double mean = mean_delay_ns();
    double second = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) {
        second += p[l] * tap_delays_ns[l] * tap_delays_ns[l];
    }
    return std::sqrt(std::max(0.0, second - mean * mean));
}

PowerDelayProfile epa_profile()
{
    return {{0.0, 30.0, 70.0, 90.0, 110.0, 190.0, 410.0},
            {0.0, -1.0, -2.0, -3.0, -8.0, -17.2, -20.8}};
}

PowerDelayProfile flat_profile() { return {{0.0}, {0.0}}; }

PowerDelayProfile profile_by_name(const std::string& name)
{
    if (name == "epa") {
        return epa_profile();
    }
    if (name == "flat") {
        return flat_profile();
    }
    throw ConfigError("unknown channel profile '" + name + "'");
}

ChannelRealization ChannelRealization::identity()
{
    return {{Tap{0, Complex{1.0, 0.0}}}, 0};
}

std::size_t ChannelRealization::extent() const
{
    std::size_t last = 0;
    for (const auto& t : taps) {
        last = std::max(last, t.position);
    }
    return last + timing_offset;
}

void check_within_cp(const ChannelRealization& chn, std::size_t cp_len)
{
    if (chn.extent() >= cp_len) {
        throw ConfigError("channel extent of " + std::to_string(chn.extent()) +
                          " samples does not fit in a CP of " + std::to_string(cp_len) + " samples");
    }
}

ChannelRealization draw_channel(const PowerDelayProfile& profile, RngStream& rng,
                                double sample_rate_hz, std::size_t cp_len)
{
    if (!(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("sample rate must be positive");
    }
    const auto powers = profile.normalized_powers();
    ChannelRealization chn;
    chn.taps.reserve(powers.size());
    for (std::size_t l = 0; l < powers.size(); ++l) {
        const double samples = profile.tap_delays_ns[l] * 1e-9 * sample_rate_hz;
        chn.taps.push_back({static_cast<std::size_t>(std::lround(samples)), rng.complex_normal(powers[l])});
    }
    check_within_cp(chn, cp_len);
    return chn;
}

std::size_t draw_timing_offset(RngStream& rng, double t_sync_s, double sample_rate_hz)
{
    if (!(t_sync_s >= 0.0) || !(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("t_sync must be non-negative and the sample rate positive");
    }
    const auto max_offset = static_cast<std::uint64_t>(std::llround(t_sync_s * sample_rate_hz));
    return max_offset == 0 ? 0 : static_cast<std::size_t>(rng.uniform_int(0, max_offset));
}

ComplexVec apply_channel(std::span<const Complex> x_with_cp, const ChannelRealization& chn)
{
    const std::size_t n = x_with_cp.size();
    ComplexVec y(n, Complex{});
    for (const auto& tap : chn.taps) {
        const std::size_t shift = tap.position + chn.timing_offset;
        const double gr = tap.gain.real();
        const double gi = tap.gain.imag();
        // Plain product; std::complex operator* routes through the Annex G
        // NaN recovery path.
        for (std::size_t i = shift; i < n; ++i) {
            const Complex x = x_with_cp[i - shift];
            y[i] += Complex{gr * x.real() - gi * x.imag(), gr * x.imag() + gi * x.real()};
        }
    }
    return y;
}

ComplexVec superpose(std::span<const ComplexVec> signals, double sigma_n_sq, RngStream& rng)
{
    if (signals.empty()) {
        throw std::invalid_argument("superpose needs at least one signal");
    }
    if (!(sigma_n_sq >= 0.0)) {
        throw std::invalid_argument("noise variance must be non-negative");
    }
    const std::size_t n = signals.front().size();
    ComplexVec y(n, Complex{});
    for (const auto& s : signals) {
        if (s.size() != n) {
            throw std::invalid_argument("superpose: signal lengths differ");
        }
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += s[i];
        }
    }
    if (sigma_n_sq > 0.0) {
        for (auto& v : y) {
            v += rng.complex_normal(sigma_n_sq);
        }
    }
    return y;
}

ComplexVec frequency_response(const ChannelRealization& chn, const OfdmConfig& cfg,
                              bool include_timing_offset)
{
    ComplexVec h(cfg.m_bins, Complex{});
    const double n = static_cast<double>(cfg.n_idft);
    const std::size_t extra = include_timing_offset ? chn.timing_offset : 0;
    for (std::size_t j = 0; j < cfg.m_bins; ++j) {
        const double k = static_cast<double>(cfg.first_subcarrier + j);
        Complex acc{};
        for (const auto& tap : chn.taps) {
            const double d = static_cast<double>(tap.position + extra);
            acc += tap.gain * std::polar(1.0, -2.0 * kPi * k * d / n);
        }
        h[j] = acc;
    }
    return h;
}

} // namespace ppmv
