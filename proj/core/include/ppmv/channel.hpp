// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// Block-fading tapped-delay-line channels, arrival-time offsets, and the
// additive superposition at the edge server.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ppmv/dsp.hpp"
#include "ppmv/rng.hpp"
#include "ppmv/types.hpp"

namespace ppmv {

struct PowerDelayProfile {
    std::vector<double> tap_delays_ns;
    std::vector<double> tap_powers_db;

    /// Throws std::invalid_argument unless delays are non-negative, strictly
    /// increasing, and paired one-to-one with powers.
    void validate() const;

    /// Linear tap powers scaled to sum to one.
    std::vector<double> normalized_powers() const;

    double mean_delay_ns() const;
    double rms_delay_spread_ns() const;

    /// Rule-of-thumb maximum excess delay, 4 * T_rms.
    double max_excess_delay_ns() const { return 4.0 * rms_delay_spread_ns(); }
};

/// ITU/3GPP Extended Pedestrian A.
PowerDelayProfile epa_profile();

/// Single Rayleigh tap at zero delay.
PowerDelayProfile flat_profile();

struct Tap {
    std::size_t position = 0; ///< samples
    Complex gain;
};

struct ChannelRealization {
    std::vector<Tap> taps;
    std::size_t timing_offset = 0; ///< samples

    /// Single unit tap at zero delay.
    static ChannelRealization identity();

    /// Largest tap position plus the timing offset.
    std::size_t extent() const;
};

/// Throws ConfigError if the delayed impulse response does not fit in the CP.
void check_within_cp(const ChannelRealization& chn, std::size_t cp_len);

/// Independent circularly-symmetric Gaussian taps with the profile's powers,
/// delays rounded to the nearest sample. timing_offset is left at zero.
ChannelRealization draw_channel(const PowerDelayProfile& profile, RngStream& rng,
                                double sample_rate_hz, std::size_t cp_len);

/// Uniform on {0, ..., round(t_sync * fs)}.
std::size_t draw_timing_offset(RngStream& rng, double t_sync_s, double sample_rate_hz);

/// Linear convolution with the taps, then a delay of timing_offset samples.
/// Output keeps the input length; the spill past the end is dropped.
ComplexVec apply_channel(std::span<const Complex> x_with_cp, const ChannelRealization& chn);

/// Sum of equal-length signals plus CN(0, sigma_n_sq) noise per sample.
ComplexVec superpose(std::span<const ComplexVec> signals, double sigma_n_sq, RngStream& rng);

/// Sum_l g_l * exp(-j 2 pi k d_l / N) on the M occupied subcarriers, where
/// d_l optionally includes the timing offset.
ComplexVec frequency_response(const ChannelRealization& chn, const OfdmConfig& cfg,
                              bool include_timing_offset);

/// Named profiles: "epa", "flat". Throws ConfigError for anything else.
PowerDelayProfile profile_by_name(const std::string& name);

} // namespace ppmv
