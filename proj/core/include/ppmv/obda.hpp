// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// Coherent one-bit digital aggregation baseline: two votes per OFDM
// subcarrier as a QPSK point, optionally pre-equalized by truncated channel
// inversion (TCI).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ppmv/rng.hpp"
#include "ppmv/types.hpp"

namespace ppmv {

struct TciConfig {
    double threshold = 0.2;   ///< subcarriers with |h| below this are muted
    double power_scale = 1.0;

    /// power_scale = 1 / sqrt(E[|h|^-2 ; |h| >= threshold]) for a unit-power
    /// Rayleigh subcarrier, i.e. 1 / sqrt(E1(threshold^2)); keeps the expected
    /// frame energy at M. threshold 0 yields power_scale 1.
    static TciConfig normalized(double threshold);
};

/// ceil(q / (2 * m_bins)) OFDM symbols.
std::size_t obda_symbol_count(std::size_t q, std::size_t m_bins);

/// Subcarrier values of each symbol. Sign 2c drives the real part and sign
/// 2c + 1 the imaginary part of subcarrier c (counted across symbols). With
/// use_tci, subcarrier j is multiplied by 1 / h_freq[j] or muted, and the
/// whole frame by power_scale.
std::vector<ComplexVec> obda_encode(std::span<const std::int8_t> signs,
                                    std::span<const Complex> h_freq, const TciConfig& tci,
                                    bool use_tci, std::size_t m_bins);

/// Signs of the real and imaginary parts of the superposed subcarriers.
SignVector obda_detect(std::span<const ComplexVec> frames, std::size_t q, RngStream& tie_break);

} // namespace ppmv
