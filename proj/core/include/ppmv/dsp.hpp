// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#pragma once

#include <cstddef>
#include <span>

#include "ppmv/types.hpp"

namespace ppmv {

/// DFT-s-OFDM numerology. The M occupied subcarriers are contiguous,
/// starting at first_subcarrier on an n_idft-point grid.
struct OfdmConfig {
    std::size_t n_idft = 2048;
    std::size_t m_bins = 1200;
    std::size_t cp_len = 144;
    std::size_t first_subcarrier = 424;
    double sample_rate_hz = 30.72e6;

    /// Band-centred placement: first_subcarrier = floor((n_idft - m_bins) / 2).
    static OfdmConfig centered(std::size_t n_idft, std::size_t m_bins, std::size_t cp_len,
                               double sample_rate_hz);

    /// Throws std::invalid_argument when the invariants do not hold.
    void validate() const;

    double sample_period_s() const { return 1.0 / sample_rate_hz; }
    /// Time between adjacent bins after spreading: n_idft * T_sample / m_bins.
    double bin_spacing_s() const;
    /// CP plus body.
    std::size_t symbol_length() const { return n_idft + cp_len; }
    double symbol_duration_s() const;
};

enum class Waveform {
    dft_spread, ///< IDFT_N * M_f * DFT_M (PPM transmitters)
    ofdm,       ///< IDFT_N * M_f (OBDA transmitters)
};

// Unitary transforms: both directions scale by 1/sqrt(N).
ComplexVec dft(std::span<const Complex> v);
ComplexVec idft(std::span<const Complex> v);

/// DFT-spread OFDM symbol with cyclic prefix; length n_idft + cp_len.
ComplexVec modulate(std::span<const Complex> bins, const OfdmConfig& cfg);

/// Plain OFDM symbol with cyclic prefix from M subcarrier values.
ComplexVec modulate_ofdm(std::span<const Complex> subcarriers, const OfdmConfig& cfg);

/// Drops the first cp_len samples of one received symbol.
ComplexVec strip_cp(std::span<const Complex> symbol, const OfdmConfig& cfg);

/// Bin estimates DFT_M^H * M_f^H * DFT_N * y from a CP-stripped symbol.
/// No frequency-domain equalization is applied.
BinFrame demodulate(std::span<const Complex> y, const OfdmConfig& cfg);

/// Occupied subcarrier values M_f^H * DFT_N * y from a CP-stripped symbol.
ComplexVec demodulate_ofdm(std::span<const Complex> y, const OfdmConfig& cfg);

/// Peak-to-mean envelope power ratio in dB. The continuous-time envelope is
/// approximated by an `oversample`-times zero-padded IDFT, and the mean
/// envelope power is the nominal M / n_idft.
double pmepr_db(std::span<const Complex> s, const OfdmConfig& cfg, std::size_t oversample = 4,
                Waveform waveform = Waveform::dft_spread);

/// Oversampled continuous-time envelope |x(t)|^2 of one symbol body.
std::vector<double> envelope_power(std::span<const Complex> s, const OfdmConfig& cfg,
                                   std::size_t oversample, Waveform waveform);

} // namespace ppmv
