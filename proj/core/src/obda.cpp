// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/obda.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ppmv {

TciConfig TciConfig::normalized(double threshold)
{
    if (!(threshold >= 0.0)) {
        throw std::invalid_argument("TCI threshold must be non-negative");
    }
    TciConfig tci;
    tci.threshold = threshold;
    // E1(x) = -Ei(-x); diverges at zero, where no normalization is applied.
    tci.power_scale = threshold > 0.0 ? 1.0 / std::sqrt(-std::expint(-threshold * threshold)) : 1.0;
    return tci;
}

std::size_t obda_symbol_count(std::size_t q, std::size_t m_bins)
{
    if (m_bins == 0) {
        throw std::invalid_argument("m_bins must be positive");
    }
    return (q + 2 * m_bins - 1) / (2 * m_bins);
}

std::vector<ComplexVec> obda_encode(std::span<const std::int8_t> signs,
                                    std::span<const Complex> h_freq, const TciConfig& tci,
                                    bool use_tci, std::size_t m_bins)
{
    if (use_tci && h_freq.size() != m_bins) {
        throw std::invalid_argument("obda_encode: TCI needs one channel value per subcarrier");
    }
    const std::size_t q = signs.size();
    const std::size_t n_symbols = obda_symbol_count(q, m_bins);
    const double amp = 1.0 / std::sqrt(2.0);
    std::vector<ComplexVec> frames(n_symbols, ComplexVec(m_bins, Complex{}));

    auto component = [&](std::size_t idx) -> double {
        if (idx >= q) {
            return 0.0;
        }
        const std::int8_t s = signs[idx];
        if (s != 1 && s != -1) {
            throw std::invalid_argument("obda_encode: sign at index " + std::to_string(idx) +
                                        " is not +1/-1");
        }
        return static_cast<double>(s);
    };

    for (std::size_t c = 0; 2 * c < q; ++c) {
        const std::size_t m = c / m_bins;
        const std::size_t j = c % m_bins;
        Complex value = amp * Complex{component(2 * c), component(2 * c + 1)};
        if (use_tci) {
            const Complex h = h_freq[j];
            value = std::abs(h) >= tci.threshold && std::abs(h) > 0.0
                        ? value / h * tci.power_scale
                        : Complex{};
        }
        frames[m][j] = value;
    }
    return frames;
}

SignVector obda_detect(std::span<const ComplexVec> frames, std::size_t q, RngStream& tie_break)
{
    SignVector mv(q);
    for (std::size_t idx = 0; idx < q; ++idx) {
        const std::size_t c = idx / 2;
        std::size_t m = 0;
        std::size_t j = c;
        while (m < frames.size() && j >= frames[m].size()) {
            j -= frames[m].size();
            ++m;
        }
        if (m >= frames.size()) {
            throw std::invalid_argument("obda_detect: frames carry fewer than q votes");
        }
        const Complex v = frames[m][j];
        mv[idx] = sign_or_random(idx % 2 == 0 ? v.real() : v.imag(), tie_break);
    }
    return mv;
}

} // namespace ppmv
