// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/ppm.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace ppmv {

std::size_t GuardTiming::min_gap() const
{
    if (!(t_spacing_s > 0.0)) {
        throw std::invalid_argument("bin spacing must be positive");
    }
    // Small slack so that exact multiples do not round up through FP noise.
    const double ratio = (t_chn_s + t_sync_s) / t_spacing_s;
    return static_cast<std::size_t>(std::ceil(ratio - 1e-9));
}

GuardViolation::GuardViolation(std::size_t m_gap, std::size_t min_m_gap)
    : ConfigError("m_gap = " + std::to_string(m_gap) +
                  " cannot absorb the delay spread plus sync error; minimum m_gap is " +
                  std::to_string(min_m_gap)),
      min_m_gap_(min_m_gap)
{
}

PpmLayout compute_layout(std::size_t m_bins, std::size_t m_pulse, std::size_t m_gap, std::size_t q,
                         const std::optional<GuardTiming>& timing)
{
    if (m_pulse == 0) {
        throw std::invalid_argument("m_pulse must be at least 1");
    }
    if (q == 0) {
        throw std::invalid_argument("q must be at least 1");
    }
    if (2 * (m_pulse + m_gap) > m_bins) {
        throw std::invalid_argument("one vote needs 2*(m_pulse+m_gap) = " +
                                    std::to_string(2 * (m_pulse + m_gap)) + " bins but only " +
                                    std::to_string(m_bins) + " exist");
    }
    if (timing) {
        const std::size_t min_gap = timing->min_gap();
        if (m_gap < min_gap) {
            throw GuardViolation(m_gap, min_gap);
        }
    }

    PpmLayout layout;
    layout.m_bins = m_bins;
    layout.m_pulse = m_pulse;
    layout.m_gap = m_gap;
    layout.q = q;
    layout.m_vote = m_bins / (2 * (m_pulse + m_gap));
    layout.n_symbols = (q + layout.m_vote - 1) / layout.m_vote;
    layout.e_s = 2.0 * static_cast<double>(m_pulse + m_gap) / static_cast<double>(m_pulse);
    return layout;
}

VoteAssignment default_vote_map(const PpmLayout& layout)
{
    VoteAssignment map(layout.q);
    for (std::size_t i = 0; i < layout.q; ++i) {
        const std::size_t t = i / layout.m_vote;
        const std::size_t j = i % layout.m_vote;
        map[i].minus = {t, 2 * j};
        map[i].plus = {t, 2 * j + 1};
    }
    return map;
}

void check_vote_map(const VoteAssignment& map, const PpmLayout& layout)
{
    if (map.size() < layout.q) {
        throw std::invalid_argument("vote map covers fewer than q indices");
    }
    std::set<PulsePosition> seen;
    auto claim = [&](const PulsePosition& p) {
        if (p.symbol >= layout.n_symbols || p.slot >= layout.slots_per_symbol()) {
            throw std::invalid_argument("vote map position outside the layout");
        }
        if (!seen.insert(p).second) {
            throw std::invalid_argument("vote map reuses a pulse position");
        }
    };
    for (std::size_t i = 0; i < layout.q; ++i) {
        claim(map[i].plus);
        claim(map[i].minus);
    }
}

ComplexVec pulse_weights(const PpmLayout& layout)
{
    const double amp = std::sqrt(layout.e_s);
    ComplexVec p(layout.m_pulse);
    for (std::size_t n = 0; n < layout.m_pulse; ++n) {
        p[n] = (n % 2 == 0) ? amp : -amp;
    }
    return p;
}

DitherVector draw_dithers(RngStream& rng, std::size_t q)
{
    static const Complex kQpsk[4] = {
        std::polar(1.0, kPi / 4), std::polar(1.0, 3 * kPi / 4),
        std::polar(1.0, 5 * kPi / 4), std::polar(1.0, 7 * kPi / 4)};
    DitherVector r(q);
    for (auto& v : r) {
        v = kQpsk[rng.uniform_int(0, 3)];
    }
    return r;
}

std::vector<BinFrame> encode_votes(std::span<const std::int8_t> signs, const VoteAssignment& map,
                                   const PpmLayout& layout, std::span<const Complex> dither)
{
    if (signs.size() != layout.q) {
        throw std::invalid_argument("encode_votes: expected " + std::to_string(layout.q) +
                                    " signs, got " + std::to_string(signs.size()));
    }
    if (map.size() < layout.q || dither.size() < layout.q) {
        throw std::invalid_argument("encode_votes: vote map or dither shorter than q");
    }
    const ComplexVec pulse = pulse_weights(layout);
    std::vector<BinFrame> frames(layout.n_symbols, BinFrame(layout.m_bins, Complex{}));
    for (std::size_t i = 0; i < layout.q; ++i) {
        const std::int8_t s = signs[i];
        if (s != 1 && s != -1) {
            throw std::invalid_argument("encode_votes: sign at index " + std::to_string(i) +
                                        " is not +1/-1");
        }
        const PulsePosition& pos = s == 1 ? map[i].plus : map[i].minus;
        BinFrame& frame = frames.at(pos.symbol);
        const std::size_t start = pos.slot * layout.slot_width();
        for (std::size_t n = 0; n < layout.m_pulse; ++n) {
            frame.at(start + n) = pulse[n] * dither[i];
        }
    }
    return frames;
}

} // namespace ppmv
