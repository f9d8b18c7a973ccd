// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// Pulse-position mapping of gradient signs onto DFT-s-OFDM bins. Each vote
// owns two slots of (m_pulse + m_gap) bins; the sign selects which of the two
// carries an alternating-sign pulse, the other stays empty.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ppmv/rng.hpp"
#include "ppmv/types.hpp"

namespace ppmv {

/// Delay budget the guard bins must absorb.
struct GuardTiming {
    double t_chn_s = 0.0;     ///< maximum excess delay of the channel
    double t_sync_s = 0.0;    ///< maximum arrival-time spread between devices
    double t_spacing_s = 0.0; ///< bin spacing after DFT spreading

    /// ceil((t_chn + t_sync) / t_spacing)
    std::size_t min_gap() const;
};

/// Thrown when m_gap is below GuardTiming::min_gap().
class GuardViolation : public ConfigError {
public:
    GuardViolation(std::size_t m_gap, std::size_t min_m_gap);
    std::size_t min_m_gap() const { return min_m_gap_; }

private:
    std::size_t min_m_gap_;
};

struct PpmLayout {
    std::size_t m_bins = 0;
    std::size_t m_pulse = 0;
    std::size_t m_gap = 0;
    std::size_t m_vote = 0;    ///< votes per DFT-s-OFDM symbol
    std::size_t n_symbols = 0; ///< symbols needed for q votes
    std::size_t q = 0;
    double e_s = 0.0;          ///< per-bin pulse energy normalization

    std::size_t slot_width() const { return m_pulse + m_gap; }
    std::size_t slots_per_symbol() const { return 2 * m_vote; }
};

PpmLayout compute_layout(std::size_t m_bins, std::size_t m_pulse, std::size_t m_gap, std::size_t q,
                         const std::optional<GuardTiming>& timing = std::nullopt);

struct PulsePosition {
    std::size_t symbol = 0;
    std::size_t slot = 0;

    friend bool operator==(const PulsePosition&, const PulsePosition&) = default;
    friend auto operator<=>(const PulsePosition&, const PulsePosition&) = default;
};

struct VotePositions {
    PulsePosition plus;
    PulsePosition minus;
};

/// Gradient index -> (plus, minus) pulse positions.
using VoteAssignment = std::vector<VotePositions>;

/// Row-major fill: vote i = t * m_vote + j sits in symbol t with the minus
/// pulse in slot 2j and the plus pulse in slot 2j + 1.
VoteAssignment default_vote_map(const PpmLayout& layout);

/// Throws std::invalid_argument if positions collide or fall outside the layout.
void check_vote_map(const VoteAssignment& map, const PpmLayout& layout);

/// sqrt(E_s) * [1, -1, 1, -1, ...] of length m_pulse.
ComplexVec pulse_weights(const PpmLayout& layout);

/// Per-vote unit-modulus dither; values from the QPSK set e^{j(2k+1)pi/4}.
using DitherVector = ComplexVec;

DitherVector draw_dithers(RngStream& rng, std::size_t q);

/// Builds the layout.n_symbols bin frames one device transmits.
std::vector<BinFrame> encode_votes(std::span<const std::int8_t> signs, const VoteAssignment& map,
                                   const PpmLayout& layout, std::span<const Complex> dither);

} // namespace ppmv
