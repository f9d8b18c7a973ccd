// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#pragma once

#include <cstddef>
#include <span>

#include "ppmv/ppm.hpp"
#include "ppmv/rng.hpp"
#include "ppmv/types.hpp"

namespace ppmv {

/// Received energy in the plus and minus windows of one vote.
struct EnergyPair {
    double plus = 0.0;
    double minus = 0.0;

    double delta() const { return plus - minus; }
};

/// Squared norm over the (m_pulse + m_gap)-bin windows of vote i. The window
/// covers the pulse and its guard so that dispersed energy is collected.
EnergyPair vote_energies(std::span<const BinFrame> frames, const VoteAssignment& map,
                         const PpmLayout& layout, std::size_t i);

/// Majority vote by comparing window energies; ties use `tie_break`.
SignVector detect_mv(std::span<const BinFrame> frames, const VoteAssignment& map,
                     const PpmLayout& layout, RngStream& tie_break);

} // namespace ppmv
