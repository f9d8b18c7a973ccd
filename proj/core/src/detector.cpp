// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/detector.hpp"

#include <complex>
#include <stdexcept>
#include <string>

namespace ppmv {
namespace {

double window_energy(std::span<const BinFrame> frames, const PulsePosition& pos,
                     const PpmLayout& layout)
{
    if (pos.symbol >= frames.size()) {
        throw std::invalid_argument("vote_energies: symbol " + std::to_string(pos.symbol) +
                                    " not among " + std::to_string(frames.size()) + " frames");
    }
    const BinFrame& frame = frames[pos.symbol];
    const std::size_t width = layout.slot_width();
    const std::size_t start = pos.slot * width;
    if (start + width > frame.size()) {
        throw std::invalid_argument("vote_energies: window runs past the frame");
    }
    double e = 0.0;
    for (std::size_t n = start; n < start + width; ++n) {
        e += std::norm(frame[n]);
    }
    return e;
}

} // namespace

EnergyPair vote_energies(std::span<const BinFrame> frames, const VoteAssignment& map,
                         const PpmLayout& layout, std::size_t i)
{
    if (i >= map.size()) {
        throw std::invalid_argument("vote_energies: gradient index " + std::to_string(i) +
                                    " out of range");
    }
    return {window_energy(frames, map[i].plus, layout),
            window_energy(frames, map[i].minus, layout)};
}

SignVector detect_mv(std::span<const BinFrame> frames, const VoteAssignment& map,
                     const PpmLayout& layout, RngStream& tie_break)
{
    SignVector mv(layout.q);
    for (std::size_t i = 0; i < layout.q; ++i) {
        mv[i] = sign_or_random(vote_energies(frames, map, layout, i).delta(), tie_break);
    }
    return mv;
}

} // namespace ppmv
