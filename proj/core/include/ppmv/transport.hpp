// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// Aggregation transports: how the edge server turns K local sign vectors into
// the majority vote it broadcasts back.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppmv/channel.hpp"
#include "ppmv/dsp.hpp"
#include "ppmv/obda.hpp"
#include "ppmv/ppm.hpp"
#include "ppmv/types.hpp"

namespace ppmv {

struct RoundContext {
    std::uint64_t seed = 0;
    std::size_t round = 0;
    std::size_t threads = 1;
};

class Transport {
public:
    virtual ~Transport() = default;

    virtual std::string name() const = 0;

    /// Majority vote as seen by the edge server.
    virtual SignVector aggregate(std::span<const SignVector> votes, const RoundContext& ctx) = 0;

    /// Uplink air time of one round, in seconds.
    virtual double airtime_s() const = 0;
};

/// Exact majority vote; ties broken by the round's ideal_tie stream.
class IdealTransport final : public Transport {
public:
    std::string name() const override { return "ideal"; }
    SignVector aggregate(std::span<const SignVector> votes, const RoundContext& ctx) override;
    double airtime_s() const override { return 0.0; }
};

/// Radio environment shared by the over-the-air transports.
struct ChannelSettings {
    /// Multipath profile; empty means an ideal unit channel.
    std::optional<PowerDelayProfile> profile;
    double t_sync_s = 0.0;
    double sigma_n_sq = 0.0;
};

/// Non-coherent PPM majority vote over DFT-s-OFDM. Each device gets a fresh
/// channel, timing offset and dither draw every round.
class PpmTransport final : public Transport {
public:
    PpmTransport(OfdmConfig ofdm, PpmLayout layout, ChannelSettings channel);

    std::string name() const override { return "ppm"; }
    SignVector aggregate(std::span<const SignVector> votes, const RoundContext& ctx) override;
    double airtime_s() const override;

    /// Demodulated bin frames at the edge server for one round.
    std::vector<BinFrame> receive(std::span<const SignVector> votes, const RoundContext& ctx) const;

    const PpmLayout& layout() const { return layout_; }
    const VoteAssignment& vote_map() const { return map_; }

private:
    OfdmConfig ofdm_;
    PpmLayout layout_;
    VoteAssignment map_;
    ChannelSettings channel_;
};

/// Coherent QPSK aggregation, with or without truncated channel inversion.
class ObdaTransport final : public Transport {
public:
    ObdaTransport(OfdmConfig ofdm, std::size_t q, TciConfig tci, bool use_tci, ChannelSettings channel);

    std::string name() const override { return use_tci_ ? "obda" : "obda-no-tci"; }
    SignVector aggregate(std::span<const SignVector> votes, const RoundContext& ctx) override;
    double airtime_s() const override;

private:
    OfdmConfig ofdm_;
    std::size_t q_;
    TciConfig tci_;
    bool use_tci_;
    ChannelSettings channel_;
};

/// Channel of device k in round `round`, including its timing offset.
ChannelRealization draw_device_channel(const ChannelSettings& settings, const OfdmConfig& ofdm,
                                       std::uint64_t seed, std::size_t round, std::size_t device);

} // namespace ppmv
