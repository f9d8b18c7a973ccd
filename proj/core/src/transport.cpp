// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/transport.hpp"

#include <stdexcept>

#include "ppmv/detector.hpp"
#include "ppmv/parallel.hpp"
#include "ppmv/training.hpp"

namespace ppmv {
namespace {

void check_votes(std::span<const SignVector> votes, std::size_t q)
{
    if (votes.empty()) {
        throw std::invalid_argument("aggregate needs at least one device");
    }
    for (const auto& v : votes) {
        if (v.size() != q) {
            throw std::invalid_argument("aggregate: vote vector length differs from q");
        }
    }
}

// Pushes every device's frames through modulation and its channel, then
// superposes and demodulates symbol by symbol.
template <typename Modulate, typename Demodulate>
std::vector<ComplexVec> over_the_air(const std::vector<std::vector<ComplexVec>>& tx_frames,
                                     const std::vector<ChannelRealization>& channels,
                                     const OfdmConfig& ofdm, double sigma_n_sq,
                                     const RoundContext& ctx, Modulate modulate_fn,
                                     Demodulate demodulate_fn)
{
    const std::size_t k_devices = tx_frames.size();
    const std::size_t n_symbols = tx_frames.front().size();
    std::vector<ComplexVec> rx_frames(n_symbols);
    std::vector<ComplexVec> arrivals(k_devices);
    for (std::size_t m = 0; m < n_symbols; ++m) {
        parallel_for(k_devices, ctx.threads, [&](std::size_t k) {
            arrivals[k] = apply_channel(modulate_fn(tx_frames[k][m], ofdm), channels[k]);
        });
        RngStream noise = RngStream::derive(ctx.seed, Purpose::noise, {ctx.round, m});
        const ComplexVec y = superpose(arrivals, sigma_n_sq, noise);
        rx_frames[m] = demodulate_fn(strip_cp(y, ofdm), ofdm);
    }
    return rx_frames;
}

} // namespace

ChannelRealization draw_device_channel(const ChannelSettings& settings, const OfdmConfig& ofdm,
                                       std::uint64_t seed, std::size_t round, std::size_t device)
{
    ChannelRealization chn = ChannelRealization::identity();
    if (settings.profile) {
        RngStream rng = RngStream::derive(seed, Purpose::channel, {round, device});
        chn = draw_channel(*settings.profile, rng, ofdm.sample_rate_hz, ofdm.cp_len);
    }
    RngStream timing = RngStream::derive(seed, Purpose::timing, {round, device});
    chn.timing_offset = draw_timing_offset(timing, settings.t_sync_s, ofdm.sample_rate_hz);
    check_within_cp(chn, ofdm.cp_len);
    return chn;
}

SignVector IdealTransport::aggregate(std::span<const SignVector> votes, const RoundContext& ctx)
{
    RngStream rng = RngStream::derive(ctx.seed, Purpose::ideal_tie, {ctx.round});
    return ideal_mv(votes, rng);
}

PpmTransport::PpmTransport(OfdmConfig ofdm, PpmLayout layout, ChannelSettings channel)
    : ofdm_(ofdm), layout_(layout), map_(default_vote_map(layout)), channel_(std::move(channel))
{
    ofdm_.validate();
    if (layout_.m_bins != ofdm_.m_bins) {
        throw ConfigError("PPM layout was computed for a different number of bins");
    }
}

double PpmTransport::airtime_s() const
{
    return static_cast<double>(layout_.n_symbols) * ofdm_.symbol_duration_s();
}

std::vector<BinFrame> PpmTransport::receive(std::span<const SignVector> votes,
                                            const RoundContext& ctx) const
{
    check_votes(votes, layout_.q);
    const std::size_t k_devices = votes.size();
    std::vector<std::vector<BinFrame>> tx(k_devices);
    std::vector<ChannelRealization> channels(k_devices);
    parallel_for(k_devices, ctx.threads, [&](std::size_t k) {
        channels[k] = draw_device_channel(channel_, ofdm_, ctx.seed, ctx.round, k);
        RngStream rng = RngStream::derive(ctx.seed, Purpose::dither, {ctx.round, k});
        const DitherVector dither = draw_dithers(rng, layout_.q);
        tx[k] = encode_votes(votes[k], map_, layout_, dither);
    });
    return over_the_air(tx, channels, ofdm_, channel_.sigma_n_sq, ctx,
                        [](const BinFrame& s, const OfdmConfig& c) { return modulate(s, c); },
                        [](const ComplexVec& y, const OfdmConfig& c) { return demodulate(y, c); });
}

SignVector PpmTransport::aggregate(std::span<const SignVector> votes, const RoundContext& ctx)
{
    const std::vector<BinFrame> frames = receive(votes, ctx);
    RngStream tie = RngStream::derive(ctx.seed, Purpose::tie_break, {ctx.round});
    return detect_mv(frames, map_, layout_, tie);
}

ObdaTransport::ObdaTransport(OfdmConfig ofdm, std::size_t q, TciConfig tci, bool use_tci,
                             ChannelSettings channel)
    : ofdm_(ofdm), q_(q), tci_(tci), use_tci_(use_tci), channel_(std::move(channel))
{
    ofdm_.validate();
    if (q_ == 0) {
        throw ConfigError("OBDA transport needs q >= 1");
    }
}

double ObdaTransport::airtime_s() const
{
    return static_cast<double>(obda_symbol_count(q_, ofdm_.m_bins)) * ofdm_.symbol_duration_s();
}

SignVector ObdaTransport::aggregate(std::span<const SignVector> votes, const RoundContext& ctx)
{
    check_votes(votes, q_);
    const std::size_t k_devices = votes.size();
    std::vector<std::vector<ComplexVec>> tx(k_devices);
    std::vector<ChannelRealization> channels(k_devices);
    parallel_for(k_devices, ctx.threads, [&](std::size_t k) {
        channels[k] = draw_device_channel(channel_, ofdm_, ctx.seed, ctx.round, k);
        // Genie CSI of the multipath only; arrival-time offsets stay uncompensated.
        const ComplexVec h = use_tci_ ? frequency_response(channels[k], ofdm_, false) : ComplexVec{};
        tx[k] = obda_encode(votes[k], h, tci_, use_tci_, ofdm_.m_bins);
    });
    const auto frames = over_the_air(
        tx, channels, ofdm_, channel_.sigma_n_sq, ctx,
        [](const ComplexVec& s, const OfdmConfig& c) { return modulate_ofdm(s, c); },
        [](const ComplexVec& y, const OfdmConfig& c) { return demodulate_ofdm(y, c); });
    RngStream tie = RngStream::derive(ctx.seed, Purpose::tie_break, {ctx.round});
    return obda_detect(frames, q_, tie);
}

} // namespace ppmv
