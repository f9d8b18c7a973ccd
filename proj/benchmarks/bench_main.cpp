// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <benchmark/benchmark.h>

#include <vector>

#include "ppmv/channel.hpp"
#include "ppmv/detector.hpp"
#include "ppmv/dsp.hpp"
#include "ppmv/experiment.hpp"
#include "ppmv/ppm.hpp"
#include "ppmv/transport.hpp"

using namespace ppmv;

namespace {

SignVector random_votes(RngStream& rng, std::size_t q)
{
    SignVector s(q);
    for (auto& v : s) {
        v = rng.random_sign();
    }
    return s;
}

BinFrame random_frame(RngStream& rng, std::size_t m)
{
    BinFrame f(m);
    for (auto& v : f) {
        v = rng.complex_normal(1.0);
    }
    return f;
}

void BM_Modulate(benchmark::State& state)
{
    const OfdmConfig cfg;
    RngStream rng(1);
    const auto frame = random_frame(rng, cfg.m_bins);
    for (auto _ : state) {
        benchmark::DoNotOptimize(modulate(frame, cfg));
    }
}
BENCHMARK(BM_Modulate);

void BM_Demodulate(benchmark::State& state)
{
    const OfdmConfig cfg;
    RngStream rng(2);
    ComplexVec y(cfg.n_idft);
    for (auto& v : y) {
        v = rng.complex_normal(1.0);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(demodulate(y, cfg));
    }
}
BENCHMARK(BM_Demodulate);

void BM_ApplyChannelEpa(benchmark::State& state)
{
    const OfdmConfig cfg;
    RngStream rng(3);
    const auto chn = draw_channel(epa_profile(), rng, cfg.sample_rate_hz, cfg.cp_len);
    const auto x = modulate(random_frame(rng, cfg.m_bins), cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_channel(x, chn));
    }
}
BENCHMARK(BM_ApplyChannelEpa);

void BM_DetectMv(benchmark::State& state)
{
    const OfdmConfig cfg;
    const auto layout = compute_layout(cfg.m_bins, static_cast<std::size_t>(state.range(0)), 7, 4000);
    const auto map = default_vote_map(layout);
    RngStream rng(4);
    std::vector<BinFrame> frames;
    for (std::size_t m = 0; m < layout.n_symbols; ++m) {
        frames.push_back(random_frame(rng, cfg.m_bins));
    }
    for (auto _ : state) {
        RngStream tie(5);
        benchmark::DoNotOptimize(detect_mv(frames, map, layout, tie));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(layout.q));
}
BENCHMARK(BM_DetectMv)->Arg(1)->Arg(13);

void BM_PmeprSymbol(benchmark::State& state)
{
    const OfdmConfig cfg;
    RngStream rng(6);
    const auto frame = random_frame(rng, cfg.m_bins);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pmepr_db(frame, cfg, 4, Waveform::dft_spread));
    }
}
BENCHMARK(BM_PmeprSymbol);

void BM_PpmRoundTrip(benchmark::State& state)
{
    const OfdmConfig cfg;
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto layout = compute_layout(cfg.m_bins, 1, 7, 21);
    PpmTransport transport(cfg, layout, {epa_profile(), 55.6e-9, 0.01});
    RngStream rng(7);
    std::vector<SignVector> votes;
    for (std::size_t i = 0; i < k; ++i) {
        votes.push_back(random_votes(rng, layout.q));
    }
    std::size_t round = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(transport.aggregate(votes, RoundContext{1, round++, 1}));
    }
}
BENCHMARK(BM_PpmRoundTrip)->Arg(10);

void BM_TrainingRound(benchmark::State& state)
{
    auto cfg = parse_config(R"({"seed": 1, "scheme": "ppm", "train": {"rounds": 1}})");
    const Problem problem = make_problem(cfg);
    auto transport = make_transport(cfg, problem.task->num_params());
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_training(cfg.train, *transport, problem.view(), cfg.seed, 1));
    }
}
BENCHMARK(BM_TrainingRound)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
