// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ppmv/parallel.hpp"

namespace ppmv {

BatchSampler::BatchSampler(std::vector<std::size_t> shard, RngStream rng)
    : order_(std::move(shard)), cursor_(order_.size()), rng_(rng)
{
    if (order_.empty()) {
        throw std::invalid_argument("batch sampler over an empty shard");
    }
}

std::vector<std::size_t> BatchSampler::next(std::size_t n_b)
{
    if (n_b == 0 || n_b > order_.size()) {
        throw std::invalid_argument("batch size " + std::to_string(n_b) + " does not fit a shard of " +
                                    std::to_string(order_.size()));
    }
    if (cursor_ + n_b > order_.size()) {
        std::shuffle(order_.begin(), order_.end(), rng_.engine());
        cursor_ = 0;
    }
    std::vector<std::size_t> batch(order_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                   order_.begin() + static_cast<std::ptrdiff_t>(cursor_ + n_b));
    cursor_ += n_b;
    return batch;
}

std::vector<double> local_gradient(const Task& task, const ModelState& model, const Dataset& data,
                                   std::span<const std::size_t> batch)
{
    if (batch.empty()) {
        throw std::invalid_argument("local_gradient over an empty batch");
    }
    std::vector<double> grad(task.num_params(), 0.0);
    task.gradient(model.w, data, batch, grad);
    return grad;
}

std::vector<double> local_gradient(const Task& task, const ModelState& model, const Dataset& data,
                                   BatchSampler& sampler, std::size_t n_b)
{
    const auto batch = sampler.next(n_b);
    return local_gradient(task, model, data, batch);
}

SignVector gradient_signs(std::span<const double> grad, RngStream& rng)
{
    SignVector s(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        s[i] = sign_or_random(grad[i], rng);
    }
    return s;
}

SignVector ideal_mv(std::span<const SignVector> votes, RngStream& rng)
{
    if (votes.empty()) {
        throw std::invalid_argument("ideal_mv needs at least one vote vector");
    }
    const std::size_t q = votes.front().size();
    std::vector<int> sum(q, 0);
    for (const auto& v : votes) {
        if (v.size() != q) {
            throw std::invalid_argument("ideal_mv: vote vectors differ in length");
        }
        for (std::size_t i = 0; i < q; ++i) {
            sum[i] += v[i];
        }
    }
    SignVector mv(q);
    for (std::size_t i = 0; i < q; ++i) {
        mv[i] = sign_or_random(static_cast<double>(sum[i]), rng);
    }
    return mv;
}

void apply_update(ModelState& model, std::span<const std::int8_t> mv, double eta)
{
    if (mv.size() != model.w.size()) {
        throw std::invalid_argument("apply_update: vote length differs from model size");
    }
    for (std::size_t i = 0; i < mv.size(); ++i) {
        model.w[i] -= eta * static_cast<double>(mv[i]);
    }
}

void validate_training(const TrainConfig& cfg, const TrainingProblem& problem)
{
    if (!(cfg.eta > 0.0)) {
        throw ConfigError("learning rate must be positive");
    }
    if (cfg.k == 0 || cfg.rounds == 0 || cfg.n_b == 0) {
        throw ConfigError("K, rounds and n_b must be positive");
    }
    if (problem.train.size() < cfg.k) {
        throw ConfigError("fewer training samples than devices");
    }
    const std::size_t d = problem.train.size() / cfg.k;
    if (cfg.n_b > d) {
        throw ConfigError("batch size " + std::to_string(cfg.n_b) + " exceeds the shard size D = " +
                          std::to_string(d));
    }
    if (problem.test.size() == 0) {
        throw ConfigError("empty test set");
    }
}

TrainingResult train(const TrainConfig& cfg, Transport& transport, const TrainingProblem& problem,
                     std::uint64_t seed, std::size_t threads, const RoundCallback& on_round)
{
    validate_training(cfg, problem);
    const Task& task = problem.task;

    RngStream part_rng = RngStream::derive(seed, Purpose::partition);
    const auto shards = partition(problem.train.size(), cfg.k, part_rng);
    std::vector<BatchSampler> samplers;
    samplers.reserve(cfg.k);
    for (std::size_t k = 0; k < cfg.k; ++k) {
        samplers.emplace_back(shards[k], RngStream::derive(seed, Purpose::batch, {k}));
    }

    RngStream init_rng = RngStream::derive(seed, Purpose::init);
    ModelState model{task.initial_params(init_rng)};
    const std::size_t q = task.num_params();

    TrainingResult result;
    result.rounds.reserve(cfg.rounds);
    std::vector<SignVector> signs(cfg.k);
    for (std::size_t n = 0; n < cfg.rounds; ++n) {
        const auto start = std::chrono::steady_clock::now();

        parallel_for(cfg.k, threads, [&](std::size_t k) {
            const auto grad = local_gradient(task, model, problem.train, samplers[k], cfg.n_b);
            RngStream rng = RngStream::derive(seed, Purpose::gradient_sign, {n, k});
            signs[k] = gradient_signs(grad, rng);
        });

        RngStream ref_rng = RngStream::derive(seed, Purpose::ideal_tie, {n});
        const SignVector reference = ideal_mv(signs, ref_rng);
        const SignVector mv = transport.aggregate(signs, RoundContext{seed, n, threads});

        std::size_t disagree = 0;
        for (std::size_t i = 0; i < q; ++i) {
            disagree += mv[i] != reference[i] ? 1 : 0;
        }
        apply_update(model, mv, cfg.eta);

        RoundRecord rec;
        rec.round = n;
        rec.test_accuracy = task.accuracy(model.w, problem.test);
        rec.mv_error_rate = static_cast<double>(disagree) / static_cast<double>(q);
        rec.airtime_ms = transport.airtime_s() * 1e3;
        rec.compute_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        result.rounds.push_back(rec);
        if (on_round) {
            on_round(rec);
        }
    }
    result.model = std::move(model);
    return result;
}

std::vector<RoundRecord> run_training(const TrainConfig& cfg, Transport& transport,
                                      const TrainingProblem& problem, std::uint64_t seed,
                                      std::size_t threads, const RoundCallback& on_round)
{
    return train(cfg, transport, problem, seed, threads, on_round).rounds;
}

} // namespace ppmv
