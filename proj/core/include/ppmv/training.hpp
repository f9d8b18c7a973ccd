// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// signSGD with majority vote: devices send gradient signs, the server
// aggregates them through a Transport and every device applies
// w <- w - eta * mv.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ppmv/rng.hpp"
#include "ppmv/task.hpp"
#include "ppmv/transport.hpp"
#include "ppmv/types.hpp"

namespace ppmv {

struct TrainConfig {
    double eta = 0.01;
    std::size_t n_b = 64;
    std::size_t rounds = 300;
    std::size_t k = 10;
};

struct ModelState {
    std::vector<double> w;
};

/// Mini-batches drawn without replacement; the shard is reshuffled whenever
/// fewer than n_b unused samples remain.
class BatchSampler {
public:
    BatchSampler(std::vector<std::size_t> shard, RngStream rng);

    std::vector<std::size_t> next(std::size_t n_b);
    std::size_t shard_size() const { return order_.size(); }

private:
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
    RngStream rng_;
};

/// Mean gradient over an explicit batch.
std::vector<double> local_gradient(const Task& task, const ModelState& model, const Dataset& data,
                                   std::span<const std::size_t> batch);

/// Mean gradient over the next n_b samples of the device's shard.
std::vector<double> local_gradient(const Task& task, const ModelState& model, const Dataset& data,
                                   BatchSampler& sampler, std::size_t n_b);

/// Elementwise sign; exact zeros become a random +/-1.
SignVector gradient_signs(std::span<const double> grad, RngStream& rng);

/// Per-coordinate sign of the vote sum; ties random.
SignVector ideal_mv(std::span<const SignVector> votes, RngStream& rng);

/// w <- w - eta * mv.
void apply_update(ModelState& model, std::span<const std::int8_t> mv, double eta);

struct RoundRecord {
    std::size_t round = 0;
    double test_accuracy = 0.0;
    double mv_error_rate = 0.0; ///< fraction of coordinates where the transport disagrees with ideal_mv
    double airtime_ms = 0.0;
    double compute_ms = 0.0;    ///< measured; not deterministic
};

struct TrainingProblem {
    const Task& task;
    const Dataset& train;
    const Dataset& test;
};

/// Throws ConfigError before any round runs if the configuration cannot work.
void validate_training(const TrainConfig& cfg, const TrainingProblem& problem);

using RoundCallback = std::function<void(const RoundRecord&)>;

std::vector<RoundRecord> run_training(const TrainConfig& cfg, Transport& transport,
                                      const TrainingProblem& problem, std::uint64_t seed,
                                      std::size_t threads = 1, const RoundCallback& on_round = {});

/// Model after run_training's last round (same seeds, same transport draws).
struct TrainingResult {
    std::vector<RoundRecord> rounds;
    ModelState model;
};
TrainingResult train(const TrainConfig& cfg, Transport& transport, const TrainingProblem& problem,
                     std::uint64_t seed, std::size_t threads = 1, const RoundCallback& on_round = {});

} // namespace ppmv
