// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <gtest/gtest.h>

#include <cmath>

#include "ppmv/task.hpp"
#include "ppmv/training.hpp"
#include "ppmv/transport.hpp"

using namespace ppmv;

namespace {

Dataset placeholder(std::size_t n)
{
    Dataset d;
    d.dim = 1;
    d.num_classes = 1;
    d.features.assign(n, 0.0);
    d.labels.assign(n, 0);
    return d;
}

} // namespace

TEST(GradientSigns, SignsAndZeroTies)
{
    RngStream rng(1);
    const std::vector<double> g{0.5, -2.0, 0.0};
    const auto s = gradient_signs(g, rng);
    EXPECT_EQ(s[0], 1);
    EXPECT_EQ(s[1], -1);
    EXPECT_TRUE(s[2] == 1 || s[2] == -1);
}

TEST(IdealMv, Majority)
{
    RngStream rng(1);
    const std::vector<SignVector> votes{{1, -1, 1}, {1, -1, -1}, {-1, -1, 1}};
    EXPECT_EQ(ideal_mv(votes, rng), (SignVector{1, -1, 1}));
}

TEST(IdealMv, EvenSplitIsFairCoin)
{
    auto rng = RngStream::derive(2, Purpose::ideal_tie, {});
    const std::vector<SignVector> votes{{1}, {-1}};
    int plus = 0;
    for (int i = 0; i < 10000; ++i) {
        plus += ideal_mv(votes, rng)[0] > 0 ? 1 : 0;
    }
    EXPECT_NEAR(plus / 10000.0, 0.5, 0.02);
}

TEST(IdealMv, RejectsRaggedInput)
{
    RngStream rng(1);
    EXPECT_THROW(ideal_mv(std::vector<SignVector>{}, rng), std::invalid_argument);
    EXPECT_THROW(ideal_mv(std::vector<SignVector>{{1}, {1, 1}}, rng), std::invalid_argument);
}

TEST(ApplyUpdate, StepsAgainstVote)
{
    ModelState m{{1.0, 1.0}};
    apply_update(m, SignVector{1, -1}, 0.25);
    EXPECT_DOUBLE_EQ(m.w[0], 0.75);
    EXPECT_DOUBLE_EQ(m.w[1], 1.25);
    EXPECT_THROW(apply_update(m, SignVector{1}, 0.1), std::invalid_argument);
}

TEST(Training, QuadraticSettlesWithinStep)
{
    const std::vector<double> target{0.37, -1.21, 2.004, 0.0};
    QuadraticTask task(target);
    const Dataset data = placeholder(40);
    TrainConfig cfg{0.01, 4, 400, 10};
    IdealTransport ideal;
    const auto result = train(cfg, ideal, TrainingProblem{task, data, data}, 5);
    for (std::size_t i = 0; i < target.size(); ++i) {
        EXPECT_LE(std::abs(result.model.w[i] - target[i]), cfg.eta + 1e-12) << "coordinate " << i;
    }
}

TEST(Training, SyntheticLogisticLearnsWithIdealVote)
{
    auto rng = RngStream::derive(6, Purpose::data);
    const auto split = make_synthetic_logistic(2000, 1000, 20, rng);
    LogisticTask task(20);
    TrainConfig cfg{0.01, 64, 200, 10};
    IdealTransport ideal;
    const auto rounds = run_training(cfg, ideal, TrainingProblem{task, split.train, split.test}, 6);
    ASSERT_EQ(rounds.size(), 200u);
    EXPECT_GT(rounds.back().test_accuracy, 0.95);
    for (const auto& r : rounds) {
        EXPECT_EQ(r.mv_error_rate, 0.0);
    }
}

TEST(Training, ThreadCountDoesNotChangeResults)
{
    auto rng = RngStream::derive(7, Purpose::data);
    const auto split = make_synthetic_logistic(400, 100, 20, rng);
    LogisticTask task(20);
    TrainConfig cfg{0.01, 16, 20, 5};
    const OfdmConfig ofdm;
    const auto layout = compute_layout(1200, 1, 7, task.num_params());
    auto run = [&](std::size_t threads) {
        PpmTransport ppm(ofdm, layout, {epa_profile(), 55.6e-9, 0.1});
        return train(cfg, ppm, TrainingProblem{task, split.train, split.test}, 7, threads);
    };
    const auto a = run(1);
    const auto b = run(4);
    EXPECT_EQ(a.model.w, b.model.w);
    for (std::size_t n = 0; n < a.rounds.size(); ++n) {
        EXPECT_EQ(a.rounds[n].test_accuracy, b.rounds[n].test_accuracy);
        EXPECT_EQ(a.rounds[n].mv_error_rate, b.rounds[n].mv_error_rate);
    }
}

TEST(Training, ConfigurationErrors)
{
    LogisticTask task(2);
    const Dataset data = placeholder(20);
    IdealTransport ideal;
    EXPECT_THROW(train(TrainConfig{0.0, 1, 1, 2}, ideal, {task, data, data}, 1), ConfigError);
    EXPECT_THROW(train(TrainConfig{0.1, 11, 1, 2}, ideal, {task, data, data}, 1), ConfigError);
    EXPECT_THROW(train(TrainConfig{0.1, 1, 1, 21}, ideal, {task, data, data}, 1), ConfigError);
}

TEST(Training, RoundCallbackSeesEveryRound)
{
    QuadraticTask task({1.0});
    const Dataset data = placeholder(4);
    IdealTransport ideal;
    std::size_t calls = 0;
    run_training(TrainConfig{0.1, 1, 7, 2}, ideal, {task, data, data}, 1, 1,
                 [&](const RoundRecord& r) { EXPECT_EQ(r.round, calls++); });
    EXPECT_EQ(calls, 7u);
}
