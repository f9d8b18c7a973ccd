// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "ppmv/task.hpp"
#include "ppmv/training.hpp"

using namespace ppmv;

namespace {

void expect_gradient_matches_central_difference(const Task& task, std::vector<double> w, const Dataset& data,
                                                const std::vector<std::size_t>& batch)
{
    std::vector<double> grad(task.num_params());
    task.gradient(w, data, batch, grad);
    constexpr double h = 1e-6;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double w0 = w[i];
        w[i] = w0 + h;
        const double up = task.loss(w, data, batch);
        w[i] = w0 - h;
        const double down = task.loss(w, data, batch);
        w[i] = w0;
        const double fd = (up - down) / (2.0 * h);
        EXPECT_NEAR(grad[i], fd, 1e-5 * std::max(1.0, std::abs(fd))) << "coordinate " << i;
    }
}

void write_be32(std::ofstream& out, std::uint32_t v)
{
    const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

} // namespace

TEST(Partition, EqualDisjointShards)
{
    auto rng = RngStream::derive(1, Purpose::partition, {});
    const auto shards = partition(103, 10, rng);
    ASSERT_EQ(shards.size(), 10u);
    std::set<std::size_t> seen;
    for (const auto& s : shards) {
        EXPECT_EQ(s.size(), 10u);
        for (auto i : s) {
            EXPECT_LT(i, 103u);
            EXPECT_TRUE(seen.insert(i).second);
        }
    }
    EXPECT_THROW(partition(3, 4, rng), std::invalid_argument);
}

TEST(Synthetic, TeacherSeparatesLabels)
{
    auto rng = RngStream::derive(2, Purpose::data, {});
    const auto split = make_synthetic_logistic(500, 200, 8, rng);
    EXPECT_EQ(split.train.size(), 500u);
    EXPECT_EQ(split.test.size(), 200u);
    for (double t : split.teacher) {
        EXPECT_EQ(std::abs(t), 1.0);
    }
    std::vector<double> w(split.teacher);
    w.push_back(0.0);
    EXPECT_DOUBLE_EQ(LogisticTask(8).accuracy(w, split.test), 1.0);
    const int positives = std::accumulate(split.train.labels.begin(), split.train.labels.end(), 0);
    EXPECT_GT(positives, 200);
    EXPECT_LT(positives, 300);
}

TEST(LogisticTask, GradientMatchesFiniteDifference)
{
    auto rng = RngStream::derive(3, Purpose::data, {});
    const auto split = make_synthetic_logistic(64, 1, 20, rng);
    LogisticTask task(20);
    std::vector<double> w(21);
    for (auto& v : w) {
        v = 0.3 * rng.normal();
    }
    std::vector<std::size_t> batch(64);
    std::iota(batch.begin(), batch.end(), 0);
    expect_gradient_matches_central_difference(task, w, split.train, batch);
}

TEST(MlpTask, GradientMatchesFiniteDifference)
{
    auto rng = RngStream::derive(4, Purpose::data, {});
    Dataset data;
    data.dim = 6;
    data.num_classes = 3;
    for (int i = 0; i < 16; ++i) {
        for (int d = 0; d < 6; ++d) {
            data.features.push_back(rng.normal());
        }
        data.labels.push_back(i % 3);
    }
    MlpTask task(6, 5, 3);
    EXPECT_EQ(task.num_params(), 5u * 6u + 5u + 3u * 5u + 3u);
    auto w = task.initial_params(rng);
    for (std::size_t i = 30; i < 35; ++i) {
        w[i] = 0.1; // keep hidden units away from the ReLU kink
    }
    std::vector<std::size_t> batch(16);
    std::iota(batch.begin(), batch.end(), 0);
    expect_gradient_matches_central_difference(task, w, data, batch);
}

TEST(QuadraticTask, GradientIsDisplacement)
{
    QuadraticTask task({1.0, -2.0});
    Dataset none;
    std::vector<double> g(2);
    const std::vector<std::size_t> batch{0};
    task.gradient(std::vector<double>{0.5, 0.5}, none, batch, g);
    EXPECT_DOUBLE_EQ(g[0], -0.5);
    EXPECT_DOUBLE_EQ(g[1], 2.5);
}

TEST(BatchSampler, EpochCoversShardWithoutReplacement)
{
    std::vector<std::size_t> shard(12);
    std::iota(shard.begin(), shard.end(), 100);
    BatchSampler sampler(shard, RngStream(3));
    std::multiset<std::size_t> seen;
    for (int b = 0; b < 3; ++b) {
        for (auto i : sampler.next(4)) {
            seen.insert(i);
        }
    }
    EXPECT_EQ(seen, std::multiset<std::size_t>(shard.begin(), shard.end()));
    EXPECT_THROW(sampler.next(13), std::invalid_argument);
    EXPECT_THROW(BatchSampler({}, RngStream(1)), std::invalid_argument);
}

TEST(LoadIdx, ReadsGeneratedFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "ppmv_idx_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream img(dir / "img", std::ios::binary);
        write_be32(img, 0x803);
        write_be32(img, 3);
        write_be32(img, 2);
        write_be32(img, 2);
        for (unsigned char p : {0, 255, 51, 102, 1, 2, 3, 4, 255, 255, 0, 0}) {
            img.put(static_cast<char>(p));
        }
        std::ofstream lab(dir / "lab", std::ios::binary);
        write_be32(lab, 0x801);
        write_be32(lab, 3);
        for (unsigned char l : {7, 0, 9}) {
            lab.put(static_cast<char>(l));
        }
    }
    const auto ds = load_idx(dir / "img", dir / "lab");
    EXPECT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds.dim, 4u);
    EXPECT_EQ(ds.num_classes, 10u);
    EXPECT_DOUBLE_EQ(ds.row(0)[1], 1.0);
    EXPECT_DOUBLE_EQ(ds.row(0)[2], 0.2);
    EXPECT_EQ(ds.labels, (std::vector<int>{7, 0, 9}));
    EXPECT_THROW(load_idx(dir / "lab", dir / "img"), std::runtime_error);
    EXPECT_THROW(load_idx(dir / "missing", dir / "lab"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
