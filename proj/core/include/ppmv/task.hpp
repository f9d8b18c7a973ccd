// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// Desk-scale learning tasks for the signSGD loop.

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ppmv/rng.hpp"

namespace ppmv {

/// Row-major feature matrix with integer labels.
struct Dataset {
    std::size_t dim = 0;
    std::size_t num_classes = 0;
    std::vector<double> features;
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const { return {features.data() + i * dim, dim}; }
};

/// Equal disjoint shards of floor(n / k) samples each, drawn from a shuffle.
std::vector<std::vector<std::size_t>> partition(std::size_t n, std::size_t k, RngStream& rng);

/// x ~ N(0, I_d), label = [w_true . x > 0] with w_true in {+1, -1}^d.
/// Returns the train and test sets from one teacher.
struct SyntheticSplit {
    Dataset train;
    Dataset test;
    std::vector<double> teacher;
};
SyntheticSplit make_synthetic_logistic(std::size_t n_train, std::size_t n_test, std::size_t dim,
                                       RngStream& rng);

/// IDX readers (big-endian). Images are scaled to [0, 1].
Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

class Task {
public:
    virtual ~Task() = default;

    virtual std::size_t num_params() const = 0;
    virtual std::vector<double> initial_params(RngStream& rng) const = 0;

    /// Mean sample loss over `batch`.
    virtual double loss(std::span<const double> w, const Dataset& data,
                        std::span<const std::size_t> batch) const = 0;

    /// Mean gradient over `batch`, written to `grad` (length num_params()).
    virtual void gradient(std::span<const double> w, const Dataset& data,
                          std::span<const std::size_t> batch, std::span<double> grad) const = 0;

    virtual double accuracy(std::span<const double> w, const Dataset& data) const = 0;
};

/// f(w) = 1/2 ||w - w*||^2 regardless of the data.
class QuadraticTask final : public Task {
public:
    explicit QuadraticTask(std::vector<double> target) : target_(std::move(target)) {}

    std::size_t num_params() const override { return target_.size(); }
    std::vector<double> initial_params(RngStream&) const override;
    double loss(std::span<const double> w, const Dataset&, std::span<const std::size_t>) const override;
    void gradient(std::span<const double> w, const Dataset&, std::span<const std::size_t>,
                  std::span<double> grad) const override;
    /// Fraction of coordinates within 1e-9 of the target.
    double accuracy(std::span<const double> w, const Dataset&) const override;

    const std::vector<double>& target() const { return target_; }

private:
    std::vector<double> target_;
};

/// Binary logistic regression; parameters are [weights..., bias].
class LogisticTask final : public Task {
public:
    explicit LogisticTask(std::size_t dim) : dim_(dim) {}

    std::size_t num_params() const override { return dim_ + 1; }
    std::vector<double> initial_params(RngStream&) const override;
    double loss(std::span<const double> w, const Dataset& data,
                std::span<const std::size_t> batch) const override;
    void gradient(std::span<const double> w, const Dataset& data, std::span<const std::size_t> batch,
                  std::span<double> grad) const override;
    double accuracy(std::span<const double> w, const Dataset& data) const override;

private:
    std::size_t dim_;
};

/// input -> hidden (ReLU) -> classes (softmax cross-entropy).
/// Parameter layout: W1 (hidden x input), b1, W2 (classes x hidden), b2.
class MlpTask final : public Task {
public:
    MlpTask(std::size_t input, std::size_t hidden, std::size_t classes)
        : input_(input), hidden_(hidden), classes_(classes)
    {
    }

    std::size_t num_params() const override;
    std::vector<double> initial_params(RngStream& rng) const override;
    double loss(std::span<const double> w, const Dataset& data,
                std::span<const std::size_t> batch) const override;
    void gradient(std::span<const double> w, const Dataset& data, std::span<const std::size_t> batch,
                  std::span<double> grad) const override;
    double accuracy(std::span<const double> w, const Dataset& data) const override;

private:
    void forward(std::span<const double> w, std::span<const double> x, std::vector<double>& hidden,
                 std::vector<double>& logits) const;

    std::size_t input_;
    std::size_t hidden_;
    std::size_t classes_;
};

} // namespace ppmv
