// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/task.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ppmv {
namespace {

double sigmoid(double z)
{
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void require_batch(std::span<const std::size_t> batch)
{
    if (batch.empty()) {
        throw std::invalid_argument("gradient of an empty batch");
    }
}

std::uint32_t read_be32(std::istream& in, const std::filesystem::path& path)
{
    std::array<unsigned char, 4> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), 4)) {
        throw std::runtime_error(path.string() + ": truncated IDX header");
    }
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) |
           std::uint32_t{b[3]};
}

} // namespace

std::vector<std::vector<std::size_t>> partition(std::size_t n, std::size_t k, RngStream& rng)
{
    if (k == 0 || n < k) {
        throw std::invalid_argument("cannot split " + std::to_string(n) + " samples into " +
                                    std::to_string(k) + " non-empty shards");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng.engine());
    const std::size_t d = n / k;
    std::vector<std::vector<std::size_t>> shards(k);
    for (std::size_t s = 0; s < k; ++s) {
        shards[s].assign(order.begin() + static_cast<std::ptrdiff_t>(s * d),
                         order.begin() + static_cast<std::ptrdiff_t>((s + 1) * d));
    }
    return shards;
}

SyntheticSplit make_synthetic_logistic(std::size_t n_train, std::size_t n_test, std::size_t dim,
                                       RngStream& rng)
{
    SyntheticSplit split;
    split.teacher.resize(dim);
    for (auto& w : split.teacher) {
        w = static_cast<double>(rng.random_sign());
    }
    auto fill = [&](Dataset& ds, std::size_t n) {
        ds.dim = dim;
        ds.num_classes = 2;
        ds.features.resize(n * dim);
        ds.labels.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double z = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double x = rng.normal();
                ds.features[i * dim + d] = x;
                z += split.teacher[d] * x;
            }
            ds.labels[i] = z > 0.0 ? 1 : 0;
        }
    };
    fill(split.train, n_train);
    fill(split.test, n_test);
    return split;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels)
{
    std::ifstream img(images, std::ios::binary);
    if (!img) {
        throw std::runtime_error(images.string() + ": cannot open");
    }
    std::ifstream lab(labels, std::ios::binary);
    if (!lab) {
        throw std::runtime_error(labels.string() + ": cannot open");
    }
    if (read_be32(img, images) != 0x00000803) {
        throw std::runtime_error(images.string() + ": not an IDX ubyte image file (magic 0x00000803)");
    }
    if (read_be32(lab, labels) != 0x00000801) {
        throw std::runtime_error(labels.string() + ": not an IDX ubyte label file (magic 0x00000801)");
    }
    const std::uint32_t n = read_be32(img, images);
    const std::uint32_t rows = read_be32(img, images);
    const std::uint32_t cols = read_be32(img, images);
    const std::uint32_t n_labels = read_be32(lab, labels);
    if (n != n_labels) {
        throw std::runtime_error(images.string() + ": image count " + std::to_string(n) +
                                 " differs from label count " + std::to_string(n_labels));
    }

    Dataset ds;
    ds.dim = std::size_t{rows} * cols;
    ds.features.resize(std::size_t{n} * ds.dim);
    ds.labels.resize(n);
    std::vector<unsigned char> buf(ds.dim);
    for (std::size_t i = 0; i < n; ++i) {
        if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
            throw std::runtime_error(images.string() + ": truncated pixel data");
        }
        for (std::size_t d = 0; d < ds.dim; ++d) {
            ds.features[i * ds.dim + d] = buf[d] / 255.0;
        }
    }
    std::vector<unsigned char> lbuf(n);
    if (!lab.read(reinterpret_cast<char*>(lbuf.data()), static_cast<std::streamsize>(n))) {
        throw std::runtime_error(labels.string() + ": truncated label data");
    }
    int max_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ds.labels[i] = lbuf[i];
        max_label = std::max(max_label, ds.labels[i]);
    }
    ds.num_classes = static_cast<std::size_t>(max_label) + 1;
    return ds;
}

// --- QuadraticTask ---------------------------------------------------------

std::vector<double> QuadraticTask::initial_params(RngStream&) const
{
    return std::vector<double>(target_.size(), 0.0);
}

double QuadraticTask::loss(std::span<const double> w, const Dataset&, std::span<const std::size_t>) const
{
    double f = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        f += 0.5 * (w[i] - target_[i]) * (w[i] - target_[i]);
    }
    return f;
}

void QuadraticTask::gradient(std::span<const double> w, const Dataset&, std::span<const std::size_t>,
                             std::span<double> grad) const
{
    for (std::size_t i = 0; i < w.size(); ++i) {
        grad[i] = w[i] - target_[i];
    }
}

double QuadraticTask::accuracy(std::span<const double> w, const Dataset&) const
{
    std::size_t hit = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        hit += std::abs(w[i] - target_[i]) < 1e-9 ? 1 : 0;
    }
    return static_cast<double>(hit) / static_cast<double>(w.size());
}

// --- LogisticTask ----------------------------------------------------------

std::vector<double> LogisticTask::initial_params(RngStream&) const
{
    return std::vector<double>(dim_ + 1, 0.0);
}

double LogisticTask::loss(std::span<const double> w, const Dataset& data,
                          std::span<const std::size_t> batch) const
{
    require_batch(batch);
    double total = 0.0;
    for (std::size_t idx : batch) {
        const auto x = data.row(idx);
        const double z = std::inner_product(x.begin(), x.end(), w.begin(), w[dim_]);
        total += softplus(z) - (data.labels[idx] == 1 ? z : 0.0);
    }
    return total / static_cast<double>(batch.size());
}

void LogisticTask::gradient(std::span<const double> w, const Dataset& data,
                            std::span<const std::size_t> batch, std::span<double> grad) const
{
    require_batch(batch);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t idx : batch) {
        const auto x = data.row(idx);
        const double z = std::inner_product(x.begin(), x.end(), w.begin(), w[dim_]);
        const double r = sigmoid(z) - (data.labels[idx] == 1 ? 1.0 : 0.0);
        for (std::size_t d = 0; d < dim_; ++d) {
            grad[d] += r * x[d];
        }
        grad[dim_] += r;
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& g : grad) {
        g *= inv;
    }
}

double LogisticTask::accuracy(std::span<const double> w, const Dataset& data) const
{
    std::size_t hit = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.row(i);
        const double z = std::inner_product(x.begin(), x.end(), w.begin(), w[dim_]);
        hit += ((z > 0.0 ? 1 : 0) == data.labels[i]) ? 1 : 0;
    }
    return static_cast<double>(hit) / static_cast<double>(data.size());
}

// --- MlpTask ---------------------------------------------------------------

std::size_t MlpTask::num_params() const
{
    return hidden_ * input_ + hidden_ + classes_ * hidden_ + classes_;
}

std::vector<double> MlpTask::initial_params(RngStream& rng) const
{
    std::vector<double> w(num_params(), 0.0);
    const double s1 = std::sqrt(2.0 / static_cast<double>(input_));
    const double s2 = std::sqrt(2.0 / static_cast<double>(hidden_));
    std::size_t o = 0;
    for (std::size_t i = 0; i < hidden_ * input_; ++i) {
        w[o++] = s1 * rng.normal();
    }
    o += hidden_;
    for (std::size_t i = 0; i < classes_ * hidden_; ++i) {
        w[o++] = s2 * rng.normal();
    }
    return w;
}

void MlpTask::forward(std::span<const double> w, std::span<const double> x, std::vector<double>& hidden,
                      std::vector<double>& logits) const
{
    const double* w1 = w.data();
    const double* b1 = w1 + hidden_ * input_;
    const double* w2 = b1 + hidden_;
    const double* b2 = w2 + classes_ * hidden_;
    hidden.assign(hidden_, 0.0);
    for (std::size_t h = 0; h < hidden_; ++h) {
        double a = b1[h];
        const double* row = w1 + h * input_;
        for (std::size_t d = 0; d < input_; ++d) {
            a += row[d] * x[d];
        }
        hidden[h] = std::max(0.0, a);
    }
    logits.assign(classes_, 0.0);
    for (std::size_t c = 0; c < classes_; ++c) {
        double a = b2[c];
        const double* row = w2 + c * hidden_;
        for (std::size_t h = 0; h < hidden_; ++h) {
            a += row[h] * hidden[h];
        }
        logits[c] = a;
    }
}

double MlpTask::loss(std::span<const double> w, const Dataset& data,
                     std::span<const std::size_t> batch) const
{
    require_batch(batch);
    std::vector<double> hidden, logits;
    double total = 0.0;
    for (std::size_t idx : batch) {
        forward(w, data.row(idx), hidden, logits);
        const double mx = *std::max_element(logits.begin(), logits.end());
        double z = 0.0;
        for (double l : logits) {
            z += std::exp(l - mx);
        }
        total += mx + std::log(z) - logits[static_cast<std::size_t>(data.labels[idx])];
    }
    return total / static_cast<double>(batch.size());
}

void MlpTask::gradient(std::span<const double> w, const Dataset& data,
                       std::span<const std::size_t> batch, std::span<double> grad) const
{
    require_batch(batch);
    std::fill(grad.begin(), grad.end(), 0.0);
    const double* w2 = w.data() + hidden_ * input_ + hidden_;
    double* g_w1 = grad.data();
    double* g_b1 = g_w1 + hidden_ * input_;
    double* g_w2 = g_b1 + hidden_;
    double* g_b2 = g_w2 + classes_ * hidden_;

    std::vector<double> hidden, logits, d_hidden(hidden_);
    for (std::size_t idx : batch) {
        const auto x = data.row(idx);
        forward(w, x, hidden, logits);
        const double mx = *std::max_element(logits.begin(), logits.end());
        double z = 0.0;
        for (auto& l : logits) {
            l = std::exp(l - mx);
            z += l;
        }
        // logits now holds softmax numerators; turn into dL/dlogit.
        for (std::size_t c = 0; c < classes_; ++c) {
            logits[c] = logits[c] / z - (static_cast<int>(c) == data.labels[idx] ? 1.0 : 0.0);
        }
        std::fill(d_hidden.begin(), d_hidden.end(), 0.0);
        for (std::size_t c = 0; c < classes_; ++c) {
            g_b2[c] += logits[c];
            for (std::size_t h = 0; h < hidden_; ++h) {
                g_w2[c * hidden_ + h] += logits[c] * hidden[h];
                d_hidden[h] += logits[c] * w2[c * hidden_ + h];
            }
        }
        for (std::size_t h = 0; h < hidden_; ++h) {
            if (hidden[h] <= 0.0) {
                continue;
            }
            g_b1[h] += d_hidden[h];
            double* row = g_w1 + h * input_;
            for (std::size_t d = 0; d < input_; ++d) {
                row[d] += d_hidden[h] * x[d];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& g : grad) {
        g *= inv;
    }
}

double MlpTask::accuracy(std::span<const double> w, const Dataset& data) const
{
    std::vector<double> hidden, logits;
    std::size_t hit = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        forward(w, data.row(i), hidden, logits);
        const auto best = static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
        hit += best == data.labels[i] ? 1 : 0;
    }
    return static_cast<double>(hit) / static_cast<double>(data.size());
}

} // namespace ppmv
