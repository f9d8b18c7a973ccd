// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ppmv::analysis {

EnergyMeans energy_means(std::size_t k_plus, std::size_t k_minus, std::size_t m_pulse,
                         std::size_t m_gap, double e_s, double sigma_n_sq)
{
    const double signal = static_cast<double>(m_pulse) * e_s;
    const double noise = static_cast<double>(m_pulse + m_gap) * sigma_n_sq;
    return {signal * static_cast<double>(k_plus) + noise, signal * static_cast<double>(k_minus) + noise};
}

double xi(std::size_t m_pulse, std::size_t m_gap, double e_s, double sigma_n_sq)
{
    if (sigma_n_sq < 0.0) {
        throw std::invalid_argument("noise variance must be non-negative");
    }
    const double num = static_cast<double>(m_pulse) * e_s;
    const double den = static_cast<double>(m_pulse + m_gap) * sigma_n_sq;
    return den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
}

double delta_pdf(double delta, double mu_plus, double mu_minus)
{
    if (!(mu_plus > 0.0) || !(mu_minus > 0.0)) {
        throw std::invalid_argument("delta_pdf needs positive means");
    }
    const double norm = mu_plus + mu_minus;
    return delta <= 0.0 ? std::exp(delta / mu_minus) / norm : std::exp(-delta / mu_plus) / norm;
}

double sign_error_prob_given_split(std::size_t k, std::size_t k_plus, double xi_value)
{
    if (k_plus > k) {
        throw std::invalid_argument("k_plus exceeds K");
    }
    if (!(xi_value > 0.0)) {
        throw std::invalid_argument("xi must be positive");
    }
    const double inv = 1.0 / xi_value;
    const double den = static_cast<double>(k) + 2.0 * inv;
    if (den == 0.0) {
        throw std::invalid_argument("K = 0 with infinite xi is undefined");
    }
    return (static_cast<double>(k - k_plus) + inv) / den;
}

double mv_error_prob(std::size_t k, double q_i, double xi_value)
{
    if (k == 0) {
        throw std::invalid_argument("mv_error_prob needs K >= 1");
    }
    if (!(q_i >= 0.0 && q_i <= 0.5)) {
        throw std::invalid_argument("q_i must lie in [0, 0.5]");
    }
    if (!(xi_value > 0.0)) {
        throw std::invalid_argument("xi must be positive");
    }
    const double kx_inv = 1.0 / (static_cast<double>(k) * xi_value);
    return (kx_inv + q_i) / (1.0 + 2.0 * kx_inv);
}

double q_bound(double sigma_i, double g_i, std::size_t n_b)
{
    if (sigma_i < 0.0 || n_b == 0 || g_i == 0.0) {
        throw std::invalid_argument("q_bound needs sigma >= 0, g != 0, n_b >= 1");
    }
    return std::sqrt(2.0) * sigma_i / (3.0 * std::abs(g_i) * std::sqrt(static_cast<double>(n_b)));
}

double theorem_a(const TheoremParams& p)
{
    const double kx = p.xi * p.k;
    return (1.0 + (std::isinf(kx) ? 0.0 : 2.0 / kx)) / std::sqrt(p.gamma);
}

double convergence_bound(const TheoremParams& p)
{
    if (!(p.n_rounds > 0.0 && p.k > 0.0 && p.gamma > 0.0 && p.l1_smoothness > 0.0 &&
          p.l1_sigma > 0.0 && p.loss_gap > 0.0 && p.xi > 0.0)) {
        throw std::invalid_argument("convergence_bound parameters must all be positive");
    }
    const double a = theorem_a(p);
    const double first = a * std::sqrt(p.l1_smoothness) * (p.loss_gap + p.gamma / 2.0);
    const double second = 2.0 * std::sqrt(2.0 * p.gamma) / 3.0 * p.l1_sigma;
    return (first + second) / std::sqrt(p.n_rounds);
}

std::vector<CcdfPoint> pmepr_ccdf(std::span<const double> samples_db, std::span<const double> thresholds_db)
{
    if (samples_db.empty()) {
        throw std::invalid_argument("pmepr_ccdf needs samples");
    }
    std::vector<double> sorted(samples_db.begin(), samples_db.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<CcdfPoint> curve;
    curve.reserve(thresholds_db.size());
    for (double t : thresholds_db) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        curve.push_back({t, static_cast<double>(above) / static_cast<double>(sorted.size())});
    }
    return curve;
}

double ccdf_level_crossing(std::span<const double> samples_db, double level)
{
    if (samples_db.empty()) {
        throw std::invalid_argument("ccdf_level_crossing needs samples");
    }
    std::vector<double> sorted(samples_db.begin(), samples_db.end());
    std::sort(sorted.begin(), sorted.end());
    const double lo = std::floor(sorted.front() * 100.0) / 100.0;
    const double n = static_cast<double>(sorted.size());
    for (long step = 0;; ++step) {
        const double t = lo + 0.01 * static_cast<double>(step);
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        if (static_cast<double>(above) / n <= level) {
            return t;
        }
    }
}

} // namespace ppmv::analysis
