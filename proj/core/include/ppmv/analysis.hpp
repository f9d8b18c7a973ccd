// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// Closed-form statistics of the energy detector and the resulting signSGD
// convergence bound. Window energies are modelled as exponential random
// variables whose means grow linearly with the number of devices voting for
// that window.

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace ppmv::analysis {

struct EnergyMeans {
    double plus = 0.0;
    double minus = 0.0;
};

/// mu = m_pulse * E_s * K_side + (m_pulse + m_gap) * sigma_n^2 per side.
EnergyMeans energy_means(std::size_t k_plus, std::size_t k_minus, std::size_t m_pulse,
                         std::size_t m_gap, double e_s, double sigma_n_sq);

/// Effective SNR m_pulse * E_s / ((m_pulse + m_gap) * sigma_n^2). Infinite when
/// sigma_n_sq is zero.
double xi(std::size_t m_pulse, std::size_t m_gap, double e_s, double sigma_n_sq);

/// Density of delta = e_plus - e_minus: two-sided exponential with rates
/// 1/mu_minus on the left and 1/mu_plus on the right.
double delta_pdf(double delta, double mu_plus, double mu_minus);

/// P(detector does not output +1 | k_plus of K devices vote +1)
/// = ((K - k_plus) + 1/xi) / (K + 2/xi).
double sign_error_prob_given_split(std::size_t k, std::size_t k_plus, double xi);

/// Binomial average of the above with per-device error probability q_i:
/// (1/(xi K) + q_i) / (1 + 2/(K xi)).
double mv_error_prob(std::size_t k, double q_i, double xi);

/// Upper bound sqrt(2) sigma_i / (3 |g_i| sqrt(n_b)) on a device's sign error.
double q_bound(double sigma_i, double g_i, std::size_t n_b);

struct TheoremParams {
    double n_rounds = 1.0;       ///< N
    double k = 1.0;              ///< K (may be infinite)
    double gamma = 1.0;          ///< n_b = N / gamma
    double l1_smoothness = 1.0;  ///< ||L||_1
    double l1_sigma = 1.0;       ///< ||sigma||_1
    double loss_gap = 1.0;       ///< F(w_0) - F*
    double xi = 1.0;             ///< effective SNR (may be infinite)
};

/// a = (1 + 2/(xi K)) / sqrt(gamma).
double theorem_a(const TheoremParams& p);

/// Bound on E[(1/N) sum ||g_n||_1] for signSGD with the PPM majority vote.
double convergence_bound(const TheoremParams& p);

struct CcdfPoint {
    double threshold_db = 0.0;
    double probability = 0.0; ///< P(PMEPR > threshold)
};

/// Empirical complementary CDF of PMEPR samples at the given thresholds.
std::vector<CcdfPoint> pmepr_ccdf(std::span<const double> samples_db, std::span<const double> thresholds_db);

/// Smallest threshold t on a 0.01 dB grid with CCDF(t) <= level.
double ccdf_level_crossing(std::span<const double> samples_db, double level);

} // namespace ppmv::analysis
