// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// Monte Carlo and brute-force cross-checks of the closed-form detector
// statistics against the simulated transmit/receive chain.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppmv/channel.hpp"

namespace ppmv::validation {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

enum class Depth {
    quick, ///< reduced trial counts, for unit-test runs
    full,  ///< trial counts used for acceptance
};

struct SuiteOptions {
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    Depth depth = Depth::full;
};

/// Sum over K+ of P(err | K+) * Binom(K+; K, 1 - q_i), evaluated term by term.
double brute_force_mv_error(std::size_t k, double q_i, double xi);

/// Closed form vs brute-force binomial sum for K <= 10,
/// xi in {0.1, 1, 10, 100}, q_i in {0, 0.1, 0.25, 0.5}.
CheckResult check_binomial_grid(double tolerance = 1e-12);

/// Sign-error frequency from exponential energy draws vs the closed form,
/// K in {1, 2, 5}, xi in {1, 10}, every K+.
std::vector<CheckResult> check_split_monte_carlo(std::uint64_t seed, std::size_t trials);

/// Quadrature of the energy-difference density: total mass and negative mass.
CheckResult check_delta_pdf(double tolerance = 1e-6);

struct BridgeSetup {
    std::optional<PowerDelayProfile> profile;
    double t_sync_s = 0.0;
    double sigma_n_sq = 0.1;
    std::size_t k = 3;
    std::size_t m_pulse = 1;
    std::size_t m_gap = 7;
};

struct BridgeRow {
    std::size_t k_plus = 0;
    std::size_t samples = 0;
    double mean_plus = 0.0;
    double mean_minus = 0.0;
    double model_plus = 0.0;
    double model_minus = 0.0;
    double rel_error() const;
};

/// Window energies from the full modulate/channel/demodulate chain, grouped by
/// the number of devices voting +1. One trial is one round with fresh
/// channels, offsets, dithers and noise; every vote of the symbol is used.
std::vector<BridgeRow> energy_bridge(const BridgeSetup& setup, std::size_t trials, std::uint64_t seed,
                                     std::size_t threads);

CheckResult check_energy_bridge(const std::string& name, const BridgeSetup& setup, std::size_t trials,
                                double tolerance, std::uint64_t seed, std::size_t threads);

struct MvErrorEstimate {
    double empirical = 0.0;
    double standard_error = 0.0;
    double q_hat = 0.0;
    double predicted = 0.0;
    double xi = 0.0;
};

/// Majority-vote error against the true sign with each device flipping its
/// vote independently with probability q_i, over flat Rayleigh channels.
MvErrorEstimate end_to_end_mv_error(std::size_t k, double q_i, double snr_db, std::size_t rounds,
                                    std::uint64_t seed, std::size_t threads);

/// K = 5, q_i = 0.2 at the given SNR.
CheckResult check_end_to_end_mv(double snr_db, std::size_t rounds, std::uint64_t seed, std::size_t threads);

/// Three devices vote +1 and one votes -1 over unit-power flat channels
/// without noise; detection of +1 should occur with probability 3/4.
CheckResult check_three_versus_one(std::size_t trials, std::uint64_t seed);

/// Mean window energy of noise-only frames vs (m_pulse + m_gap) sigma^2.
CheckResult check_noise_energy(std::size_t trials, std::uint64_t seed);

/// Per-bin variance after demodulating white noise.
CheckResult check_demodulated_noise(std::size_t trials, std::uint64_t seed);

/// Chi-square goodness of fit of timing offsets at the 1% level.
CheckResult check_timing_offsets(std::size_t draws, std::uint64_t seed);

/// Upper critical value of the chi-square distribution (Wilson-Hilferty).
double chi_square_critical(std::size_t dof, double z);

std::vector<CheckResult> run_suite(const SuiteOptions& options);

} // namespace ppmv::validation
