// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "ppmv/analysis.hpp"
#include "ppmv/detector.hpp"
#include "ppmv/dsp.hpp"
#include "ppmv/parallel.hpp"
#include "ppmv/ppm.hpp"
#include "ppmv/transport.hpp"

namespace ppmv::validation {
namespace {

constexpr double kTsyncEpaS = 55.6e-9;

std::string format(const char* pattern, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof(buf), pattern, args...);
    return buf;
}

double binomial_coefficient(std::size_t n, std::size_t k)
{
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

double exponential(RngStream& rng, double mean)
{
    return mean > 0.0 ? std::exponential_distribution<double>(1.0 / mean)(rng.engine()) : 0.0;
}

PpmLayout one_symbol_layout(std::size_t m_bins, std::size_t m_pulse, std::size_t m_gap)
{
    const std::size_t m_vote = compute_layout(m_bins, m_pulse, m_gap, 1).m_vote;
    return compute_layout(m_bins, m_pulse, m_gap, m_vote);
}

SignVector random_signs(RngStream& rng, std::size_t q)
{
    SignVector s(q);
    for (auto& v : s) {
        v = rng.random_sign();
    }
    return s;
}

} // namespace

double brute_force_mv_error(std::size_t k, double q_i, double xi)
{
    const double inv_xi = std::isinf(xi) ? 0.0 : 1.0 / xi;
    const double kd = static_cast<double>(k);
    double total = 0.0;
    for (std::size_t kp = 0; kp <= k; ++kp) {
        const double p_err = (kd - static_cast<double>(kp) + inv_xi) / (kd + 2.0 * inv_xi);
        const double weight = binomial_coefficient(k, kp) * std::pow(1.0 - q_i, static_cast<double>(kp)) *
                              std::pow(q_i, static_cast<double>(k - kp));
        total += weight * p_err;
    }
    return total;
}

CheckResult check_binomial_grid(double tolerance)
{
    double worst = 0.0;
    std::string where;
    for (std::size_t k = 1; k <= 10; ++k) {
        for (double x : {0.1, 1.0, 10.0, 100.0}) {
            for (double q : {0.0, 0.1, 0.25, 0.5}) {
                const double diff = std::abs(analysis::mv_error_prob(k, q, x) - brute_force_mv_error(k, q, x));
                if (diff > worst) {
                    worst = diff;
                    where = format("K=%zu xi=%g q=%g", k, x, q);
                }
            }
        }
    }
    return {"binomial_grid", worst <= tolerance,
            format("max |closed - brute| = %.3e (tol %.0e)%s%s", worst, tolerance,
                   where.empty() ? "" : " at ", where.c_str())};
}

std::vector<CheckResult> check_split_monte_carlo(std::uint64_t seed, std::size_t trials)
{
    constexpr std::size_t m_pulse = 1;
    constexpr std::size_t m_gap = 7;
    const double e_s = 2.0 * static_cast<double>(m_pulse + m_gap) / static_cast<double>(m_pulse);
    std::vector<CheckResult> out;
    for (std::size_t k : {1, 2, 5}) {
        for (double x : {1.0, 10.0}) {
            const double sigma_sq = static_cast<double>(m_pulse) * e_s / (static_cast<double>(m_pulse + m_gap) * x);
            double worst_z = 0.0;
            std::string cells;
            for (std::size_t kp = 0; kp <= k; ++kp) {
                const auto mu = analysis::energy_means(kp, k - kp, m_pulse, m_gap, e_s, sigma_sq);
                RngStream rng = RngStream::derive(seed, Purpose::monte_carlo, {1, k, static_cast<std::uint64_t>(x), kp});
                std::size_t errors = 0;
                for (std::size_t t = 0; t < trials; ++t) {
                    const double ep = exponential(rng, mu.plus);
                    const double em = exponential(rng, mu.minus);
                    errors += ep - em <= 0.0 ? 1 : 0;
                }
                const double p_hat = static_cast<double>(errors) / static_cast<double>(trials);
                const double p = analysis::sign_error_prob_given_split(k, kp, x);
                const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
                const double z = se > 0.0 ? std::abs(p_hat - p) / se : (p_hat == p ? 0.0 : 1e9);
                worst_z = std::max(worst_z, z);
                cells += format(" K+=%zu:%.4f/%.4f", kp, p_hat, p);
            }
            out.push_back({format("split_mc_K%zu_xi%g", k, x), worst_z <= 3.0,
                           format("max |z| = %.2f over %zu trials; empirical/closed%s", worst_z, trials,
                                  cells.c_str())});
        }
    }
    return out;
}

CheckResult check_delta_pdf(double tolerance)
{
    // Composite Simpson on each half-line, truncated 60 means out.
    const auto simpson = [](auto f, double a, double b, std::size_t n) {
        const double h = (b - a) / static_cast<double>(n);
        double s = f(a) + f(b);
        for (std::size_t i = 1; i < n; ++i) {
            s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
        }
        return s * h / 3.0;
    };
    double worst_mass = 0.0;
    double worst_neg = 0.0;
    for (std::size_t k : {1, 2, 5}) {
        for (std::size_t kp = 0; kp <= k; ++kp) {
            for (double sigma_sq : {0.1, 1.0, 4.0}) {
                const auto mu = analysis::energy_means(kp, k - kp, 1, 7, 16.0, sigma_sq);
                const auto pdf = [&](double d) { return analysis::delta_pdf(d, mu.plus, mu.minus); };
                const double neg = simpson(pdf, -60.0 * mu.minus, 0.0, 200000);
                const double pos = simpson(pdf, 0.0, 60.0 * mu.plus, 200000);
                worst_mass = std::max(worst_mass, std::abs(neg + pos - 1.0));
                const double x = analysis::xi(1, 7, 16.0, sigma_sq);
                worst_neg = std::max(worst_neg, std::abs(neg - analysis::sign_error_prob_given_split(k, kp, x)));
            }
        }
    }
    return {"delta_pdf_quadrature", worst_mass <= tolerance && worst_neg <= tolerance,
            format("max |mass - 1| = %.2e, max |P(delta<=0) - closed| = %.2e (tol %.0e)", worst_mass, worst_neg,
                   tolerance)};
}

double BridgeRow::rel_error() const
{
    return std::max(std::abs(mean_plus - model_plus) / model_plus, std::abs(mean_minus - model_minus) / model_minus);
}

std::vector<BridgeRow> energy_bridge(const BridgeSetup& setup, std::size_t trials, std::uint64_t seed,
                                     std::size_t threads)
{
    const OfdmConfig ofdm;
    const PpmLayout layout = one_symbol_layout(ofdm.m_bins, setup.m_pulse, setup.m_gap);
    const PpmTransport transport(ofdm, layout, {setup.profile, setup.t_sync_s, setup.sigma_n_sq});
    const std::size_t groups = setup.k + 1;

    // Per-trial partial sums keep the reduction order independent of threads.
    std::vector<double> sum_plus(trials * groups, 0.0);
    std::vector<double> sum_minus(trials * groups, 0.0);
    std::vector<std::size_t> count(trials * groups, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
        RngStream rng = RngStream::derive(seed, Purpose::votes, {2, t});
        std::vector<SignVector> votes(setup.k);
        for (auto& v : votes) {
            v = random_signs(rng, layout.q);
        }
        const auto frames = transport.receive(votes, RoundContext{seed, t, 1});
        for (std::size_t i = 0; i < layout.q; ++i) {
            std::size_t kp = 0;
            for (const auto& v : votes) {
                kp += v[i] > 0 ? 1 : 0;
            }
            const EnergyPair e = vote_energies(frames, transport.vote_map(), layout, i);
            sum_plus[t * groups + kp] += e.plus;
            sum_minus[t * groups + kp] += e.minus;
            ++count[t * groups + kp];
        }
    });

    std::vector<BridgeRow> rows(groups);
    for (std::size_t kp = 0; kp < groups; ++kp) {
        BridgeRow& r = rows[kp];
        r.k_plus = kp;
        for (std::size_t t = 0; t < trials; ++t) {
            r.mean_plus += sum_plus[t * groups + kp];
            r.mean_minus += sum_minus[t * groups + kp];
            r.samples += count[t * groups + kp];
        }
        if (r.samples > 0) {
            r.mean_plus /= static_cast<double>(r.samples);
            r.mean_minus /= static_cast<double>(r.samples);
        }
        const auto mu = analysis::energy_means(kp, setup.k - kp, setup.m_pulse, setup.m_gap, layout.e_s,
                                               setup.sigma_n_sq);
        r.model_plus = mu.plus;
        r.model_minus = mu.minus;
    }
    return rows;
}

CheckResult check_energy_bridge(const std::string& name, const BridgeSetup& setup, std::size_t trials,
                                double tolerance, std::uint64_t seed, std::size_t threads)
{
    const auto rows = energy_bridge(setup, trials, seed, threads);
    double worst = 0.0;
    std::string detail;
    for (const auto& r : rows) {
        worst = std::max(worst, r.rel_error());
        detail += format(" K+=%zu: e+ %.3f/%.3f e- %.3f/%.3f;", r.k_plus, r.mean_plus, r.model_plus, r.mean_minus,
                         r.model_minus);
    }
    return {name, worst <= tolerance,
            format("max relative error %.2f%% (tol %.0f%%), %zu trials; empirical/model:", 100.0 * worst,
                   100.0 * tolerance, trials) +
                detail};
}

MvErrorEstimate end_to_end_mv_error(std::size_t k, double q_i, double snr_db, std::size_t rounds,
                                    std::uint64_t seed, std::size_t threads)
{
    const OfdmConfig ofdm;
    const PpmLayout layout = one_symbol_layout(ofdm.m_bins, 1, 7);
    const double sigma_sq = std::pow(10.0, -snr_db / 10.0);
    PpmTransport transport(ofdm, layout, {flat_profile(), 0.0, sigma_sq});

    std::vector<double> round_error(rounds, 0.0);
    std::vector<std::size_t> flips(rounds, 0);
    parallel_for(rounds, threads, [&](std::size_t r) {
        RngStream rng = RngStream::derive(seed, Purpose::votes, {3, r});
        const SignVector truth = random_signs(rng, layout.q);
        std::vector<SignVector> votes(k, truth);
        for (auto& v : votes) {
            for (auto& s : v) {
                if (rng.uniform() < q_i) {
                    s = static_cast<std::int8_t>(-s);
                    ++flips[r];
                }
            }
        }
        const SignVector mv = transport.aggregate(votes, RoundContext{seed, r, 1});
        std::size_t wrong = 0;
        for (std::size_t i = 0; i < layout.q; ++i) {
            wrong += mv[i] != truth[i] ? 1 : 0;
        }
        round_error[r] = static_cast<double>(wrong) / static_cast<double>(layout.q);
    });

    MvErrorEstimate est;
    std::size_t total_flips = 0;
    for (std::size_t r = 0; r < rounds; ++r) {
        est.empirical += round_error[r];
        total_flips += flips[r];
    }
    const double n = static_cast<double>(rounds);
    est.empirical /= n;
    double var = 0.0;
    for (double e : round_error) {
        var += (e - est.empirical) * (e - est.empirical);
    }
    est.standard_error = std::sqrt(var / (n - 1.0) / n);
    est.q_hat = static_cast<double>(total_flips) / (n * static_cast<double>(k * layout.q));
    est.xi = analysis::xi(1, 7, layout.e_s, sigma_sq);
    est.predicted = analysis::mv_error_prob(k, est.q_hat, est.xi);
    return est;
}

CheckResult check_end_to_end_mv(double snr_db, std::size_t rounds, std::uint64_t seed, std::size_t threads)
{
    const auto est = end_to_end_mv_error(5, 0.2, snr_db, rounds, seed, threads);
    const double z = std::abs(est.empirical - est.predicted) / est.standard_error;
    return {format("end_to_end_mv_error_%gdB", snr_db), z <= 3.0,
            format("K=5 xi=%.1f q_hat=%.4f: empirical %.5f +- %.5f vs closed %.5f (|z| = %.2f)", est.xi,
                   est.q_hat, est.empirical, est.standard_error, est.predicted, z)};
}

CheckResult check_three_versus_one(std::size_t trials, std::uint64_t seed)
{
    const OfdmConfig ofdm;
    const PpmLayout layout = compute_layout(ofdm.m_bins, 1, 7, 1);
    PpmTransport transport(ofdm, layout, {flat_profile(), 0.0, 0.0});
    const std::vector<SignVector> votes{{1}, {1}, {1}, {-1}};
    std::size_t plus = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        plus += transport.aggregate(votes, RoundContext{seed, t, 1})[0] > 0 ? 1 : 0;
    }
    const double p = 1.0 - analysis::sign_error_prob_given_split(4, 3, std::numeric_limits<double>::infinity());
    const double p_hat = static_cast<double>(plus) / static_cast<double>(trials);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    const double z = std::abs(p_hat - p) / se;
    return {"detector_three_vs_one", z <= 3.0,
            format("P(+1) empirical %.4f vs %.4f over %zu trials (|z| = %.2f)", p_hat, p, trials, z)};
}

CheckResult check_noise_energy(std::size_t trials, std::uint64_t seed)
{
    const OfdmConfig ofdm;
    const PpmLayout layout = one_symbol_layout(ofdm.m_bins, 1, 7);
    const VoteAssignment map = default_vote_map(layout);
    constexpr double sigma_sq = 0.5;
    RngStream rng = RngStream::derive(seed, Purpose::monte_carlo, {4});
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<BinFrame> frame(1, BinFrame(ofdm.m_bins));
        for (auto& v : frame[0]) {
            v = rng.complex_normal(sigma_sq);
        }
        const EnergyPair e = vote_energies(frame, map, layout, t % layout.q);
        sum += e.plus + e.minus;
        n += 2;
    }
    const double mean = sum / static_cast<double>(n);
    const double model = static_cast<double>(layout.slot_width()) * sigma_sq;
    const double rel = std::abs(mean - model) / model;
    return {"detector_noise_energy", rel <= 0.05,
            format("mean window energy %.4f vs %.4f (%.2f%%, tol 5%%)", mean, model, 100.0 * rel)};
}

CheckResult check_demodulated_noise(std::size_t trials, std::uint64_t seed)
{
    const OfdmConfig ofdm;
    constexpr double sigma_sq = 2.0;
    RngStream rng = RngStream::derive(seed, Purpose::monte_carlo, {5});
    double sum = 0.0;
    std::size_t n = 0;
    ComplexVec y(ofdm.n_idft);
    for (std::size_t t = 0; t < trials; ++t) {
        for (auto& v : y) {
            v = rng.complex_normal(sigma_sq);
        }
        const BinFrame s = demodulate(y, ofdm);
        for (const auto& v : s) {
            sum += std::norm(v);
        }
        n += s.size();
    }
    const double mean = sum / static_cast<double>(n);
    const double rel = std::abs(mean - sigma_sq) / sigma_sq;
    return {"demodulated_noise_variance", rel <= 0.05,
            format("mean |s_j|^2 = %.4f vs %.4f (%.2f%%, tol 5%%)", mean, sigma_sq, 100.0 * rel)};
}

double chi_square_critical(std::size_t dof, double z)
{
    const double d = static_cast<double>(dof);
    const double c = 2.0 / (9.0 * d);
    return d * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
}

CheckResult check_timing_offsets(std::size_t draws, std::uint64_t seed)
{
    const OfdmConfig ofdm;
    // 0.2 us spans seven sample positions, enough for a meaningful fit.
    constexpr double t_sync = 0.2e-6;
    const auto support = static_cast<std::size_t>(std::llround(t_sync * ofdm.sample_rate_hz)) + 1;
    std::vector<std::size_t> hist(support, 0);
    RngStream rng = RngStream::derive(seed, Purpose::monte_carlo, {6});
    for (std::size_t i = 0; i < draws; ++i) {
        const std::size_t d = draw_timing_offset(rng, t_sync, ofdm.sample_rate_hz);
        if (d >= support) {
            return {"timing_offset_chi_square", false, format("offset %zu outside support", d)};
        }
        ++hist[d];
    }
    const double expected = static_cast<double>(draws) / static_cast<double>(support);
    double chi2 = 0.0;
    for (std::size_t c : hist) {
        chi2 += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
    }
    const double crit = chi_square_critical(support - 1, 2.326348);
    return {"timing_offset_chi_square", chi2 <= crit,
            format("chi2 = %.2f, 1%% critical %.2f, %zu cells", chi2, crit, support)};
}

std::vector<CheckResult> run_suite(const SuiteOptions& options)
{
    const bool full = options.depth == Depth::full;
    const std::uint64_t s = options.seed;
    std::vector<CheckResult> out;
    out.push_back(check_binomial_grid());
    for (auto& r : check_split_monte_carlo(s, full ? 100000 : 20000)) {
        out.push_back(std::move(r));
    }
    out.push_back(check_delta_pdf());
    out.push_back(check_demodulated_noise(full ? 10000 : 500, s));
    out.push_back(check_noise_energy(full ? 10000 : 4000, s));
    out.push_back(check_three_versus_one(full ? 10000 : 2000, s));
    out.push_back(check_timing_offsets(100000, s));
    out.push_back(check_energy_bridge("energy_bridge_flat", {flat_profile(), 0.0, 0.1}, full ? 100000 : 2000,
                                      0.03, s, options.threads));
    out.push_back(check_energy_bridge("energy_bridge_epa", {epa_profile(), kTsyncEpaS, 1.0}, full ? 100000 : 2000,
                                      0.10, s, options.threads));
    for (double snr : {20.0, 0.0}) {
        out.push_back(check_end_to_end_mv(snr, full ? 4000 : 500, s, options.threads));
    }
    return out;
}

} // namespace ppmv::validation
