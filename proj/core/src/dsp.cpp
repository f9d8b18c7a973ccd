// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

namespace ppmv {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan is.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(std::size_t n, int direction)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, direction);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        ComplexVec in(n), out(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), as_fftw(in.data()),
                                          as_fftw(out.data()), direction,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) {
            throw std::runtime_error("fftw planning failed for n=" + std::to_string(n));
        }
        plans_.emplace(key, plan);
        return plan;
    }

    static fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

ComplexVec transform(std::span<const Complex> v, int direction)
{
    if (v.empty()) {
        throw std::invalid_argument("transform of an empty vector");
    }
    const std::size_t n = v.size();
    ComplexVec in(v.begin(), v.end());
    ComplexVec out(n);
    fftw_execute_dft(plan_cache().get(n, direction), PlanCache::as_fftw(in.data()),
                     PlanCache::as_fftw(out.data()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : out) {
        x *= scale;
    }
    return out;
}

void check_length(std::size_t got, std::size_t want, const char* what)
{
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(want) +
                                    ", got " + std::to_string(got));
    }
}

ComplexVec add_cp(const ComplexVec& body, std::size_t cp_len)
{
    ComplexVec out;
    out.reserve(body.size() + cp_len);
    out.insert(out.end(), body.end() - static_cast<std::ptrdiff_t>(cp_len), body.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

// Places M values on the occupied subcarriers of an n-point grid.
ComplexVec map_subcarriers(std::span<const Complex> values, std::size_t first, std::size_t n)
{
    ComplexVec grid(n, Complex{});
    std::copy(values.begin(), values.end(), grid.begin() + static_cast<std::ptrdiff_t>(first));
    return grid;
}

} // namespace

OfdmConfig OfdmConfig::centered(std::size_t n_idft, std::size_t m_bins, std::size_t cp_len,
                                double sample_rate_hz)
{
    OfdmConfig cfg;
    cfg.n_idft = n_idft;
    cfg.m_bins = m_bins;
    cfg.cp_len = cp_len;
    cfg.first_subcarrier = m_bins <= n_idft ? (n_idft - m_bins) / 2 : 0;
    cfg.sample_rate_hz = sample_rate_hz;
    cfg.validate();
    return cfg;
}

void OfdmConfig::validate() const
{
    if (n_idft == 0 || m_bins == 0) {
        throw std::invalid_argument("n_idft and m_bins must be positive");
    }
    if (m_bins > n_idft) {
        throw std::invalid_argument("m_bins exceeds n_idft");
    }
    if (first_subcarrier + m_bins > n_idft) {
        throw std::invalid_argument("occupied band runs past n_idft");
    }
    if (cp_len >= n_idft) {
        throw std::invalid_argument("cp_len must be shorter than n_idft");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw std::invalid_argument("sample_rate_hz must be positive");
    }
}

double OfdmConfig::bin_spacing_s() const
{
    return static_cast<double>(n_idft) * sample_period_s() / static_cast<double>(m_bins);
}

double OfdmConfig::symbol_duration_s() const
{
    return static_cast<double>(symbol_length()) * sample_period_s();
}

ComplexVec dft(std::span<const Complex> v) { return transform(v, FFTW_FORWARD); }

ComplexVec idft(std::span<const Complex> v) { return transform(v, FFTW_BACKWARD); }

ComplexVec modulate(std::span<const Complex> bins, const OfdmConfig& cfg)
{
    check_length(bins.size(), cfg.m_bins, "modulate");
    const ComplexVec spread = dft(bins);
    return add_cp(idft(map_subcarriers(spread, cfg.first_subcarrier, cfg.n_idft)), cfg.cp_len);
}

ComplexVec modulate_ofdm(std::span<const Complex> subcarriers, const OfdmConfig& cfg)
{
    check_length(subcarriers.size(), cfg.m_bins, "modulate_ofdm");
    return add_cp(idft(map_subcarriers(subcarriers, cfg.first_subcarrier, cfg.n_idft)), cfg.cp_len);
}

ComplexVec strip_cp(std::span<const Complex> symbol, const OfdmConfig& cfg)
{
    check_length(symbol.size(), cfg.symbol_length(), "strip_cp");
    return ComplexVec(symbol.begin() + static_cast<std::ptrdiff_t>(cfg.cp_len), symbol.end());
}

ComplexVec demodulate_ofdm(std::span<const Complex> y, const OfdmConfig& cfg)
{
    check_length(y.size(), cfg.n_idft, "demodulate");
    const ComplexVec spectrum = dft(y);
    const auto first = spectrum.begin() + static_cast<std::ptrdiff_t>(cfg.first_subcarrier);
    return ComplexVec(first, first + static_cast<std::ptrdiff_t>(cfg.m_bins));
}

BinFrame demodulate(std::span<const Complex> y, const OfdmConfig& cfg)
{
    return idft(demodulate_ofdm(y, cfg));
}

std::vector<double> envelope_power(std::span<const Complex> s, const OfdmConfig& cfg,
                                   std::size_t oversample, Waveform waveform)
{
    check_length(s.size(), cfg.m_bins, "envelope_power");
    if (oversample == 0) {
        throw std::invalid_argument("oversample must be positive");
    }
    const ComplexVec sub = waveform == Waveform::dft_spread ? dft(s) : ComplexVec(s.begin(), s.end());
    const std::size_t n_os = cfg.n_idft * oversample;
    // Unitary IDFT of size n_os scaled by sqrt(oversample) keeps the
    // amplitude of the n_idft-point body.
    const ComplexVec x = idft(map_subcarriers(sub, cfg.first_subcarrier, n_os));
    const double gain = static_cast<double>(oversample);
    std::vector<double> power(n_os);
    std::transform(x.begin(), x.end(), power.begin(),
                   [gain](const Complex& z) { return gain * std::norm(z); });
    return power;
}

double pmepr_db(std::span<const Complex> s, const OfdmConfig& cfg, std::size_t oversample,
                Waveform waveform)
{
    if (oversample < 4) {
        throw std::invalid_argument("pmepr_db needs oversample >= 4");
    }
    const auto power = envelope_power(s, cfg, oversample, waveform);
    const double peak = *std::max_element(power.begin(), power.end());
    const double p_tx = static_cast<double>(cfg.m_bins) / static_cast<double>(cfg.n_idft);
    return 10.0 * std::log10(peak / p_tx);
}

} // namespace ppmv
