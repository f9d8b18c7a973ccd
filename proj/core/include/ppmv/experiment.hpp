// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator
//
// Experiment configuration (strict JSON) and the train / pmepr / analyze
// commands. Every output file carries the hash of the effective config.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ppmv/channel.hpp"
#include "ppmv/dsp.hpp"
#include "ppmv/ppm.hpp"
#include "ppmv/task.hpp"
#include "ppmv/training.hpp"
#include "ppmv/transport.hpp"

namespace ppmv {

enum class Scheme { ppm, obda, obda_no_tci, ideal };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Every violated constraint found while loading a config.
class ConfigErrors : public ConfigError {
public:
    explicit ConfigErrors(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct ChannelConfig {
    std::string profile = "epa"; ///< epa | flat | none | custom
    PowerDelayProfile custom;    ///< used when profile == "custom"
    double t_sync_s = 55.6e-9;
    double snr_db = 20.0;

    double sigma_n_sq() const;
    /// Multipath profile, or nothing for an ideal unit channel.
    std::optional<PowerDelayProfile> resolved_profile() const;
    /// 4 * T_rms of the profile (zero without multipath), seconds.
    double t_chn_s() const;
};

struct TaskConfig {
    std::string name = "synthetic-logistic"; ///< synthetic-logistic | mnist-mlp
    std::string dataset_path;
    std::size_t train_samples = 2000;
    std::size_t test_samples = 1000;
    std::size_t features = 20;
    std::size_t hidden = 12;
};

struct ExperimentConfig {
    Scheme scheme = Scheme::ppm;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    OfdmConfig ofdm;
    std::size_t m_pulse = 1;
    std::size_t m_gap = 7;
    double tci_threshold = 0.2;
    ChannelConfig channel;
    TrainConfig train;
    TaskConfig task;
    std::size_t pmepr_symbols = 10000;
    std::size_t pmepr_oversample = 4;

    GuardTiming guard_timing() const;
};

/// Command-line values that replace file values before validation.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<std::string> output_dir;
};

/// Parses and validates; throws ConfigErrors listing every problem.
ExperimentConfig parse_config(const std::string& json_text, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Canonical JSON of everything that affects results (output_dir excluded).
std::string canonical_json(const ExperimentConfig& cfg);
/// 16 hex digits of FNV-1a over canonical_json.
std::string config_hash(const ExperimentConfig& cfg);

std::string version_string();

/// Task plus its train/test data.
struct Problem {
    std::unique_ptr<Task> task;
    Dataset train;
    Dataset test;

    TrainingProblem view() const { return {*task, train, test}; }
};
Problem make_problem(const ExperimentConfig& cfg);

std::unique_ptr<Transport> make_transport(const ExperimentConfig& cfg, std::size_t q);

struct TrainOutcome {
    std::vector<RoundRecord> rounds;
    std::filesystem::path rounds_csv;
    std::filesystem::path summary_json;
};

/// Runs training and writes rounds.csv and summary.json under output_dir.
TrainOutcome cmd_train(const ExperimentConfig& cfg, std::size_t threads);

/// One PMEPR curve: "ppm" (with m_pulse), "obda", "obda-no-tci", or "constant".
struct PmeprSeries {
    std::string scheme;
    std::size_t m_pulse = 0;
    std::vector<double> pmepr_db;
};

/// PMEPR of n_symbols random-vote symbols from one device.
PmeprSeries pmepr_series(const ExperimentConfig& cfg, const std::string& scheme, std::size_t m_pulse,
                         std::size_t n_symbols, std::size_t threads);

/// Writes pmepr.csv (scheme,m_pulse,symbol_index,pmepr_db) for every series.
std::filesystem::path cmd_pmepr(const ExperimentConfig& cfg, const std::vector<std::string>& schemes,
                                const std::vector<std::size_t>& m_pulses, std::size_t n_symbols,
                                std::size_t threads, std::vector<PmeprSeries>* series_out = nullptr);

/// Writes closed-form tables: layout.csv, bound_vs_n.csv, mv_error_vs_xi.csv,
/// split_error.csv. Returns the written paths.
std::vector<std::filesystem::path> cmd_analyze(const ExperimentConfig& cfg);

} // namespace ppmv
