// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ppmv/analysis.hpp"
#include "ppmv/experiment.hpp"
#include "ppmv/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> scheme;
    std::optional<std::string> output;
    std::size_t threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_scheme)
{
    cmd->add_option("--config", f.config, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "Master seed (overrides the file)");
    if (with_scheme) {
        cmd->add_option("--scheme", f.scheme, "ppm | obda | obda-no-tci | ideal");
    }
    cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--output", f.output, "Output directory (overrides the file)");
}

ppmv::ExperimentConfig load(const CommonFlags& f)
{
    return ppmv::load_config(f.config, ppmv::ConfigOverrides{f.seed, f.scheme, f.output});
}

int run_train(const CommonFlags& f)
{
    const auto cfg = load(f);
    const auto outcome = ppmv::cmd_train(cfg, f.threads);
    std::printf("scheme=%s rounds=%zu final_test_accuracy=%.4f\n", ppmv::to_string(cfg.scheme).c_str(),
                outcome.rounds.size(), outcome.rounds.back().test_accuracy);
    std::printf("wrote %s\nwrote %s\n", outcome.rounds_csv.c_str(), outcome.summary_json.c_str());
    return kExitOk;
}

int run_pmepr(const CommonFlags& f, std::optional<std::size_t> symbols, std::vector<std::size_t> m_pulses,
              const std::vector<std::string>& schemes)
{
    const auto cfg = load(f);
    if (m_pulses.empty()) {
        m_pulses = {1, 3, 8, 13};
    }
    std::vector<ppmv::PmeprSeries> series;
    const auto path =
        ppmv::cmd_pmepr(cfg, schemes, m_pulses, symbols.value_or(cfg.pmepr_symbols), f.threads, &series);
    for (const auto& s : series) {
        std::printf("%-12s m_pulse=%-3zu PMEPR at CCDF 1e-2: %.2f dB\n", s.scheme.c_str(), s.m_pulse,
                    ppmv::analysis::ccdf_level_crossing(s.pmepr_db, 1e-2));
    }
    std::printf("wrote %s\n", path.c_str());
    return kExitOk;
}

int run_analyze(const CommonFlags& f)
{
    const auto cfg = load(f);
    for (const auto& p : ppmv::cmd_analyze(cfg)) {
        std::printf("wrote %s\n", p.c_str());
    }
    return kExitOk;
}

int run_validate(std::uint64_t seed, std::size_t threads, bool quick)
{
    ppmv::validation::SuiteOptions opt{seed, threads,
                                       quick ? ppmv::validation::Depth::quick : ppmv::validation::Depth::full};
    bool all = true;
    for (const auto& r : ppmv::validation::run_suite(opt)) {
        std::printf("[%s] %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        std::fflush(stdout);
        all = all && r.passed;
    }
    return all ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Over-the-air majority-vote aggregation simulator"};
    app.set_version_flag("--version", ppmv::version_string());
    app.require_subcommand(1);

    CommonFlags train_flags;
    auto* train = app.add_subcommand("train", "Run signSGD training and write rounds.csv and summary.json");
    add_common(train, train_flags, true);

    CommonFlags pmepr_flags;
    std::optional<std::size_t> symbols;
    std::vector<std::size_t> m_pulses;
    std::vector<std::string> schemes{"ppm", "obda", "obda-no-tci", "constant"};
    auto* pmepr = app.add_subcommand("pmepr", "Sample per-symbol PMEPR and write pmepr.csv");
    add_common(pmepr, pmepr_flags, false);
    pmepr->add_option("--symbols", symbols, "Symbols per series")->check(CLI::PositiveNumber);
    pmepr->add_option("--m-pulse", m_pulses, "PPM pulse widths (default 1 3 8 13)")->delimiter(',');
    pmepr->add_option("--schemes", schemes, "Subset of ppm, obda, obda-no-tci, constant")->delimiter(',');

    CommonFlags analyze_flags;
    auto* analyze = app.add_subcommand("analyze", "Write closed-form tables");
    add_common(analyze, analyze_flags, false);

    std::uint64_t validate_seed = 1;
    std::size_t validate_threads = 1;
    bool quick = false;
    auto* validate = app.add_subcommand("validate", "Run the Monte Carlo oracle suite");
    validate->add_option("--seed", validate_seed, "Master seed");
    validate->add_option("--threads", validate_threads, "Worker threads")->check(CLI::PositiveNumber);
    validate->add_flag("--quick", quick, "Reduced trial counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*train) {
            return run_train(train_flags);
        }
        if (*pmepr) {
            return run_pmepr(pmepr_flags, symbols, m_pulses, schemes);
        }
        if (*analyze) {
            return run_analyze(analyze_flags);
        }
        return run_validate(validate_seed, validate_threads, quick);
    } catch (const ppmv::ConfigErrors& e) {
        std::cerr << "configuration error:\n";
        for (const auto& p : e.problems()) {
            std::cerr << "  - " << p << '\n';
        }
        return kExitConfig;
    } catch (const ppmv::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
