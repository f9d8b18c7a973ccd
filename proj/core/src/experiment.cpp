// SPDX-License-Identifier: Apache-2.0
//
// ppmvote: over-the-air majority-vote aggregation simulator

#include "ppmv/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ppmv/analysis.hpp"
#include "ppmv/obda.hpp"
#include "ppmv/parallel.hpp"

#ifndef PPMV_VERSION
#define PPMV_VERSION "0.0.0"
#endif

namespace ppmv {
namespace {

using json = nlohmann::json;

std::string join(const std::vector<std::string>& items, const char* sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? sep : "") + items[i];
    }
    return out;
}

// Collects every problem instead of stopping at the first.
class Reader {
public:
    explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

    void allow(const json& obj, const std::string& where, std::initializer_list<const char*> keys)
    {
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (!allowed.count(it.key())) {
                problems_.push_back("unknown key '" + qualified(where, it.key()) + "'");
            }
        }
    }

    const json* section(const json& root, const char* key)
    {
        if (!root.contains(key)) {
            return nullptr;
        }
        if (!root.at(key).is_object()) {
            problems_.push_back("'" + std::string(key) + "' must be an object");
            return nullptr;
        }
        return &root.at(key);
    }

    void size(const json& obj, const std::string& where, const char* key, std::size_t& out)
    {
        if (!obj.contains(key)) {
            return;
        }
        const json& v = obj.at(key);
        if (!v.is_number_unsigned()) {
            problems_.push_back("'" + qualified(where, key) + "' must be a non-negative integer");
            return;
        }
        out = v.get<std::size_t>();
    }

    void real(const json& obj, const std::string& where, const char* key, double& out)
    {
        if (!obj.contains(key)) {
            return;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            problems_.push_back("'" + qualified(where, key) + "' must be a number");
            return;
        }
        out = v.get<double>();
    }

    void text(const json& obj, const std::string& where, const char* key, std::string& out)
    {
        if (!obj.contains(key)) {
            return;
        }
        const json& v = obj.at(key);
        if (!v.is_string()) {
            problems_.push_back("'" + qualified(where, key) + "' must be a string");
            return;
        }
        out = v.get<std::string>();
    }

    bool reals(const json& obj, const std::string& where, const char* key, std::vector<double>& out)
    {
        if (!obj.contains(key)) {
            return false;
        }
        const json& v = obj.at(key);
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
            problems_.push_back("'" + qualified(where, key) + "' must be an array of numbers");
            return false;
        }
        out = v.get<std::vector<double>>();
        return true;
    }

private:
    static std::string qualified(const std::string& where, const std::string& key)
    {
        return where.empty() ? key : where + "." + key;
    }

    std::vector<std::string>& problems_;
};

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void validate_config(ExperimentConfig& cfg, bool has_seed, bool has_first_subcarrier,
                     std::vector<std::string>& problems)
{
    if (!has_seed) {
        problems.push_back("'seed' is required");
    }
    if (!has_first_subcarrier && cfg.ofdm.m_bins <= cfg.ofdm.n_idft) {
        cfg.ofdm.first_subcarrier = (cfg.ofdm.n_idft - cfg.ofdm.m_bins) / 2;
    }
    bool ofdm_ok = true;
    try {
        cfg.ofdm.validate();
    } catch (const std::invalid_argument& e) {
        problems.push_back(std::string("ofdm: ") + e.what());
        ofdm_ok = false;
    }

    const auto& ch = cfg.channel;
    bool profile_ok = true;
    if (ch.profile == "custom") {
        try {
            ch.custom.validate();
        } catch (const std::invalid_argument& e) {
            problems.push_back(std::string("channel: ") + e.what());
            profile_ok = false;
        }
    } else if (ch.profile != "epa" && ch.profile != "flat" && ch.profile != "none") {
        problems.push_back("channel.profile must be one of epa, flat, none, custom (got '" + ch.profile + "')");
        profile_ok = false;
    }
    if (!(ch.t_sync_s >= 0.0)) {
        problems.push_back("channel.t_sync_s must be non-negative");
    }
    if (!std::isfinite(ch.snr_db)) {
        problems.push_back("channel.snr_db must be finite");
    }

    if (cfg.m_pulse == 0) {
        problems.push_back("ppm.m_pulse must be at least 1");
    } else if (2 * (cfg.m_pulse + cfg.m_gap) > cfg.ofdm.m_bins) {
        problems.push_back("ppm: 2*(m_pulse+m_gap) exceeds ofdm.m_bins");
    }
    if (!(cfg.tci_threshold >= 0.0)) {
        problems.push_back("obda.tci_threshold must be non-negative");
    }

    if (ofdm_ok && profile_ok && ch.t_sync_s >= 0.0) {
        if (cfg.scheme == Scheme::ppm) {
            const std::size_t min_gap = cfg.guard_timing().min_gap();
            if (cfg.m_gap < min_gap) {
                problems.push_back("ppm.m_gap = " + std::to_string(cfg.m_gap) +
                                   " violates the guard condition; minimum m_gap is " +
                                   std::to_string(min_gap));
            }
        }
        if (cfg.scheme != Scheme::ideal) {
            std::size_t last_tap = 0;
            if (const auto profile = ch.resolved_profile()) {
                last_tap = static_cast<std::size_t>(
                    std::lround(profile->tap_delays_ns.back() * 1e-9 * cfg.ofdm.sample_rate_hz));
            }
            const auto max_offset =
                static_cast<std::size_t>(std::llround(ch.t_sync_s * cfg.ofdm.sample_rate_hz));
            if (last_tap + max_offset >= cfg.ofdm.cp_len) {
                problems.push_back("channel delay plus sync error (" + std::to_string(last_tap + max_offset) +
                                   " samples) does not fit in the CP of " +
                                   std::to_string(cfg.ofdm.cp_len) + " samples");
            }
        }
    }

    const auto& t = cfg.train;
    if (!(t.eta > 0.0)) {
        problems.push_back("train.eta must be positive");
    }
    if (t.n_b == 0 || t.rounds == 0 || t.k == 0) {
        problems.push_back("train.n_b, train.rounds and train.K must be positive");
    }
    if (cfg.task.name == "synthetic-logistic") {
        if (cfg.task.features == 0 || cfg.task.test_samples == 0) {
            problems.push_back("train.features and train.test_samples must be positive");
        }
        if (t.k > 0 && t.n_b > cfg.task.train_samples / t.k) {
            problems.push_back("train.n_b = " + std::to_string(t.n_b) + " exceeds the shard size D = " +
                               std::to_string(cfg.task.train_samples / t.k));
        }
    } else if (cfg.task.name == "mnist-mlp") {
        if (cfg.task.dataset_path.empty()) {
            problems.push_back("train.dataset_path is required for task mnist-mlp");
        }
        if (cfg.task.hidden == 0) {
            problems.push_back("train.hidden must be positive");
        }
    } else {
        problems.push_back("train.task must be synthetic-logistic or mnist-mlp (got '" + cfg.task.name + "')");
    }
    if (cfg.pmepr_oversample < 4) {
        problems.push_back("pmepr.oversample must be at least 4");
    }
}

std::filesystem::path prepare_output(const ExperimentConfig& cfg)
{
    std::filesystem::path dir(cfg.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error(dir.string() + ": cannot create output directory: " + ec.message());
    }
    return dir;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) {
        throw std::runtime_error(path.string() + ": write failed");
    }
}

std::string fmt(const char* pattern, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

std::uint64_t scheme_code(const std::string& scheme)
{
    if (scheme == "ppm") return 1;
    if (scheme == "obda") return 2;
    if (scheme == "obda-no-tci") return 3;
    if (scheme == "constant") return 4;
    throw ConfigError("unknown PMEPR scheme '" + scheme + "'");
}

std::filesystem::path find_idx(const std::filesystem::path& dir, std::initializer_list<const char*> names)
{
    for (const char* n : names) {
        if (std::filesystem::exists(dir / n)) {
            return dir / n;
        }
    }
    throw std::runtime_error(dir.string() + ": missing IDX file " + *names.begin());
}

} // namespace

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::ppm: return "ppm";
    case Scheme::obda: return "obda";
    case Scheme::obda_no_tci: return "obda-no-tci";
    case Scheme::ideal: return "ideal";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name)
{
    if (name == "ppm") return Scheme::ppm;
    if (name == "obda") return Scheme::obda;
    if (name == "obda-no-tci") return Scheme::obda_no_tci;
    if (name == "ideal") return Scheme::ideal;
    throw ConfigError("unknown scheme '" + name + "' (expected ppm, obda, obda-no-tci, ideal)");
}

ConfigErrors::ConfigErrors(std::vector<std::string> problems)
    : ConfigError("invalid configuration: " + join(problems, "; ")), problems_(std::move(problems))
{
}

double ChannelConfig::sigma_n_sq() const { return std::pow(10.0, -snr_db / 10.0); }

std::optional<PowerDelayProfile> ChannelConfig::resolved_profile() const
{
    if (profile == "none") {
        return std::nullopt;
    }
    if (profile == "custom") {
        return custom;
    }
    return profile_by_name(profile);
}

double ChannelConfig::t_chn_s() const
{
    const auto p = resolved_profile();
    return p ? p->max_excess_delay_ns() * 1e-9 : 0.0;
}

GuardTiming ExperimentConfig::guard_timing() const
{
    return {channel.t_chn_s(), channel.t_sync_s, ofdm.bin_spacing_s()};
}

ExperimentConfig parse_config(const std::string& json_text, const ConfigOverrides& overrides)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigErrors({std::string("malformed JSON: ") + e.what()});
    }
    if (!root.is_object()) {
        throw ConfigErrors({"top level must be a JSON object"});
    }

    std::vector<std::string> problems;
    Reader r(problems);
    ExperimentConfig cfg;
    r.allow(root, "", {"scheme", "seed", "output_dir", "ofdm", "ppm", "obda", "channel", "train", "pmepr"});

    std::string scheme = "ppm";
    r.text(root, "", "scheme", scheme);
    if (overrides.scheme) {
        scheme = *overrides.scheme;
    }
    try {
        cfg.scheme = parse_scheme(scheme);
    } catch (const ConfigError& e) {
        problems.push_back(e.what());
    }

    bool has_seed = false;
    if (root.contains("seed")) {
        if (root.at("seed").is_number_unsigned()) {
            cfg.seed = root.at("seed").get<std::uint64_t>();
            has_seed = true;
        } else {
            problems.push_back("'seed' must be a non-negative 64-bit integer");
        }
    }
    if (overrides.seed) {
        cfg.seed = *overrides.seed;
        has_seed = true;
    }
    r.text(root, "", "output_dir", cfg.output_dir);
    if (overrides.output_dir) {
        cfg.output_dir = *overrides.output_dir;
    }

    bool has_first = false;
    if (const json* o = r.section(root, "ofdm")) {
        r.allow(*o, "ofdm", {"n_idft", "m_bins", "cp_len", "sample_rate_hz", "first_subcarrier"});
        r.size(*o, "ofdm", "n_idft", cfg.ofdm.n_idft);
        r.size(*o, "ofdm", "m_bins", cfg.ofdm.m_bins);
        r.size(*o, "ofdm", "cp_len", cfg.ofdm.cp_len);
        r.real(*o, "ofdm", "sample_rate_hz", cfg.ofdm.sample_rate_hz);
        has_first = o->contains("first_subcarrier");
        r.size(*o, "ofdm", "first_subcarrier", cfg.ofdm.first_subcarrier);
    }
    if (const json* p = r.section(root, "ppm")) {
        r.allow(*p, "ppm", {"m_pulse", "m_gap"});
        r.size(*p, "ppm", "m_pulse", cfg.m_pulse);
        r.size(*p, "ppm", "m_gap", cfg.m_gap);
    }
    if (const json* b = r.section(root, "obda")) {
        r.allow(*b, "obda", {"tci_threshold"});
        r.real(*b, "obda", "tci_threshold", cfg.tci_threshold);
    }
    if (const json* c = r.section(root, "channel")) {
        r.allow(*c, "channel", {"profile", "delays_ns", "powers_db", "t_sync_s", "snr_db"});
        r.text(*c, "channel", "profile", cfg.channel.profile);
        const bool has_delays = r.reals(*c, "channel", "delays_ns", cfg.channel.custom.tap_delays_ns);
        const bool has_powers = r.reals(*c, "channel", "powers_db", cfg.channel.custom.tap_powers_db);
        if ((has_delays || has_powers) && !c->contains("profile")) {
            cfg.channel.profile = "custom";
        }
        if ((has_delays || has_powers) && cfg.channel.profile != "custom") {
            problems.push_back("channel.delays_ns/powers_db are only valid with profile 'custom'");
        }
        r.real(*c, "channel", "t_sync_s", cfg.channel.t_sync_s);
        r.real(*c, "channel", "snr_db", cfg.channel.snr_db);
    }
    if (const json* t = r.section(root, "train")) {
        r.allow(*t, "train", {"eta", "n_b", "rounds", "K", "task", "dataset_path", "train_samples",
                              "test_samples", "features", "hidden"});
        r.real(*t, "train", "eta", cfg.train.eta);
        r.size(*t, "train", "n_b", cfg.train.n_b);
        r.size(*t, "train", "rounds", cfg.train.rounds);
        r.size(*t, "train", "K", cfg.train.k);
        r.text(*t, "train", "task", cfg.task.name);
        r.text(*t, "train", "dataset_path", cfg.task.dataset_path);
        r.size(*t, "train", "train_samples", cfg.task.train_samples);
        r.size(*t, "train", "test_samples", cfg.task.test_samples);
        r.size(*t, "train", "features", cfg.task.features);
        r.size(*t, "train", "hidden", cfg.task.hidden);
    }
    if (const json* p = r.section(root, "pmepr")) {
        r.allow(*p, "pmepr", {"symbols", "oversample"});
        r.size(*p, "pmepr", "symbols", cfg.pmepr_symbols);
        r.size(*p, "pmepr", "oversample", cfg.pmepr_oversample);
    }

    validate_config(cfg, has_seed, has_first, problems);
    if (!problems.empty()) {
        throw ConfigErrors(std::move(problems));
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigErrors({path.string() + ": cannot open config file"});
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

std::string canonical_json(const ExperimentConfig& cfg)
{
    json j;
    j["scheme"] = to_string(cfg.scheme);
    j["seed"] = cfg.seed;
    j["ofdm"] = {{"n_idft", cfg.ofdm.n_idft},
                 {"m_bins", cfg.ofdm.m_bins},
                 {"cp_len", cfg.ofdm.cp_len},
                 {"first_subcarrier", cfg.ofdm.first_subcarrier},
                 {"sample_rate_hz", cfg.ofdm.sample_rate_hz}};
    j["ppm"] = {{"m_pulse", cfg.m_pulse}, {"m_gap", cfg.m_gap}};
    j["obda"] = {{"tci_threshold", cfg.tci_threshold}};
    json ch = {{"profile", cfg.channel.profile},
               {"t_sync_s", cfg.channel.t_sync_s},
               {"snr_db", cfg.channel.snr_db}};
    if (cfg.channel.profile == "custom") {
        ch["delays_ns"] = cfg.channel.custom.tap_delays_ns;
        ch["powers_db"] = cfg.channel.custom.tap_powers_db;
    }
    j["channel"] = ch;
    j["train"] = {{"eta", cfg.train.eta},
                  {"n_b", cfg.train.n_b},
                  {"rounds", cfg.train.rounds},
                  {"K", cfg.train.k},
                  {"task", cfg.task.name},
                  {"dataset_path", cfg.task.dataset_path},
                  {"train_samples", cfg.task.train_samples},
                  {"test_samples", cfg.task.test_samples},
                  {"features", cfg.task.features},
                  {"hidden", cfg.task.hidden}};
    j["pmepr"] = {{"symbols", cfg.pmepr_symbols}, {"oversample", cfg.pmepr_oversample}};
    return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg)
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(canonical_json(cfg))));
    return buf;
}

std::string version_string() { return std::string("ppmv ") + PPMV_VERSION; }

Problem make_problem(const ExperimentConfig& cfg)
{
    Problem p;
    if (cfg.task.name == "synthetic-logistic") {
        RngStream rng = RngStream::derive(cfg.seed, Purpose::data);
        auto split = make_synthetic_logistic(cfg.task.train_samples, cfg.task.test_samples,
                                             cfg.task.features, rng);
        p.train = std::move(split.train);
        p.test = std::move(split.test);
        p.task = std::make_unique<LogisticTask>(cfg.task.features);
        return p;
    }
    const std::filesystem::path dir(cfg.task.dataset_path);
    p.train = load_idx(find_idx(dir, {"train-images-idx3-ubyte", "train-images.idx3-ubyte"}),
                       find_idx(dir, {"train-labels-idx1-ubyte", "train-labels.idx1-ubyte"}));
    p.test = load_idx(find_idx(dir, {"t10k-images-idx3-ubyte", "test-images-idx3-ubyte"}),
                      find_idx(dir, {"t10k-labels-idx1-ubyte", "test-labels-idx1-ubyte"}));
    if (p.train.dim != p.test.dim) {
        throw std::runtime_error(dir.string() + ": train and test images differ in size");
    }
    const std::size_t classes = std::max<std::size_t>({p.train.num_classes, p.test.num_classes, 2});
    p.task = std::make_unique<MlpTask>(p.train.dim, cfg.task.hidden, classes);
    return p;
}

std::unique_ptr<Transport> make_transport(const ExperimentConfig& cfg, std::size_t q)
{
    ChannelSettings channel{cfg.channel.resolved_profile(), cfg.channel.t_sync_s, cfg.channel.sigma_n_sq()};
    switch (cfg.scheme) {
    case Scheme::ideal:
        return std::make_unique<IdealTransport>();
    case Scheme::ppm: {
        const PpmLayout layout = compute_layout(cfg.ofdm.m_bins, cfg.m_pulse, cfg.m_gap, q, cfg.guard_timing());
        return std::make_unique<PpmTransport>(cfg.ofdm, layout, std::move(channel));
    }
    case Scheme::obda:
        return std::make_unique<ObdaTransport>(cfg.ofdm, q, TciConfig::normalized(cfg.tci_threshold), true,
                                               std::move(channel));
    case Scheme::obda_no_tci:
        return std::make_unique<ObdaTransport>(cfg.ofdm, q, TciConfig::normalized(cfg.tci_threshold), false,
                                               std::move(channel));
    }
    throw ConfigError("unhandled scheme");
}

TrainOutcome cmd_train(const ExperimentConfig& cfg, std::size_t threads)
{
    const auto dir = prepare_output(cfg);
    Problem problem = make_problem(cfg);
    auto transport = make_transport(cfg, problem.task->num_params());

    const auto start = std::chrono::steady_clock::now();
    TrainOutcome outcome;
    outcome.rounds = run_training(cfg.train, *transport, problem.view(), cfg.seed, threads);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string hash = config_hash(cfg);
    outcome.rounds_csv = dir / "rounds.csv";
    {
        auto out = open_output(outcome.rounds_csv);
        out << "# config_hash=" << hash << "\n";
        out << "round,test_accuracy,mv_error_rate,wall_ms\n";
        for (const auto& r : outcome.rounds) {
            out << r.round << ',' << fmt("%.6f", r.test_accuracy) << ',' << fmt("%.6f", r.mv_error_rate)
                << ',' << fmt("%.6f", r.airtime_ms) << '\n';
        }
        finish_output(out, outcome.rounds_csv);
    }

    double mean_err = 0.0;
    for (const auto& r : outcome.rounds) {
        mean_err += r.mv_error_rate;
    }
    mean_err /= static_cast<double>(outcome.rounds.size());

    outcome.summary_json = dir / "summary.json";
    {
        json s;
        s["config_hash"] = hash;
        s["version"] = version_string();
        s["scheme"] = to_string(cfg.scheme);
        s["task"] = cfg.task.name;
        s["q"] = problem.task->num_params();
        s["rounds"] = outcome.rounds.size();
        s["final_test_accuracy"] = outcome.rounds.back().test_accuracy;
        s["mean_mv_error_rate"] = mean_err;
        s["airtime_ms_per_round"] = transport->airtime_s() * 1e3;
        s["compute_seconds"] = seconds;
        s["config"] = json::parse(canonical_json(cfg));
        auto out = open_output(outcome.summary_json);
        out << s.dump(2) << '\n';
        finish_output(out, outcome.summary_json);
    }
    return outcome;
}

PmeprSeries pmepr_series(const ExperimentConfig& cfg, const std::string& scheme, std::size_t m_pulse,
                         std::size_t n_symbols, std::size_t threads)
{
    const std::uint64_t code = scheme_code(scheme);
    const OfdmConfig& ofdm = cfg.ofdm;
    PmeprSeries series{scheme, scheme == "ppm" ? m_pulse : 0, std::vector<double>(n_symbols)};

    if (scheme == "constant") {
        const BinFrame ones(ofdm.m_bins, Complex{1.0, 0.0});
        const double v = pmepr_db(ones, ofdm, cfg.pmepr_oversample, Waveform::dft_spread);
        std::fill(series.pmepr_db.begin(), series.pmepr_db.end(), v);
        return series;
    }

    std::optional<PpmLayout> layout;
    VoteAssignment map;
    if (scheme == "ppm") {
        const std::size_t m_vote = compute_layout(ofdm.m_bins, m_pulse, cfg.m_gap, 1).m_vote;
        layout = compute_layout(ofdm.m_bins, m_pulse, cfg.m_gap, m_vote);
        map = default_vote_map(*layout);
    }
    const auto profile = cfg.channel.resolved_profile().value_or(flat_profile());
    const TciConfig tci = TciConfig::normalized(cfg.tci_threshold);

    parallel_for(n_symbols, threads, [&](std::size_t i) {
        RngStream rng = RngStream::derive(cfg.seed, Purpose::votes, {code, m_pulse, i});
        if (layout) {
            SignVector signs(layout->q);
            for (auto& s : signs) {
                s = rng.random_sign();
            }
            const auto dither = draw_dithers(rng, layout->q);
            const auto frames = encode_votes(signs, map, *layout, dither);
            series.pmepr_db[i] = pmepr_db(frames.front(), ofdm, cfg.pmepr_oversample, Waveform::dft_spread);
            return;
        }
        SignVector signs(2 * ofdm.m_bins);
        for (auto& s : signs) {
            s = rng.random_sign();
        }
        const bool use_tci = scheme == "obda";
        ComplexVec h;
        if (use_tci) {
            const auto chn = draw_channel(profile, rng, ofdm.sample_rate_hz, ofdm.cp_len);
            h = frequency_response(chn, ofdm, false);
        }
        const auto frames = obda_encode(signs, h, tci, use_tci, ofdm.m_bins);
        series.pmepr_db[i] = pmepr_db(frames.front(), ofdm, cfg.pmepr_oversample, Waveform::ofdm);
    });
    return series;
}

std::filesystem::path cmd_pmepr(const ExperimentConfig& cfg, const std::vector<std::string>& schemes,
                                const std::vector<std::size_t>& m_pulses, std::size_t n_symbols,
                                std::size_t threads, std::vector<PmeprSeries>* series_out)
{
    const auto dir = prepare_output(cfg);
    std::vector<PmeprSeries> all;
    for (const auto& scheme : schemes) {
        if (scheme == "ppm") {
            for (std::size_t mp : m_pulses) {
                all.push_back(pmepr_series(cfg, scheme, mp, n_symbols, threads));
            }
        } else {
            all.push_back(pmepr_series(cfg, scheme, 0, n_symbols, threads));
        }
    }
    const auto path = dir / "pmepr.csv";
    auto out = open_output(path);
    out << "# config_hash=" << config_hash(cfg) << "\n";
    out << "scheme,m_pulse,symbol_index,pmepr_db\n";
    for (const auto& s : all) {
        for (std::size_t i = 0; i < s.pmepr_db.size(); ++i) {
            out << s.scheme << ',' << s.m_pulse << ',' << i << ',' << fmt("%.6f", s.pmepr_db[i]) << '\n';
        }
    }
    finish_output(out, path);
    if (series_out) {
        *series_out = std::move(all);
    }
    return path;
}

std::vector<std::filesystem::path> cmd_analyze(const ExperimentConfig& cfg)
{
    namespace an = analysis;
    const auto dir = prepare_output(cfg);
    const std::string header = "# config_hash=" + config_hash(cfg) + "\n";
    std::vector<std::filesystem::path> written;

    // Symbol budget of a q = 123090 model and of the configured task.
    {
        const auto path = dir / "layout.csv";
        auto out = open_output(path);
        out << header << "q,m_pulse,m_gap,m_vote,n_symbols,obda_symbols\n";
        std::vector<std::size_t> qs{123090};
        if (cfg.task.name == "synthetic-logistic") {
            qs.push_back(cfg.task.features + 1);
        }
        for (std::size_t q : qs) {
            for (std::size_t mp : {std::size_t{1}, std::size_t{3}, std::size_t{8}, std::size_t{13}, cfg.m_pulse}) {
                if (2 * (mp + cfg.m_gap) > cfg.ofdm.m_bins) {
                    continue;
                }
                const auto l = compute_layout(cfg.ofdm.m_bins, mp, cfg.m_gap, q);
                out << q << ',' << mp << ',' << cfg.m_gap << ',' << l.m_vote << ',' << l.n_symbols << ','
                    << obda_symbol_count(q, cfg.ofdm.m_bins) << '\n';
            }
        }
        finish_output(out, path);
        written.push_back(path);
    }

    const double e_s = 2.0 * static_cast<double>(cfg.m_pulse + cfg.m_gap) / static_cast<double>(cfg.m_pulse);
    std::vector<std::size_t> ks{cfg.train.k, 10, 50};
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    {
        const auto path = dir / "bound_vs_n.csv";
        auto out = open_output(path);
        out << header << "n_rounds,K,snr_db,xi,a,bound\n";
        for (double snr : {0.0, 20.0, cfg.channel.snr_db}) {
            const double x = an::xi(cfg.m_pulse, cfg.m_gap, e_s, std::pow(10.0, -snr / 10.0));
            for (std::size_t k : ks) {
                for (int e = 1; e <= 6; ++e) {
                    an::TheoremParams p;
                    p.n_rounds = std::pow(10.0, e);
                    p.k = static_cast<double>(k);
                    p.xi = x;
                    out << fmt("%.0f", p.n_rounds) << ',' << k << ',' << fmt("%.2f", snr) << ','
                        << fmt("%.9g", x) << ',' << fmt("%.9g", an::theorem_a(p)) << ','
                        << fmt("%.9g", an::convergence_bound(p)) << '\n';
                }
            }
        }
        finish_output(out, path);
        written.push_back(path);
    }

    {
        const auto path = dir / "mv_error_vs_xi.csv";
        auto out = open_output(path);
        out << header << "K,q_i,xi_db,xi,p_mv_error\n";
        for (std::size_t k : {std::size_t{1}, std::size_t{5}, std::size_t{10}, std::size_t{50}}) {
            for (double qi : {0.0, 0.1, 0.25, 0.4, 0.5}) {
                for (int xdb = -10; xdb <= 30; ++xdb) {
                    const double x = std::pow(10.0, xdb / 10.0);
                    out << k << ',' << fmt("%.2f", qi) << ',' << xdb << ',' << fmt("%.9g", x) << ','
                        << fmt("%.9g", an::mv_error_prob(k, qi, x)) << '\n';
                }
            }
        }
        finish_output(out, path);
        written.push_back(path);
    }

    {
        const auto path = dir / "split_error.csv";
        auto out = open_output(path);
        out << header << "K,k_plus,snr_db,xi,p_sign_error\n";
        for (double snr : {0.0, 20.0}) {
            const double x = an::xi(cfg.m_pulse, cfg.m_gap, e_s, std::pow(10.0, -snr / 10.0));
            for (std::size_t kp = 0; kp <= cfg.train.k; ++kp) {
                out << cfg.train.k << ',' << kp << ',' << fmt("%.2f", snr) << ',' << fmt("%.9g", x) << ','
                    << fmt("%.9g", an::sign_error_prob_given_split(cfg.train.k, kp, x)) << '\n';
            }
        }
        finish_output(out, path);
        written.push_back(path);
    }
    return written;
}

} // namespace ppmv
