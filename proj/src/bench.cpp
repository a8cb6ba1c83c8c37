#include "prony/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "prony/errors.hpp"

namespace prony::bench {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

unsigned worker_count(int runs) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (const char* env = std::getenv("PRONY_ADAPT_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && parsed >= 1)
            workers = static_cast<unsigned>(parsed);
    }
    return std::min<unsigned>(workers, static_cast<unsigned>(runs));
}

RunRecord single_run(const ExperimentConfig& config, int run_index) {
    RunRecord record;
    record.run_index = run_index;
    record.seed = config.seeds +
                  (config.reuse_signal ? 0u : static_cast<std::uint64_t>(run_index));

    const auto t0 = std::chrono::steady_clock::now();
    try {
        const signals::NoiseSpec noise{signals::NoiseKind::Gaussian,
                                       config.signal.noise_sigma, record.seed};
        const signals::GeneratedSignal gen = signals::gen_damped_sinusoids(
            config.signal.components, static_cast<std::size_t>(config.n),
            config.signal.ts, noise);

        if (config.kind == ExperimentKind::Lms) {
            const std::vector<double> fir = lms::hann_lowpass(*config.smoother_taps);
            record.pm = lms::smoothing_experiment(gen.noisy, fir, *config.lms).pm;
        } else {
            const AdjustmentPolicy policy = config.kind == ExperimentKind::PronyAdapted
                                                ? *config.policy
                                                : AdjustmentPolicy::none();
            const PronyComponents components =
                prony_decompose(gen.noisy, *config.p, *config.method, policy);
            const SampledSignal rec = reconstruct(components, config.n);
            record.pm =
                metrics::precision_measure(gen.noisy.samples, rec.samples).pm;
        }
        if (!std::isfinite(record.pm))
            throw Error("non-finite precision measure");
        record.ok = true;
    } catch (const std::exception& e) {
        record.ok = false;
        record.error = e.what();
        record.pm = std::nan("");
    }
    const auto t1 = std::chrono::steady_clock::now();
    record.wall_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
    return record;
}

std::string insert_label(const std::string& path, const std::string& label) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_" + label;
    return path.substr(0, dot) + "_" + label + path.substr(dot);
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

const char* target_name(AdjustmentPolicy::Target target) {
    switch (target) {
    case AdjustmentPolicy::Target::None: return "none";
    case AdjustmentPolicy::Target::Coefficients: return "coefficients";
    case AdjustmentPolicy::Target::Roots: return "roots";
    }
    return "?";
}

AdjustmentPolicy::Target parse_target(const std::string& name) {
    if (name == "none") return AdjustmentPolicy::Target::None;
    if (name == "coefficients") return AdjustmentPolicy::Target::Coefficients;
    if (name == "roots") return AdjustmentPolicy::Target::Roots;
    throw ConfigError("unknown adjustment target '" + name + "'");
}

void require_keys(const nlohmann::json& obj,
                  std::initializer_list<const char*> allowed,
                  const char* context) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) { known = true; break; }
        if (!known)
            throw ConfigError(std::string("unknown key '") + item.key() +
                              "' in " + context);
    }
}

} // namespace

ExperimentKind parse_experiment_kind(std::string_view name) {
    if (name == "prony_adapted") return ExperimentKind::PronyAdapted;
    if (name == "prony_plain") return ExperimentKind::PronyPlain;
    if (name == "lms") return ExperimentKind::Lms;
    throw ConfigError("unknown experiment kind '" + std::string(name) +
                      "' (expected prony_adapted, prony_plain or lms)");
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::PronyAdapted: return "prony_adapted";
    case ExperimentKind::PronyPlain: return "prony_plain";
    case ExperimentKind::Lms: return "lms";
    }
    return "?";
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    throw ConfigError("unknown report format '" + std::string(name) +
                      "' (expected json or csv)");
}

SignalFamily default_prony_family() {
    SignalFamily family;
    family.components = {{1.0, -0.05, 0.08, 0.0}, {0.6, -0.02, 0.21, 0.0}};
    family.ts = 1.0;
    family.noise_sigma = 0.05;
    return family;
}

SignalFamily default_lms_family() {
    SignalFamily family = default_prony_family();
    family.noise_sigma = 0.5;
    return family;
}

double default_adjustment_multiplier(int n) {
    return static_cast<double>(n) / 100.0;
}

void ExperimentConfig::resolve_and_validate() {
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (n < 2) throw ConfigError("n must be >= 2");
    if (!(signal.ts > 0.0)) throw ConfigError("signal.ts must be > 0");
    if (signal.noise_sigma < 0.0)
        throw ConfigError("signal.noise.sigma must be >= 0");
    const double nyquist = 1.0 / (2.0 * signal.ts);
    for (const auto& c : signal.components) {
        if (!(c.amplitude > 0.0))
            throw ConfigError("component amplitude must be > 0");
        if (!(std::abs(c.frequency) < nyquist))
            throw ConfigError("component frequency at or above Nyquist");
    }

    if (kind == ExperimentKind::Lms) {
        if (p || method || policy)
            throw ConfigError("p/method/policy are not valid for lms experiments");
        if (!lms) lms = lms::LmsConfig{};
        try {
            lms->validate();
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        if (!smoother_taps) smoother_taps = 32;
        if (*smoother_taps < 1)
            throw ConfigError("smoother_taps must be >= 1");
        return;
    }

    if (lms || smoother_taps)
        throw ConfigError("lms/smoother_taps are not valid for Prony experiments");
    if (!p) p = 4;
    if (*p < 1) throw ConfigError("p must be >= 1");
    if (!method) method = SolveMethod::Ls;
    if (kind == ExperimentKind::PronyPlain) {
        if (policy)
            throw ConfigError("policy is not valid for prony_plain experiments");
    } else {
        if (!policy)
            policy = AdjustmentPolicy::coefficients(default_adjustment_multiplier(n));
        if (policy->multiplier < 0.0)
            throw ConfigError("policy.multiplier must be >= 0");
    }
}

bool BenchReport::any_tier_fully_failed() const {
    for (const auto& [label, report] : tiers) {
        bool all_failed = !report.runs.empty();
        for (const auto& run : report.runs)
            if (run.ok) { all_failed = false; break; }
        if (all_failed) return true;
    }
    return false;
}

ExperimentReport run_experiment(ExperimentConfig config) {
    config.resolve_and_validate();

    ExperimentReport report;
    report.config = config;
    report.runs.resize(static_cast<std::size_t>(config.runs));

    const unsigned workers = worker_count(config.runs);
    std::atomic<int> next{0};
    const auto worker = [&] {
        for (;;) {
            const int index = next.fetch_add(1);
            if (index >= config.runs) return;
            report.runs[static_cast<std::size_t>(index)] =
                single_run(config, index);
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }

    std::vector<double> pms;
    pms.reserve(report.runs.size());
    for (const auto& run : report.runs)
        if (run.ok) pms.push_back(run.pm);
    if (!pms.empty()) report.statistics = metrics::run_statistics(pms);
    return report;
}

BenchReport run_tiers(const std::vector<Tier>& tiers) {
    BenchReport report;
    report.tiers.reserve(tiers.size());
    for (const auto& tier : tiers)
        report.tiers.emplace_back(tier.label, run_experiment(tier.config));
    return report;
}

std::vector<Tier> preset_paper_table_12(int runs, std::uint64_t seed) {
    std::vector<Tier> tiers;
    for (const auto& [n, k] : {std::pair<int, double>{100, 1.0},
                               {1000, 10.0},
                               {10000, 100.0}}) {
        ExperimentConfig config;
        config.kind = ExperimentKind::PronyAdapted;
        config.signal = default_prony_family();
        config.n = n;
        config.p = 4;
        config.method = SolveMethod::Ls;
        config.policy = AdjustmentPolicy::coefficients(k);
        config.runs = runs;
        config.seeds = seed;

        Tier same{"n" + std::to_string(n) + "_k" + format_double(k) + "_same",
                  config};
        same.config.reuse_signal = true;
        tiers.push_back(same);

        Tier rerand{"n" + std::to_string(n) + "_k" + format_double(k) + "_rerand",
                    config};
        rerand.config.reuse_signal = false;
        tiers.push_back(rerand);
    }
    return tiers;
}

std::vector<Tier> preset_paper_table_13(int runs, std::uint64_t seed) {
    std::vector<Tier> tiers;

    for (int n : {225, 202}) {
        ExperimentConfig config;
        config.kind = ExperimentKind::Lms;
        config.signal = default_lms_family();
        config.n = n;
        config.lms = lms::LmsConfig{};
        config.smoother_taps = 32;
        config.runs = runs;
        config.seeds = seed;
        tiers.push_back({"lms_n" + std::to_string(n), config});
    }

    ExperimentConfig prony;
    prony.kind = ExperimentKind::PronyAdapted;
    prony.signal = default_lms_family();
    prony.n = 225;
    prony.p = 4;
    prony.method = SolveMethod::Ls;
    prony.policy = AdjustmentPolicy::coefficients(default_adjustment_multiplier(225));
    prony.runs = runs;
    prony.seeds = seed;

    Tier same{"prony_adapted_n225_same", prony};
    same.config.reuse_signal = true;
    tiers.push_back(same);
    Tier rerand{"prony_adapted_n225_rerand", prony};
    rerand.config.reuse_signal = false;
    tiers.push_back(rerand);

    return tiers;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& config) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["kind"] = to_string(config.kind);

    nlohmann::ordered_json components = nlohmann::ordered_json::array();
    for (const auto& c : config.signal.components)
        components.push_back({{"amplitude", c.amplitude},
                              {"damping", c.damping},
                              {"frequency", c.frequency},
                              {"phase", c.phase}});
    doc["signal"] = {{"components", components},
                     {"ts", config.signal.ts},
                     {"noise", {{"kind", "gaussian"},
                                {"sigma", config.signal.noise_sigma}}}};
    doc["n"] = config.n;
    if (config.p) doc["p"] = *config.p;
    if (config.method) doc["method"] = to_string(*config.method);
    if (config.policy)
        doc["policy"] = {{"target", target_name(config.policy->target)},
                         {"multiplier", config.policy->multiplier},
                         {"normalize_by_order", config.policy->normalize_by_order}};
    if (config.lms) {
        nlohmann::ordered_json lms_doc = {{"taps", config.lms->taps},
                                          {"mu", config.lms->mu}};
        if (!config.lms->initial_weights.empty())
            lms_doc["initial_weights"] = config.lms->initial_weights;
        doc["lms"] = lms_doc;
    }
    if (config.smoother_taps) doc["smoother_taps"] = *config.smoother_taps;
    doc["runs"] = config.runs;
    doc["seeds"] = config.seeds;
    doc["reuse_signal"] = config.reuse_signal;
    return doc;
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object())
        throw ConfigError("config document must be a JSON object");
    require_keys(doc,
                 {"schema_version", "kind", "signal", "n", "p", "method",
                  "policy", "lms", "smoother_taps", "runs", "seeds",
                  "reuse_signal"},
                 "config");
    if (doc.contains("schema_version") && doc["schema_version"] != 1)
        throw ConfigError("unsupported config schema_version");
    if (!doc.contains("kind"))
        throw ConfigError("config is missing 'kind'");

    ExperimentConfig config;
    config.kind = parse_experiment_kind(doc["kind"].get<std::string>());

    if (doc.contains("signal")) {
        const auto& sig = doc["signal"];
        require_keys(sig, {"components", "ts", "noise"}, "signal");
        if (sig.contains("components")) {
            config.signal.components.clear();
            for (const auto& c : sig["components"]) {
                require_keys(c, {"amplitude", "damping", "frequency", "phase"},
                             "signal component");
                signals::ComponentSpec spec;
                spec.amplitude = c.value("amplitude", 1.0);
                spec.damping = c.value("damping", 0.0);
                spec.frequency = c.value("frequency", 0.0);
                spec.phase = c.value("phase", 0.0);
                config.signal.components.push_back(spec);
            }
        }
        config.signal.ts = sig.value("ts", 1.0);
        if (sig.contains("noise")) {
            require_keys(sig["noise"], {"kind", "sigma"}, "noise");
            if (sig["noise"].value("kind", "gaussian") != std::string("gaussian"))
                throw ConfigError("noise.kind must be 'gaussian'");
            config.signal.noise_sigma = sig["noise"].value("sigma", 0.0);
        }
    }

    if (!doc.contains("n")) throw ConfigError("config is missing 'n'");
    config.n = doc["n"].get<int>();
    if (doc.contains("p")) config.p = doc["p"].get<int>();
    if (doc.contains("method"))
        config.method = parse_solve_method(doc["method"].get<std::string>());
    if (doc.contains("policy")) {
        const auto& pol = doc["policy"];
        require_keys(pol, {"target", "multiplier", "normalize_by_order"},
                     "policy");
        AdjustmentPolicy policy;
        policy.target = parse_target(pol.value("target", "none"));
        policy.multiplier = pol.value("multiplier", 0.0);
        policy.normalize_by_order = pol.value("normalize_by_order", false);
        config.policy = policy;
    }
    if (doc.contains("lms")) {
        const auto& lm = doc["lms"];
        require_keys(lm, {"taps", "mu", "initial_weights"}, "lms");
        lms::LmsConfig lms_config;
        lms_config.taps = lm.value("taps", 32);
        lms_config.mu = lm.value("mu", 0.01);
        if (lm.contains("initial_weights"))
            lms_config.initial_weights =
                lm["initial_weights"].get<std::vector<double>>();
        config.lms = lms_config;
    }
    if (doc.contains("smoother_taps"))
        config.smoother_taps = doc["smoother_taps"].get<int>();
    config.runs = doc.value("runs", 10);
    config.seeds = doc.value("seeds", std::uint64_t{0});
    config.reuse_signal = doc.value("reuse_signal", false);
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
    try {
        ExperimentConfig config = config_from_json(doc);
        config.resolve_and_validate();
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad config '" + path + "': " + e.what());
    }
}

nlohmann::ordered_json report_to_json(const BenchReport& report,
                                      bool strip_timing) {
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["generator"] = "prony-adapt";
    doc["tiers"] = nlohmann::ordered_json::array();
    for (const auto& [label, tier] : report.tiers) {
        nlohmann::ordered_json entry;
        entry["label"] = label;
        entry["config"] = config_to_json(tier.config);
        entry["runs"] = nlohmann::ordered_json::array();
        nlohmann::ordered_json per_run_ms = nlohmann::ordered_json::array();
        double total_ms = 0.0;
        for (const auto& run : tier.runs) {
            nlohmann::ordered_json r;
            r["run_index"] = run.run_index;
            r["seed"] = run.seed;
            r["ok"] = run.ok;
            if (run.ok)
                r["pm"] = run.pm;
            else
                r["pm"] = nullptr;
            r["error"] = run.ok ? nlohmann::ordered_json(nullptr)
                                : nlohmann::ordered_json(run.error);
            entry["runs"].push_back(r);
            const double ms = strip_timing ? 0.0 : run.wall_ms;
            per_run_ms.push_back(ms);
            total_ms += ms;
        }
        if (tier.statistics) {
            entry["statistics"] = {{"count", tier.statistics->count},
                                   {"mean", tier.statistics->mean},
                                   {"std", tier.statistics->stddev},
                                   {"min", tier.statistics->min},
                                   {"max", tier.statistics->max}};
        } else {
            entry["statistics"] = nullptr;
        }
        entry["timing_ms"] = {{"per_run", per_run_ms}, {"total", total_ms}};
        doc["tiers"].push_back(entry);
    }
    return doc;
}

void emit_report(const BenchReport& report, ReportFormat format,
                 const std::string& path, bool strip_timing) {
    if (format == ReportFormat::Json) {
        write_file(path, report_to_json(report, strip_timing).dump(2) + "\n");
        return;
    }

    for (const auto& [label, tier] : report.tiers) {
        std::ostringstream out;
        out << "run_index,seed,pm,wall_ms\n";
        for (const auto& run : tier.runs) {
            char wall[32];
            std::snprintf(wall, sizeof(wall), "%.3f",
                          strip_timing ? 0.0 : run.wall_ms);
            out << run.run_index << ',' << run.seed << ','
                << (run.ok ? format_double(run.pm) : "nan") << ',' << wall
                << '\n';
        }
        const std::string file = report.tiers.size() == 1
                                     ? path
                                     : insert_label(path, label);
        write_file(file, out.str());
    }
}

void emit_plot_data(std::span<const double> clean,
                    std::span<const double> noisy,
                    std::span<const double> recovered,
                    const std::string& path) {
    if (clean.size() != noisy.size() || clean.size() != recovered.size())
        throw InvalidArgument("emit_plot_data: trace lengths differ");

    std::ostringstream out;
    out << "n,clean,noisy,recovered\n";
    for (std::size_t i = 0; i < clean.size(); ++i)
        out << i << ',' << format_double(clean[i]) << ','
            << format_double(noisy[i]) << ',' << format_double(recovered[i])
            << '\n';
    write_file(path, out.str());
}

PlotTraces plot_traces(const ExperimentConfig& config) {
    ExperimentConfig resolved = config;
    resolved.resolve_and_validate();

    const signals::NoiseSpec noise{signals::NoiseKind::Gaussian,
                                   resolved.signal.noise_sigma, resolved.seeds};
    const signals::GeneratedSignal gen = signals::gen_damped_sinusoids(
        resolved.signal.components, static_cast<std::size_t>(resolved.n),
        resolved.signal.ts, noise);

    PlotTraces traces;
    traces.clean = gen.clean.samples;
    traces.noisy = gen.noisy.samples;
    if (resolved.kind == ExperimentKind::Lms) {
        const std::vector<double> fir = lms::hann_lowpass(*resolved.smoother_taps);
        traces.recovered =
            lms::smoothing_experiment(gen.noisy, fir, *resolved.lms).recovered;
    } else {
        const AdjustmentPolicy policy =
            resolved.kind == ExperimentKind::PronyAdapted
                ? *resolved.policy
                : AdjustmentPolicy::none();
        const PronyComponents components =
            prony_decompose(gen.noisy, *resolved.p, *resolved.method, policy);
        traces.recovered = reconstruct(components, resolved.n).samples;
    }
    return traces;
}

} // namespace prony::bench
