#ifndef PRONY_BENCH_HPP
#define PRONY_BENCH_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prony/lms.hpp"
#include "prony/metrics.hpp"
#include "prony/pipeline.hpp"
#include "prony/signals.hpp"

namespace prony::bench {

enum class ExperimentKind { PronyAdapted, PronyPlain, Lms };

ExperimentKind parse_experiment_kind(std::string_view name);
std::string to_string(ExperimentKind kind);

/// Synthetic signal family an experiment draws from: deterministic damped
/// sinusoids plus seeded Gaussian noise (the seed comes per run).
struct SignalFamily {
    std::vector<signals::ComponentSpec> components;
    double ts = 1.0;
    double noise_sigma = 0.0;
};

/// One experiment tier, mirroring the JSON config document field for
/// field. Prony fields must be absent for LMS runs and vice versa.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::PronyAdapted;
    SignalFamily signal;
    int n = 100;

    // Prony experiments
    std::optional<int> p;
    std::optional<SolveMethod> method;
    std::optional<AdjustmentPolicy> policy; // prony_adapted only

    // LMS experiments
    std::optional<lms::LmsConfig> lms;
    std::optional<int> smoother_taps; // length of the fixed lowpass target

    int runs = 10;
    std::uint64_t seeds = 0;   // base seed; run r uses seeds + r
    bool reuse_signal = false; // true = every run repeats the base-seed signal

    /// Throws ConfigError; fills kind-appropriate defaults (p = 4,
    /// method = ls, multiplier k = n/100, smoother taps = 32).
    void resolve_and_validate();
};

struct RunRecord {
    int run_index = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double pm = 0.0;
    std::string error; // empty when ok
    double wall_ms = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config; // resolved
    std::vector<RunRecord> runs;
    std::optional<metrics::RunStatistics> statistics; // over successful runs
};

struct Tier {
    std::string label;
    ExperimentConfig config;
};

struct BenchReport {
    std::vector<std::pair<std::string, ExperimentReport>> tiers;

    /// True when at least one tier had every run fail.
    bool any_tier_fully_failed() const;
};

/// Documented artifact defaults standing in for the unspecified test
/// signals: two damped sinusoids at 0.08 Hz and 0.21 Hz, ts = 1.
SignalFamily default_prony_family(); // noise sigma 0.05
SignalFamily default_lms_family();   // noise sigma 0.5

/// Adjustment multiplier rule for the tiered experiments: k = n / 100.
double default_adjustment_multiplier(int n);

/// Execute all runs of one tier. Individual run failures are recorded,
/// never propagated. Runs execute in parallel (capped by the
/// PRONY_ADAPT_THREADS environment variable); records come back in run
/// order regardless of scheduling.
ExperimentReport run_experiment(ExperimentConfig config);

BenchReport run_tiers(const std::vector<Tier>& tiers);

/// The three-tier adjusted-Prony precision table (n = 100/1000/10000 with
/// k = 1/10/100), each tier both with same-signal repetition and with
/// re-randomized noise.
std::vector<Tier> preset_paper_table_12(int runs = 10, std::uint64_t seed = 2024);

/// The LMS contrast experiment: seeded LMS smoothing sweeps at n = 225
/// and n = 202 next to adjusted-Prony runs on the same signal class.
std::vector<Tier> preset_paper_table_13(int runs = 10, std::uint64_t seed = 2024);

enum class ReportFormat { Json, Csv };

ReportFormat parse_report_format(std::string_view name);

/// JSON: the whole report as one document at `path`. CSV: one file per
/// tier with columns run_index,seed,pm,wall_ms; a single tier writes
/// exactly `path`, multiple tiers insert _<label> before the extension.
/// strip_timing zeroes every wall-clock field, making repeated identical
/// configs produce byte-identical files.
void emit_report(const BenchReport& report, ReportFormat format,
                 const std::string& path, bool strip_timing = false);

nlohmann::ordered_json report_to_json(const BenchReport& report,
                                      bool strip_timing = false);

/// Four-column trace file (n,clean,noisy,recovered) for external plotting.
void emit_plot_data(std::span<const double> clean,
                    std::span<const double> noisy,
                    std::span<const double> recovered,
                    const std::string& path);

/// Re-derive the run-0 traces of a tier for emit_plot_data.
struct PlotTraces {
    std::vector<double> clean;
    std::vector<double> noisy;
    std::vector<double> recovered;
};
PlotTraces plot_traces(const ExperimentConfig& config);

ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const ExperimentConfig& config);

} // namespace prony::bench

#endif
