#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prony/bench.hpp"
#include "prony/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartialFailure = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitIoFailure = 3;

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

void print_summary(const prony::bench::BenchReport& report) {
    for (const auto& [label, tier] : report.tiers) {
        std::size_t ok = 0;
        for (const auto& run : tier.runs)
            if (run.ok) ++ok;
        std::printf("%-28s runs %zu/%zu ok", label.c_str(), ok,
                    tier.runs.size());
        if (tier.statistics) {
            std::printf("  pm mean=%.6g std=%.6g min=%.6g max=%.6g",
                        tier.statistics->mean, tier.statistics->stddev,
                        tier.statistics->min, tier.statistics->max);
        }
        std::printf("\n");
        for (const auto& run : tier.runs)
            if (!run.ok)
                std::fprintf(stderr, "  run %d failed: %s\n", run.run_index,
                             run.error.c_str());
    }
}

int run_command(const std::string& config_path, const std::string& preset,
                const std::string& out_dir, const std::string& format_name,
                int runs_override, long long seed_override, bool strip_timing,
                bool plot_data) {
    namespace bench = prony::bench;

    std::vector<bench::Tier> tiers;
    if (!preset.empty()) {
        if (preset == "paper-table-12")
            tiers = bench::preset_paper_table_12();
        else if (preset == "paper-table-13")
            tiers = bench::preset_paper_table_13();
        else
            throw prony::ConfigError("unknown preset '" + preset +
                                     "' (expected paper-table-12 or paper-table-13)");
    } else {
        tiers.push_back({file_stem(config_path), bench::load_config(config_path)});
    }

    for (auto& tier : tiers) {
        if (runs_override > 0) tier.config.runs = runs_override;
        if (seed_override >= 0)
            tier.config.seeds = static_cast<std::uint64_t>(seed_override);
        tier.config.resolve_and_validate();
    }

    const bench::ReportFormat format = bench::parse_report_format(format_name);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw prony::IoError("cannot create output directory '" + out_dir +
                             "': " + ec.message());

    const bench::BenchReport report = bench::run_tiers(tiers);

    const std::string report_path =
        out_dir + (format == bench::ReportFormat::Json ? "/report.json"
                                                       : "/runs.csv");
    bench::emit_report(report, format, report_path, strip_timing);
    if (format == bench::ReportFormat::Csv && report.tiers.size() > 1)
        std::printf("reports written to %s/runs_<tier>.csv\n", out_dir.c_str());
    else
        std::printf("report written to %s\n", report_path.c_str());

    if (plot_data) {
        for (const auto& tier : tiers) {
            const bench::PlotTraces traces = bench::plot_traces(tier.config);
            const std::string path = out_dir + "/trace_" + tier.label + ".csv";
            bench::emit_plot_data(traces.clean, traces.noisy, traces.recovered,
                                  path);
            std::printf("plot data written to %s\n", path.c_str());
        }
    }

    print_summary(report);
    return report.any_tier_fully_failed() ? kExitPartialFailure : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prony decomposition benchmark runner"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute an experiment and emit reports");
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::string format = "json";
    int runs_override = 0;
    long long seed_override = -1;
    bool strip_timing = false;
    bool plot_data = false;

    auto* config_opt =
        run->add_option("--config", config_path, "experiment config (JSON)");
    auto* preset_opt = run->add_option(
        "--preset", preset, "built-in suite: paper-table-12 | paper-table-13");
    config_opt->excludes(preset_opt);
    run->add_option("--out", out_dir, "output directory (default .)");
    run->add_option("--format", format, "report format: json | csv");
    run->add_option("--runs", runs_override, "override repetition count");
    run->add_option("--seed", seed_override, "override base seed");
    run->add_flag("--strip-timing", strip_timing,
                  "zero wall-clock fields so identical configs produce "
                  "byte-identical reports");
    run->add_flag("--plot-data", plot_data,
                  "also write per-tier n,clean,noisy,recovered traces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidConfig;
    }

    try {
        if (config_path.empty() && preset.empty())
            throw prony::ConfigError("one of --config or --preset is required");
        return run_command(config_path, preset, out_dir, format, runs_override,
                           seed_override, strip_timing, plot_data);
    } catch (const prony::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalidConfig;
    } catch (const prony::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIoFailure;
    } catch (const prony::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return kExitIoFailure;
    }
}
