#include "prony/signals.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string_view>

#include "prony/errors.hpp"

namespace prony::signals {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(std::string_view text, std::size_t line) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw CsvError("not a number: '" + std::string(text) + "'", line);
    return value;
}

} // namespace

double GaussianSampler::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 =
        static_cast<double>(engine_() >> 11) * 0x1.0p-53; // [0, 1)
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::vector<double> gen_gaussian_noise(std::size_t n, const NoiseSpec& noise) {
    if (noise.sigma < 0.0)
        throw InvalidArgument("gen_gaussian_noise: sigma must be >= 0");
    std::vector<double> draws(n, 0.0);
    if (noise.sigma == 0.0) return draws;

    GaussianSampler sampler(noise.seed);
    for (double& d : draws) d = noise.sigma * sampler.next();
    return draws;
}

GeneratedSignal gen_damped_sinusoids(const std::vector<ComponentSpec>& specs,
                                     std::size_t n, double ts,
                                     const NoiseSpec& noise) {
    if (n < 2)
        throw InvalidArgument("gen_damped_sinusoids: need at least 2 samples");
    if (!(ts > 0.0))
        throw InvalidArgument("gen_damped_sinusoids: sample period must be > 0");
    const double nyquist = 1.0 / (2.0 * ts);
    for (const auto& spec : specs) {
        if (!(spec.amplitude > 0.0))
            throw InvalidArgument("gen_damped_sinusoids: amplitude must be > 0");
        if (!(std::abs(spec.frequency) < nyquist))
            throw InvalidArgument(
                "gen_damped_sinusoids: frequency " + format_double(spec.frequency) +
                " Hz at or above Nyquist " + format_double(nyquist) + " Hz");
    }

    std::vector<double> clean(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * ts;
        for (const auto& spec : specs)
            clean[k] += spec.amplitude * std::exp(spec.damping * t) *
                        std::cos(2.0 * std::numbers::pi * spec.frequency * t +
                                 spec.phase);
    }

    GeneratedSignal out;
    if (noise.sigma == 0.0) {
        out.noisy = SampledSignal(clean, ts);
    } else {
        const std::vector<double> draws = gen_gaussian_noise(n, noise);
        std::vector<double> noisy(clean);
        for (std::size_t k = 0; k < n; ++k) noisy[k] += draws[k];
        out.noisy = SampledSignal(std::move(noisy), ts);
    }
    out.clean = SampledSignal(std::move(clean), ts);
    return out;
}

SampledSignal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line))
        throw CsvError("'" + path + "' is empty, expected a #ts= header", 1);

    constexpr std::string_view kHeader = "#ts=";
    if (line.rfind(kHeader, 0) != 0)
        throw CsvError("'" + path + "' missing #ts= header", 1);
    const double ts = parse_double(std::string_view(line).substr(kHeader.size()), 1);

    std::vector<double> samples;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        samples.push_back(parse_double(line, lineno));
    }
    if (samples.empty())
        throw CsvError("'" + path + "' has no samples", 1);
    return SampledSignal(std::move(samples), ts);
}

void write_signal_csv(const std::string& path, const SampledSignal& signal) {
    std::ostringstream out;
    out << "#ts=" << format_double(signal.ts) << '\n';
    for (double v : signal.samples) out << format_double(v) << '\n';

    std::ofstream file(path, std::ios::binary); // LF endings everywhere
    if (!file)
        throw IoError("cannot open '" + path + "' for writing");
    file << out.str();
    if (!file)
        throw IoError("write failed for '" + path + "'");
}

} // namespace prony::signals
