#include "prony/lms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "prony/errors.hpp"
#include "prony/metrics.hpp"

namespace prony::lms {

void LmsConfig::validate() const {
    if (taps < 1)
        throw InvalidArgument("LmsConfig: taps must be >= 1");
    if (!(mu >= 0.0))
        throw InvalidArgument("LmsConfig: mu must be >= 0");
    if (!initial_weights.empty() &&
        initial_weights.size() != static_cast<std::size_t>(taps))
        throw InvalidArgument("LmsConfig: initial_weights length != taps");
}

LmsState LmsState::zero(const LmsConfig& config) {
    config.validate();
    LmsState state;
    state.weights = config.initial_weights.empty()
                        ? std::vector<double>(static_cast<std::size_t>(config.taps), 0.0)
                        : config.initial_weights;
    state.delay_line.assign(static_cast<std::size_t>(config.taps), 0.0);
    return state;
}

LmsStepResult lms_step(const LmsState& state, double ref_sample,
                       double desired_sample, const LmsConfig& config) {
    config.validate();
    const auto taps = static_cast<std::size_t>(config.taps);
    if (state.weights.size() != taps || state.delay_line.size() != taps)
        throw InvalidArgument("lms_step: state size does not match config");

    LmsStepResult result;
    result.next.delay_line.resize(taps);
    result.next.delay_line[0] = ref_sample;
    for (std::size_t i = 1; i < taps; ++i)
        result.next.delay_line[i] = state.delay_line[i - 1];

    double y = 0.0;
    for (std::size_t i = 0; i < taps; ++i)
        y += state.weights[i] * result.next.delay_line[i];
    result.output = y;
    result.error = desired_sample - y;

    result.next.weights.resize(taps);
    for (std::size_t i = 0; i < taps; ++i) {
        const double w = state.weights[i] +
                         config.mu * result.error * result.next.delay_line[i];
        if (!std::isfinite(w))
            throw DivergenceError("lms_step: weight " + std::to_string(i) +
                                  " diverged to a non-finite value");
        result.next.weights[i] = w;
    }
    return result;
}

LmsRunResult lms_run(const LmsConfig& config, std::span<const double> reference,
                     std::span<const double> desired,
                     bool record_weight_history) {
    if (reference.size() != desired.size())
        throw InvalidArgument("lms_run: reference and desired lengths differ");
    if (reference.empty())
        throw InvalidArgument("lms_run: empty input");

    LmsRunResult result;
    result.output.reserve(reference.size());
    result.error.reserve(reference.size());
    if (record_weight_history)
        result.weight_history.emplace();

    LmsState state = LmsState::zero(config);
    for (std::size_t n = 0; n < reference.size(); ++n) {
        LmsStepResult step;
        try {
            step = lms_step(state, reference[n], desired[n], config);
        } catch (const DivergenceError& e) {
            throw DivergenceError(e.what(), static_cast<long>(n));
        }
        result.output.push_back(step.output);
        result.error.push_back(step.error);
        state = std::move(step.next);
        if (record_weight_history)
            result.weight_history->push_back(state.weights);
    }
    result.final_state = std::move(state);
    return result;
}

DenoiseResult denoise_experiment(const SampledSignal& clean,
                                 std::span<const double> noise,
                                 const LmsConfig& config) {
    if (noise.size() != clean.size())
        throw InvalidArgument("denoise_experiment: clean and noise lengths differ");

    std::vector<double> desired(clean.samples);
    for (std::size_t i = 0; i < desired.size(); ++i) desired[i] += noise[i];

    const LmsRunResult run = lms_run(config, noise, desired);

    DenoiseResult result;
    result.recovered = run.error;
    result.pm = metrics::precision_measure(clean.samples, result.recovered).pm;
    return result;
}

SmoothingResult smoothing_experiment(const SampledSignal& input,
                                     std::span<const double> system_fir,
                                     const LmsConfig& config) {
    if (system_fir.empty())
        throw InvalidArgument("smoothing_experiment: empty system response");

    const std::vector<double> desired = fir_filter(system_fir, input.samples);
    const LmsRunResult run = lms_run(config, input.samples, desired);

    SmoothingResult result;
    result.recovered = run.output;
    result.pm = metrics::precision_measure(input.samples, result.recovered).pm;
    return result;
}

std::vector<double> hann_lowpass(int length) {
    if (length < 1)
        throw InvalidArgument("hann_lowpass: length must be >= 1");
    std::vector<double> h(static_cast<std::size_t>(length));
    double sum = 0.0;
    for (int i = 0; i < length; ++i) {
        h[static_cast<std::size_t>(i)] =
            0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 1) / (length + 1));
        sum += h[static_cast<std::size_t>(i)];
    }
    for (double& v : h) v /= sum;
    return h;
}

std::vector<double> fir_filter(std::span<const double> coeffs,
                               std::span<const double> x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n)
        for (std::size_t m = 0; m < coeffs.size() && m <= n; ++m)
            y[n] += coeffs[m] * x[n - m];
    return y;
}

} // namespace prony::lms
