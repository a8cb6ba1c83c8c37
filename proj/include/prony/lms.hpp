#ifndef PRONY_LMS_HPP
#define PRONY_LMS_HPP

#include <optional>
#include <span>
#include <vector>

#include "prony/signal.hpp"

namespace prony::lms {

/// Filter length, convergence coefficient and (optionally) non-zero
/// starting weights.
struct LmsConfig {
    int taps = 32;
    double mu = 0.01;
    std::vector<double> initial_weights; // empty = all zero

    void validate() const;
};

/// Weights plus the delay line (newest sample first).
struct LmsState {
    std::vector<double> weights;
    std::vector<double> delay_line;

    static LmsState zero(const LmsConfig& config);
};

struct LmsStepResult {
    double output = 0.0; // y = w . u
    double error = 0.0;  // e = desired - y
    LmsState next;
};

struct LmsRunResult {
    std::vector<double> output;
    std::vector<double> error;
    LmsState final_state;
    std::optional<std::vector<std::vector<double>>> weight_history;
};

/// One update: shift the reference sample in, filter, then
/// w <- w + mu * e * u. Throws DivergenceError when a weight leaves the
/// finite range.
LmsStepResult lms_step(const LmsState& state, double ref_sample,
                       double desired_sample, const LmsConfig& config);

/// Fold lms_step over the two sequences starting from a zeroed state.
/// DivergenceError carries the failing sample index.
LmsRunResult lms_run(const LmsConfig& config, std::span<const double> reference,
                     std::span<const double> desired,
                     bool record_weight_history = false);

/// Adaptive noise cancellation: desired = clean + noise, reference =
/// noise, recovered = error signal. pm compares recovered against clean.
struct DenoiseResult {
    std::vector<double> recovered;
    double pm = 0.0;
};
DenoiseResult denoise_experiment(const SampledSignal& clean,
                                 std::span<const double> noise,
                                 const LmsConfig& config);

/// Adaptive smoothing: the filter is driven by the noisy input and
/// chases the input passed through a fixed lowpass system; the filter
/// output is the recovered signal and pm compares it against the input.
/// This is the wiring whose precision swings run to run.
struct SmoothingResult {
    std::vector<double> recovered;
    double pm = 0.0;
};
SmoothingResult smoothing_experiment(const SampledSignal& input,
                                     std::span<const double> system_fir,
                                     const LmsConfig& config);

/// Unit-DC-gain Hann-windowed lowpass of the given length, the default
/// "unknown system" of the smoothing experiment.
std::vector<double> hann_lowpass(int length);

/// Causal FIR convolution with zero prehistory.
std::vector<double> fir_filter(std::span<const double> coeffs,
                               std::span<const double> x);

} // namespace prony::lms

#endif
