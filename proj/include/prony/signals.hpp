#ifndef PRONY_SIGNALS_HPP
#define PRONY_SIGNALS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "prony/signal.hpp"

namespace prony::signals {

/// One damped sinusoid A e^(alpha k ts) cos(2 pi f k ts + phi).
struct ComponentSpec {
    double amplitude = 1.0; // > 0
    double damping = 0.0;   // 1/s, negative decays
    double frequency = 0.0; // Hz, |f| below Nyquist
    double phase = 0.0;     // radians
};

enum class NoiseKind { Gaussian };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Gaussian;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

/// Deterministic Gaussian source: mt19937_64 mapped to [0,1) doubles via
/// (x >> 11) * 2^-53, turned into normal deviates by the Box-Muller
/// transform (pairs, with the spare cached). The algorithm is fixed so a
/// seed always reproduces the same sequence.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double next();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Gaussian draws scaled by sigma; sigma = 0 yields exact zeros.
std::vector<double> gen_gaussian_noise(std::size_t n, const NoiseSpec& noise);

struct GeneratedSignal {
    SampledSignal clean;
    SampledSignal noisy;
};

/// Sum of damped sinusoids sampled at ts, plus seeded Gaussian noise.
/// Component frequencies must stay below the Nyquist rate 1/(2 ts).
GeneratedSignal gen_damped_sinusoids(const std::vector<ComponentSpec>& specs,
                                     std::size_t n, double ts,
                                     const NoiseSpec& noise);

/// Signal file: `#ts=<value>` header then one decimal sample per line,
/// LF endings. Samples serialize with 17 significant digits, so
/// write/read round-trips every finite double exactly.
SampledSignal read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const SampledSignal& signal);

} // namespace prony::signals

#endif
