#ifndef PRONY_METRICS_HPP
#define PRONY_METRICS_HPP

#include <cstddef>
#include <span>

namespace prony::metrics {

/// Precision measure PM = N - ||grecons - g|| / ||grecons - mean(g)||,
/// together with the two norms it was computed from. Note the asymmetric
/// denominator: the reconstruction minus the mean of the *input*.
struct PrecisionReport {
    std::size_t n = 0;
    double pm = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
};

/// Throws DegenerateReconstruction when the denominator vanishes
/// (reconstruction identical to the input mean) and InvalidArgument on a
/// length mismatch or empty input.
PrecisionReport precision_measure(std::span<const double> g,
                                  std::span<const double> grecons);

/// Cross-run summary of precision values.
struct RunStatistics {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample convention, 0 for a single value
    double min = 0.0;
    double max = 0.0;
};

RunStatistics run_statistics(std::span<const double> pms);

} // namespace prony::metrics

#endif
