#include "prony/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "prony/errors.hpp"

namespace prony::metrics {

PrecisionReport precision_measure(std::span<const double> g,
                                  std::span<const double> grecons) {
    if (g.empty())
        throw InvalidArgument("precision_measure: empty input");
    if (g.size() != grecons.size())
        throw InvalidArgument("precision_measure: length mismatch (" +
                              std::to_string(g.size()) + " vs " +
                              std::to_string(grecons.size()) + ")");

    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());

    // Scaled two-pass 2-norms: squared terms near DBL_MAX must not
    // overflow the accumulator, large reconstructions still get a finite
    // ratio.
    double num_scale = 0.0, den_scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        num_scale = std::max(num_scale, std::abs(grecons[i] - g[i]));
        den_scale = std::max(den_scale, std::abs(grecons[i] - mean));
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (num_scale > 0.0) {
            const double d = (grecons[i] - g[i]) / num_scale;
            num += d * d;
        }
        if (den_scale > 0.0) {
            const double m = (grecons[i] - mean) / den_scale;
            den += m * m;
        }
    }
    num = num_scale * std::sqrt(num);
    den = den_scale * std::sqrt(den);

    if (den == 0.0)
        throw DegenerateReconstruction(
            "precision_measure: reconstruction equals the input mean, "
            "denominator is zero");

    PrecisionReport report;
    report.n = g.size();
    report.numerator = num;
    report.denominator = den;
    report.pm = static_cast<double>(g.size()) - num / den;
    return report;
}

RunStatistics run_statistics(std::span<const double> pms) {
    if (pms.empty())
        throw InvalidArgument("run_statistics: empty input");

    RunStatistics stats;
    stats.count = pms.size();
    stats.min = *std::min_element(pms.begin(), pms.end());
    stats.max = *std::max_element(pms.begin(), pms.end());

    // Identical values: report exact statistics rather than accumulated
    // rounding noise (same-signal repetitions hit this path).
    if (stats.min == stats.max) {
        stats.mean = stats.min;
        stats.stddev = 0.0;
        return stats;
    }

    double mean = 0.0;
    for (double v : pms) mean += v;
    mean /= static_cast<double>(pms.size());
    stats.mean = mean;

    if (pms.size() > 1) {
        double acc = 0.0;
        for (double v : pms) acc += (v - mean) * (v - mean);
        stats.stddev = std::sqrt(acc / static_cast<double>(pms.size() - 1));
    }
    return stats;
}

} // namespace prony::metrics
