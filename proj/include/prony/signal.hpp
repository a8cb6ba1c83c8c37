#ifndef PRONY_SIGNAL_HPP
#define PRONY_SIGNAL_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "prony/errors.hpp"

namespace prony {

/// Uniformly sampled real signal together with its sample period.
struct SampledSignal {
    std::vector<double> samples;
    double ts = 1.0; // sample period, seconds

    SampledSignal() = default;

    SampledSignal(std::vector<double> samples_, double ts_)
        : samples(std::move(samples_)), ts(ts_) {
        if (samples.empty())
            throw InvalidArgument("SampledSignal: needs at least one sample");
        if (!(ts > 0.0))
            throw InvalidArgument("SampledSignal: sample period must be > 0");
        for (double v : samples)
            if (!std::isfinite(v))
                throw InvalidArgument("SampledSignal: non-finite sample");
    }

    std::size_t size() const noexcept { return samples.size(); }
};

} // namespace prony

#endif
