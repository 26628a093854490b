#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>

#include "vulncast/errors.hpp"

namespace vulncast {

/// Prediction interval half-width: point +/- z * sigma, where sigma is the
/// N-2 denominator residual standard deviation from a validation run.
struct IntervalSpec {
    double z = 1.96;
    double sigma = 0.0;

    std::pair<double, double> apply(double point) const {
        return {std::max(0.0, point - z * sigma), point + z * sigma};
    }
};

inline IntervalSpec prediction_interval(std::span<const double> validation_truths,
                                        std::span<const double> validation_preds, double z = 1.96) {
    if (z <= 0) throw ConfigError("interval z must be > 0");
    if (validation_truths.size() != validation_preds.size())
        throw DataError("length-mismatch: validation truths vs predictions");
    if (validation_truths.size() < 3)
        throw DataError("too-few-points: prediction interval needs N >= 3 validation pairs");
    double ss = 0;
    for (std::size_t i = 0; i < validation_truths.size(); ++i) {
        double r = validation_truths[i] - validation_preds[i];
        ss += r * r;
    }
    IntervalSpec spec;
    spec.z = z;
    spec.sigma = std::sqrt(ss / double(validation_truths.size() - 2));
    return spec;
}

} // namespace vulncast
