#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "vulncast/errors.hpp"

namespace vulncast {

/// MAE / MSE / MSLogE over all windows; the threshold fractions are computed
/// over nonzero-truth windows only (relative error is undefined at zero, and
/// zero-inflated subgroup series would otherwise poison them).
struct MetricReport {
    double mae = 0;
    double mse = 0;
    double msloge = 0;
    std::optional<double> frac_gt_10pct; // |y-yhat|/y > 0.1
    std::optional<double> frac_gt_5pct;  // |y-yhat|/y > 0.05
    std::optional<double> frac_asym;     // overshoot > 20% or undershoot > 5%
    std::size_t n_windows = 0;
    std::size_t n_skipped_zero_truth = 0;
};

inline MetricReport compute_metrics(std::span<const double> truths, std::span<const double> preds) {
    if (truths.size() != preds.size()) throw DataError("length-mismatch: truths vs predictions");
    if (truths.empty()) throw DataError("empty-input: no prediction windows");

    MetricReport m;
    m.n_windows = truths.size();
    double over10 = 0, over5 = 0, asym = 0;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < truths.size(); ++i) {
        double y = truths[i], yhat = preds[i];
        double err = y - yhat;
        m.mae += std::abs(err);
        m.mse += err * err;
        double logdiff = std::log(y + 1.0) - std::log(yhat + 1.0);
        m.msloge += logdiff * logdiff;
        if (y == 0.0) {
            ++m.n_skipped_zero_truth;
            continue;
        }
        ++nonzero;
        double rel = std::abs(err) / y;
        if (rel > 0.10) over10 += 1;
        if (rel > 0.05) over5 += 1;
        if ((yhat - y) / y > 0.20 || (y - yhat) / y > 0.05) asym += 1;
    }
    m.mae /= double(m.n_windows);
    m.mse /= double(m.n_windows);
    m.msloge /= double(m.n_windows);
    if (nonzero > 0) {
        m.frac_gt_10pct = over10 / double(nonzero);
        m.frac_gt_5pct = over5 / double(nonzero);
        m.frac_asym = asym / double(nonzero);
    }
    return m;
}

} // namespace vulncast
