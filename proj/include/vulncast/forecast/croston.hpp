#pragma once

#include <vector>

#include "vulncast/forecast/result.hpp"
#include "vulncast/series/count_series.hpp"

namespace vulncast {

/// Classic Croston intermittent-demand smoothing over the buckets at or
/// before the origin. Nonzero demand sizes and inter-demand intervals are
/// exponentially smoothed separately; the per-period demand rate z/p is then
/// scaled to the number of buckets the lookahead spans.
///
/// Initialization: z0 = first demand size, p0 = first inter-demand interval;
/// smoothing starts from the second demand. A history with a single demand
/// falls back to spreading it over the observed buckets.
inline ForecastResult forecast_croston(const CountSeries& series, Date origin, int lookahead_days,
                                       double alpha = 0.1) {
    if (alpha <= 0.0 || alpha >= 1.0) throw ConfigError("croston alpha must be in (0, 1)");

    std::vector<long> history;
    for (const auto& [day, n] : series.buckets) {
        if (day > origin) break;
        history.push_back(n);
    }

    std::vector<double> sizes;
    std::vector<double> intervals;
    long last_pos = -1;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (history[i] == 0) continue;
        if (last_pos >= 0) intervals.push_back(double(long(i) - last_pos));
        sizes.push_back(double(history[i]));
        last_pos = long(i);
    }
    if (sizes.empty()) throw ModelError("all-zero-history: croston needs at least one nonzero bucket");

    double per_period;
    if (sizes.size() == 1) {
        per_period = sizes[0] / double(history.size());
    } else {
        double z = sizes[0];
        for (std::size_t j = 1; j < sizes.size(); ++j) z = alpha * sizes[j] + (1.0 - alpha) * z;
        double p = intervals[0];
        for (std::size_t i = 1; i < intervals.size(); ++i) p = alpha * intervals[i] + (1.0 - alpha) * p;
        per_period = z / p;
    }

    ForecastResult r;
    r.model_name = "croston";
    r.origin = origin;
    r.lookahead_days = lookahead_days;
    r.filter_id = series.filter_id;
    r.point = per_period * (double(lookahead_days) / nominal_days(series.interval));
    return r;
}

} // namespace vulncast
