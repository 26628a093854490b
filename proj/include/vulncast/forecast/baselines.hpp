#pragma once

#include "vulncast/forecast/result.hpp"
#include "vulncast/series/count_series.hpp"

namespace vulncast {

namespace detail {

inline void require_coverage(const CountSeries& series, Date needed_from, Date origin) {
    if (series.empty() || series.first_day() > needed_from)
        throw ModelError("insufficient-history: series must cover back to " + needed_from.to_string() +
                         " for origin " + origin.to_string());
}

} // namespace detail

/// Previous-window back-cast: the count in the window of identical length
/// immediately preceding the origin.
inline ForecastResult forecast_previous_value(const CountSeries& series, Date origin, int lookahead_days) {
    detail::require_coverage(series, origin - lookahead_days + 1, origin);
    ForecastResult r;
    r.model_name = "previous_value";
    r.origin = origin;
    r.lookahead_days = lookahead_days;
    r.filter_id = series.filter_id;
    r.point = double(series.count_between(origin - lookahead_days, origin));
    return r;
}

/// Mean of the k trailing windows of length lookahead.
inline ForecastResult forecast_rolling_mean(const CountSeries& series, Date origin, int lookahead_days,
                                            int k) {
    if (k < 1) throw ConfigError("rolling mean needs k >= 1");
    detail::require_coverage(series, origin - k * lookahead_days + 1, origin);
    double sum = 0;
    for (int i = 0; i < k; ++i)
        sum += double(series.count_between(origin - (i + 1) * lookahead_days, origin - i * lookahead_days));
    ForecastResult r;
    r.model_name = "rolling_mean";
    r.origin = origin;
    r.lookahead_days = lookahead_days;
    r.filter_id = series.filter_id;
    r.point = sum / double(k);
    return r;
}

} // namespace vulncast
