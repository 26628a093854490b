#pragma once

#include "vulncast/forecast/result.hpp"
#include "vulncast/series/count_series.hpp"

namespace vulncast {

/// Inputs to the exit-rate variation of Little's law, E = (q + lambda) * p(W <= window).
struct QueueStats {
    double lambda = 0.0;  // expected arrivals during the forecast window (trailing rate, scaled)
    long q = 0;           // already in the queue from the lookback window
    double p_within = 0;  // empirical P(service time <= lookahead) over lookback arrivals
    int lookback_days = 0;

    double exit_estimate() const { return (double(q) + lambda) * p_within; }
};

/// The lookback bounds both the queue census and the service-time sample so
/// forgotten early-2000s reservations do not drag the estimate.
inline QueueStats little_queue_stats(const Snapshot& snapshot, Date origin, int lookahead_days,
                                     int lookback_days) {
    if (lookback_days < 1) throw ConfigError("lookback_days must be >= 1");
    DateTime cut = end_of_day(origin);
    DateTime window_start = end_of_day(origin - lookback_days);

    long arrivals = 0, still_queued = 0, published_within = 0;
    bool any_assigned = false;
    for (const auto& r : snapshot.records()) {
        if (!r.assigned_at) continue;
        if (*r.assigned_at <= cut) any_assigned = true;
        if (*r.assigned_at <= window_start || *r.assigned_at > cut) continue;
        ++arrivals;
        bool published_by_origin =
            r.published_at && *r.published_at <= cut && r.status != RecordStatus::Rejected && !r.lag_anomaly();
        if (!published_by_origin) {
            ++still_queued;
        } else if (seconds_to_days(*r.published_at - *r.assigned_at) <= double(lookahead_days)) {
            ++published_within;
        }
    }
    if (!any_assigned)
        throw ModelError("empty-lookback-window: no assignment data at or before the origin");

    QueueStats s;
    s.lookback_days = lookback_days;
    s.q = still_queued;
    s.lambda = double(arrivals) * double(lookahead_days) / double(lookback_days);
    s.p_within = arrivals > 0 ? double(published_within) / double(arrivals) : 0.0;
    return s;
}

/// Little's Law with Lookback. For subgroup filters, lambda and q are scaled
/// by the subgroup's share of publications in the lookback window, since
/// queued records carry no attribute data yet.
inline ForecastResult forecast_little_lb(const Snapshot& snapshot, Date origin, int lookahead_days,
                                         int lookback_days, const SubgroupFilter& filter = SubgroupFilter::all()) {
    QueueStats s = little_queue_stats(snapshot, origin, lookahead_days, lookback_days);
    double point = s.exit_estimate();
    if (!filter.is_all()) {
        SubgroupFilter all;
        long total = published_count_between(snapshot, all, origin - lookback_days, origin);
        long matching = published_count_between(snapshot, filter, origin - lookback_days, origin);
        point *= total > 0 ? double(matching) / double(total) : 0.0;
    }
    ForecastResult r;
    r.model_name = "little_lb";
    r.origin = origin;
    r.lookahead_days = lookahead_days;
    r.filter_id = filter.id();
    r.point = point;
    return r;
}

} // namespace vulncast
