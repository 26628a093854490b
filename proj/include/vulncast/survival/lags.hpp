#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "vulncast/snapshot.hpp"

namespace vulncast {

/// Assignment-to-publication duration; censored observations carry the time
/// survived so far (as_of - assigned_at) instead.
struct LagObservation {
    std::int64_t duration_secs = 0;
    bool censored = false;
    int cohort_year = 0; // calendar year of assignment

    double days() const { return seconds_to_days(duration_secs); }
};

struct LagSet {
    std::vector<LagObservation> observations;
    std::size_t anomalies_skipped = 0; // published before assigned; flagged, not fabricated
    std::size_t rejected_skipped = 0;  // rejection is not a publication event
};

inline LagSet compute_lags(const Snapshot& snapshot) {
    LagSet out;
    bool saw_assigned = false;
    for (const auto& r : snapshot.records()) {
        if (!r.assigned_at) continue;
        saw_assigned = true;
        if (r.status == RecordStatus::Rejected) {
            ++out.rejected_skipped;
            continue;
        }
        if (r.lag_anomaly()) {
            ++out.anomalies_skipped;
            continue;
        }
        LagObservation obs;
        obs.cohort_year = r.assigned_at->date().year();
        if (r.published_at) {
            obs.duration_secs = *r.published_at - *r.assigned_at;
            obs.censored = false;
        } else {
            obs.duration_secs = snapshot.as_of() - *r.assigned_at;
            obs.censored = true;
        }
        out.observations.push_back(obs);
    }
    if (!saw_assigned)
        throw DataError("no-assigned-dates: snapshot has no records with assignment timestamps");
    return out;
}

struct LagSummary {
    std::size_t n = 0;
    double mean_days = 0, std_days = 0;
    double min_days = 0, q1_days = 0, median_days = 0, q3_days = 0, max_days = 0;
};

namespace detail {

// Linear interpolation between order statistics (the convention pandas'
// describe() uses, which produced Table-1-style summaries).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted[0];
    double pos = p * double(sorted.size() - 1);
    std::size_t lo = std::size_t(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = pos - double(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

} // namespace detail

/// Five-number summary plus mean/std over uncensored lags only.
inline LagSummary lag_summary(const std::vector<LagObservation>& lags) {
    std::vector<double> days;
    for (const auto& l : lags)
        if (!l.censored) days.push_back(l.days());
    if (days.empty()) throw DataError("all-censored: no uncensored lag observations");
    std::sort(days.begin(), days.end());

    LagSummary s;
    s.n = days.size();
    double sum = 0;
    for (double d : days) sum += d;
    s.mean_days = sum / double(days.size());
    double ss = 0;
    for (double d : days) ss += (d - s.mean_days) * (d - s.mean_days);
    s.std_days = days.size() > 1 ? std::sqrt(ss / double(days.size() - 1)) : 0.0;
    s.min_days = days.front();
    s.q1_days = detail::quantile_sorted(days, 0.25);
    s.median_days = detail::quantile_sorted(days, 0.50);
    s.q3_days = detail::quantile_sorted(days, 0.75);
    s.max_days = days.back();
    return s;
}

enum class LagGranularity { Year, Month };

inline constexpr double kDaysPerMonthBucket = 30.44;
inline constexpr double kDaysPerYearBucket = 365.25;

/// Duration-based period index (calendar-independent fixed divisors).
inline int lag_period_index(double days, LagGranularity g) {
    double div = g == LagGranularity::Month ? kDaysPerMonthBucket : kDaysPerYearBucket;
    return int(std::floor(days / div));
}

} // namespace vulncast
