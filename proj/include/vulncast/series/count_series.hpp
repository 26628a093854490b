#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vulncast/subgroup/filter.hpp"

namespace vulncast {

/// Published-CVE counts per calendar bucket for one filter. Buckets are
/// contiguous (empty ones present with 0) and sorted.
struct CountSeries {
    Interval interval = Interval::Day;
    std::string filter_id = "all";
    std::vector<std::pair<Date, long>> buckets; // (period start, count)

    bool empty() const { return buckets.empty(); }
    Date first_day() const { return buckets.front().first; }

    /// Sum of daily counts in (after, through]; day-interval series only.
    long count_between(Date after, Date through) const {
        if (interval != Interval::Day)
            throw ConfigError("count_between requires a day-interval series");
        long total = 0;
        for (const auto& [day, n] : buckets) {
            if (day <= after) continue;
            if (day > through) break;
            total += n;
        }
        return total;
    }

    long total() const {
        long t = 0;
        for (const auto& [d, n] : buckets) t += n;
        return t;
    }
};

/// Counts published records matching `filter` per calendar bucket. The range
/// defaults to [first published date, as_of]; empty buckets are zero-filled.
inline CountSeries aggregate_counts(const Snapshot& snapshot, Interval interval, const SubgroupFilter& filter,
                                    std::optional<std::pair<Date, Date>> range = std::nullopt) {
    CountSeries series;
    series.interval = interval;
    series.filter_id = filter.id();

    std::optional<Date> lo, hi;
    if (range) {
        lo = range->first;
        hi = range->second;
    } else {
        for (const auto& r : snapshot.records()) {
            if (r.status != RecordStatus::Published || !r.published_at) continue;
            Date d = r.published_at->date();
            if (!lo || d < *lo) lo = d;
        }
        if (lo) hi = snapshot.as_of_date();
    }
    if (!lo || !hi || *hi < *lo) return series; // nothing to bucket

    for (Date b = bucket_start(*lo, interval); b <= *hi; b = next_bucket(b, interval))
        series.buckets.emplace_back(b, 0);

    for (const auto& r : snapshot.records()) {
        if (r.status != RecordStatus::Published || !r.published_at) continue;
        if (!filter.matches(r)) continue;
        Date d = r.published_at->date();
        if (d < *lo || d > *hi) continue;
        Date b = bucket_start(d, interval);
        auto it = std::lower_bound(series.buckets.begin(), series.buckets.end(), b,
                                   [](const auto& bucket, Date key) { return bucket.first < key; });
        if (it != series.buckets.end() && it->first == b) ++it->second;
    }
    return series;
}

/// Drops buckets starting before Jan 1 of cutoff_year.
inline CountSeries apply_cutoff(CountSeries series, int cutoff_year) {
    Date cut = Date::from_ymd(cutoff_year, 1, 1);
    std::erase_if(series.buckets, [&](const auto& b) { return b.first < cut; });
    return series;
}

/// Drops records dated before Jan 1 of cutoff_year: published records keyed on
/// publication, queue records on assignment, inferred records on cohort year.
inline Snapshot apply_cutoff(const Snapshot& snapshot, int cutoff_year) {
    Date cut = Date::from_ymd(cutoff_year, 1, 1);
    std::vector<CveRecord> kept;
    kept.reserve(snapshot.size());
    for (const auto& r : snapshot.records()) {
        switch (r.status) {
            case RecordStatus::Published:
            case RecordStatus::Rejected:
                if (r.published_at && r.published_at->date() >= cut) kept.push_back(r);
                break;
            case RecordStatus::AssignedUnpublished:
                if (r.assigned_at && r.assigned_at->date() >= cut) kept.push_back(r);
                break;
            case RecordStatus::ReservedInferred:
                if (r.id.year >= cutoff_year) kept.push_back(r);
                break;
        }
    }
    auto prov = snapshot.provenance();
    prov.emplace_back("cutoff-year", std::to_string(cutoff_year));
    return Snapshot{snapshot.as_of(), std::move(kept), std::move(prov)};
}

/// Published records matching `filter` with publication date in (after, through].
inline long published_count_between(const Snapshot& snapshot, const SubgroupFilter& filter, Date after,
                                    Date through) {
    long total = 0;
    for (const auto& r : snapshot.records()) {
        if (r.status != RecordStatus::Published || !r.published_at) continue;
        Date d = r.published_at->date();
        if (d > after && d <= through && filter.matches(r)) ++total;
    }
    return total;
}

/// Earliest publication date in the snapshot, if any record is published.
inline std::optional<Date> first_published_date(const Snapshot& snapshot) {
    std::optional<Date> lo;
    for (const auto& r : snapshot.records()) {
        if (r.status != RecordStatus::Published || !r.published_at) continue;
        Date d = r.published_at->date();
        if (!lo || d < *lo) lo = d;
    }
    return lo;
}

} // namespace vulncast
