#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "vulncast/survival/lags.hpp"

namespace vulncast {

/// p[k] = probability a CVE publishes k periods after its cohort anchor.
/// Built from published records only and normalized by its own total, so it
/// sums to 1; externally supplied vectors may carry a never-published deficit
/// (sum <= 1).
struct ProbabilityVector {
    LagGranularity granularity = LagGranularity::Year;
    std::vector<double> p;

    double sum() const {
        double s = 0;
        for (double v : p) s += v;
        return s;
    }

    /// Mass at indices >= k (used when conditioning on periods survived).
    double tail_mass(std::size_t k) const {
        double s = 0;
        for (std::size_t i = k; i < p.size(); ++i) s += p[i];
        return s;
    }
};

/// Histogram of publication lag indices over published records, normalized to
/// proportions. Year granularity indexes by publication_year - cve_year (the
/// serial cohort label); month granularity indexes by elapsed time since the
/// assignment timestamp. Cumulative over all cohorts unless lookback_years
/// restricts how far back cohorts are taken.
inline ProbabilityVector publication_probability_vector(const Snapshot& snapshot, LagGranularity granularity,
                                                        std::optional<int> lookback_years = std::nullopt) {
    int min_cohort = -1;
    if (lookback_years) min_cohort = snapshot.as_of_date().year() - *lookback_years + 1;

    std::vector<long> counts;
    long total = 0;
    for (const auto& r : snapshot.records()) {
        if (r.status != RecordStatus::Published || !r.published_at) continue;
        int index;
        if (granularity == LagGranularity::Year) {
            if (lookback_years && r.id.year < min_cohort) continue;
            index = r.published_at->date().year() - r.id.year;
            if (index < 0) continue; // legacy retro-assignment, flagged upstream
        } else {
            if (!r.assigned_at || r.lag_anomaly()) continue;
            if (lookback_years && r.assigned_at->date().year() < min_cohort) continue;
            index = lag_period_index(seconds_to_days(*r.published_at - *r.assigned_at), granularity);
        }
        if (index >= int(counts.size())) counts.resize(std::size_t(index) + 1, 0);
        ++counts[std::size_t(index)];
        ++total;
    }
    if (total == 0) throw DataError("no-published-records: cannot build a publication probability vector");

    ProbabilityVector pv;
    pv.granularity = granularity;
    pv.p.reserve(counts.size());
    for (long c : counts) pv.p.push_back(double(c) / double(total));
    return pv;
}

} // namespace vulncast
