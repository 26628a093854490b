#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "vulncast/survival/lags.hpp"

namespace vulncast {

/// Two-sample Kolmogorov-Smirnov distance: sup |F_a - F_b| over the pooled
/// sample points. The supremum numerator is tracked in integer arithmetic so
/// the result is exact (1/3 comes out as exactly 1/3), with no asymptotic
/// p-values; the distances are used descriptively.
inline double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DataError("empty-sample: ks_two_sample needs non-empty samples");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const std::int64_t na = std::int64_t(sa.size()), nb = std::int64_t(sb.size());
    std::int64_t best = 0; // max |ia*nb - ib*na|
    std::size_t ia = 0, ib = 0;
    while (ia < sa.size() && ib < sb.size()) {
        double t = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] <= t) ++ia;
        while (ib < sb.size() && sb[ib] <= t) ++ib;
        best = std::max(best, std::abs(std::int64_t(ia) * nb - std::int64_t(ib) * na));
    }
    return double(best) / double(na * nb);
}

struct KsMatrix {
    std::vector<int> years;                  // row/column labels (assignment cohort years)
    std::vector<std::vector<double>> d;      // d[i][j] = KS distance
};

namespace detail {

/// Month-lag samples of published records grouped by assignment calendar year.
inline std::map<int, std::vector<double>> month_lags_by_assignment_year(const Snapshot& snapshot) {
    std::map<int, std::vector<double>> samples;
    for (const auto& r : snapshot.records()) {
        if (!r.assigned_at || !r.published_at || r.status == RecordStatus::Rejected || r.lag_anomaly())
            continue;
        double days = seconds_to_days(*r.published_at - *r.assigned_at);
        samples[r.assigned_at->date().year()].push_back(double(lag_period_index(days, LagGranularity::Month)));
    }
    return samples;
}

} // namespace detail

/// Pairwise KS distances between the month-lag distributions of assignment
/// cohort years.
inline KsMatrix ks_year_matrix(const Snapshot& snapshot) {
    auto samples = detail::month_lags_by_assignment_year(snapshot);
    KsMatrix m;
    for (const auto& [year, s] : samples)
        if (!s.empty()) m.years.push_back(year);
    m.d.assign(m.years.size(), std::vector<double>(m.years.size(), 0.0));
    for (std::size_t i = 0; i < m.years.size(); ++i)
        for (std::size_t j = i + 1; j < m.years.size(); ++j) {
            double d = ks_two_sample(samples[m.years[i]], samples[m.years[j]]);
            m.d[i][j] = m.d[j][i] = d;
        }
    return m;
}

/// KS distance of each calendar year against the cumulative record up to and
/// including that year; the cumulative pooling is what keeps individual-year
/// drift from dominating the probability vectors.
inline KsMatrix ks_cumulative_matrix(const Snapshot& snapshot) {
    auto samples = detail::month_lags_by_assignment_year(snapshot);
    KsMatrix m;
    for (const auto& [year, s] : samples)
        if (!s.empty()) m.years.push_back(year);
    m.d.assign(m.years.size(), std::vector<double>(m.years.size(), 0.0));
    std::vector<double> cumulative;
    for (std::size_t i = 0; i < m.years.size(); ++i) { // row i: cumulative through year i
        cumulative.insert(cumulative.end(), samples[m.years[i]].begin(), samples[m.years[i]].end());
        for (std::size_t j = 0; j < m.years.size(); ++j)
            m.d[i][j] = ks_two_sample(cumulative, samples[m.years[j]]);
    }
    return m;
}

} // namespace vulncast
