#pragma once

#include <algorithm>
#include <cstdint>

#include "vulncast/forecast/result.hpp"
#include "vulncast/series/count_series.hpp"
#include "vulncast/survival/probability.hpp"

namespace vulncast {

/// Serial-number population estimate for one cohort year: N = M(1 + 1/k) - 1
/// with M the largest published serial and k the number published. Estimates
/// how many IDs the cohort will ultimately contain, not how many publish in
/// any calendar window.
inline double mvue_estimate(const Snapshot& snapshot, int year) {
    std::int64_t max_serial = 0;
    long observed = 0;
    for (const auto& r : snapshot.records()) {
        if (r.id.year != year || r.status != RecordStatus::Published) continue;
        ++observed;
        max_serial = std::max(max_serial, r.id.serial);
    }
    if (observed == 0)
        throw ModelError("no-observations: no published records for cohort year " + std::to_string(year));
    return double(max_serial) * (1.0 + 1.0 / double(observed)) - 1.0;
}

namespace detail {

/// Share of a year's publications that land in the first `lookahead` days of
/// a window anchored at this calendar position, averaged over past years.
/// Falls back to lookahead/365 when no full trailing year exists.
inline double empirical_year_fraction(const Snapshot& snapshot, Date origin, int lookahead_days,
                                      bool uniform) {
    double uniform_fraction = std::min(1.0, double(lookahead_days) / 365.0);
    if (uniform) return uniform_fraction;
    auto data_start = first_published_date(snapshot);
    if (!data_start) return uniform_fraction;
    SubgroupFilter all;
    long in_window = 0, in_year = 0;
    // anchor year-length windows (anchor, anchor+365] at the same calendar
    // position in each past year, fully covered by observed data
    for (Date anchor = origin - 365; anchor >= *data_start - 1; anchor = anchor - 365) {
        in_window += published_count_between(snapshot, all, anchor, anchor + std::min(lookahead_days, 365));
        in_year += published_count_between(snapshot, all, anchor, anchor + 365);
    }
    if (in_year == 0) return uniform_fraction;
    return double(in_window) / double(in_year);
}

} // namespace detail

/// MVUE adapted into a forecaster per the two published modifications: the
/// current-year projection (estimate scaled by the within-year publication
/// mass) is floored by the previous year's published total, then scaled to
/// the lookahead window.
inline ForecastResult forecast_mvue(const Snapshot& snapshot, Date origin, int lookahead_days,
                                    bool uniform_fraction = false) {
    int year = origin.year();
    double estimate = mvue_estimate(snapshot, year); // throws no-observations if the cohort is empty

    auto pv = publication_probability_vector(snapshot, LagGranularity::Year);
    double within_year_mass = pv.p.empty() ? 1.0 : pv.p[0];
    double current_projection = estimate * within_year_mass;

    SubgroupFilter all;
    Date prev_start = Date::from_ymd(year - 1, 1, 1);
    Date prev_end = Date::from_ymd(year - 1, 12, 31);
    double previous_total = double(published_count_between(snapshot, all, prev_start - 1, prev_end));

    double yearly_basis = std::max(current_projection, previous_total);
    double fraction = detail::empirical_year_fraction(snapshot, origin, lookahead_days, uniform_fraction);

    ForecastResult r;
    r.model_name = "mvue";
    r.origin = origin;
    r.lookahead_days = lookahead_days;
    r.point = yearly_basis * fraction;
    return r;
}

} // namespace vulncast
