#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "vulncast/forecast/result.hpp"
#include "vulncast/series/count_series.hpp"
#include "vulncast/survival/probability.hpp"

namespace vulncast {

/// Period ids: calendar year for year granularity, year*12 + month-1 for
/// month granularity.
inline int period_of(Date d, LagGranularity g) {
    return g == LagGranularity::Year ? d.year() : d.year() * 12 + int(d.month()) - 1;
}

inline Date period_first_day(int period, LagGranularity g) {
    if (g == LagGranularity::Year) return Date::from_ymd(period, 1, 1);
    return Date::from_ymd(period / 12, unsigned(period % 12) + 1, 1);
}

inline Date period_last_day(int period, LagGranularity g) {
    return period_first_day(period + 1, g) - 1;
}

/// One row per CVE-ID: a certainty (1.0 in the publication period) or the
/// shared probability vector shifted to the row's cohort anchor, conditioned
/// on the periods already survived. Rescaling on rollover follows the
/// tail-renormalization worked through in the publication-probability tables:
/// a [0.94, 0.054, 0.003, 0.002] row that survives its first period becomes
/// [54/59, 3/59, 2/59].
class MatrixModel {
    struct Row {
        bool published = false;
        int anchor = 0;   // cohort period (first index of the probability vector)
        int elapsed = 0;  // periods survived unpublished
        int pub_period = 0;
    };

public:
    MatrixModel(ProbabilityVector base, LagGranularity granularity, int current_period)
        : base_(std::move(base)), granularity_(granularity), current_period_(current_period) {
        tail_.resize(base_.p.size() + 1, 0.0);
        for (std::size_t i = base_.p.size(); i-- > 0;) tail_[i] = tail_[i + 1] + base_.p[i];
    }

    LagGranularity granularity() const { return granularity_; }
    int current_period() const { return current_period_; }
    std::size_t row_count() const { return rows_.size(); }

    void insert_inferred(const CveId& id, int anchor_period) {
        if (rows_.count(id)) throw ModelError("already-present: " + id.to_string());
        Row row;
        row.anchor = anchor_period;
        row.elapsed = std::max(0, current_period_ - anchor_period);
        rows_.emplace(id, row);
    }

    void insert_published(const CveId& id, int period) {
        if (rows_.count(id)) throw ModelError("already-present: " + id.to_string());
        Row row;
        row.published = true;
        row.anchor = period;
        row.pub_period = period;
        rows_.emplace(id, row);
    }

    /// Published event: the row is zeroed except a 1.0 at the publication period.
    void mark_published(const CveId& id, int period) {
        auto it = rows_.find(id);
        if (it == rows_.end()) throw ModelError("unknown-id: " + id.to_string());
        if (it->second.published) throw ModelError("already-published: " + id.to_string());
        it->second.published = true;
        it->second.pub_period = period;
    }

    /// Period rollover: every unpublished row sheds the period that just
    /// passed without publication; its remaining mass renormalizes implicitly
    /// through the conditional tail.
    void advance_period() {
        ++current_period_;
        for (auto& [id, row] : rows_)
            if (!row.published) row.elapsed = std::max(row.elapsed, current_period_ - row.anchor);
    }

    /// Row mass in one period column (certainties contribute exactly 1.0).
    /// A fresh row carries the base vector as-is, never-published deficit
    /// included; once periods elapse the remaining tail renormalizes to 1
    /// (the [0.94,0.054,0.003,0.002] -> [54/59,3/59,2/59] rescale).
    double row_mass(const Row& row, int period) const {
        if (row.published) return period == row.pub_period ? 1.0 : 0.0;
        int j = period - row.anchor;
        if (j < row.elapsed || j < 0 || j >= int(base_.p.size())) return 0.0;
        if (row.elapsed == 0) return base_.p[std::size_t(j)];
        double denom = tail_[std::size_t(row.elapsed)];
        return denom > 0.0 ? base_.p[std::size_t(j)] / denom : 0.0;
    }

    /// Column sum across all rows: published so far plus expected.
    double column_mass(int period) const {
        if (period < min_period() || period > max_period())
            throw ModelError("out-of-range-period: " + std::to_string(period));
        double total = 0;
        for (const auto& [id, row] : rows_) total += row_mass(row, period);
        return total;
    }

    /// Column sum over unpublished rows only (the expected-future part).
    double column_mass_unpublished(int period) const {
        double total = 0;
        for (const auto& [id, row] : rows_)
            if (!row.published) total += row_mass(row, period);
        return total;
    }

    std::vector<double> row_distribution(const CveId& id, int from_period, int n) const {
        auto it = rows_.find(id);
        if (it == rows_.end()) throw ModelError("unknown-id: " + id.to_string());
        std::vector<double> out;
        for (int p = from_period; p < from_period + n; ++p) out.push_back(row_mass(it->second, p));
        return out;
    }

    double row_mass_at(const CveId& id, int period) const {
        auto it = rows_.find(id);
        if (it == rows_.end()) throw ModelError("unknown-id: " + id.to_string());
        return row_mass(it->second, period);
    }

    double row_sum(const CveId& id) const {
        auto it = rows_.find(id);
        if (it == rows_.end()) throw ModelError("unknown-id: " + id.to_string());
        if (it->second.published) return 1.0;
        double s = 0;
        for (std::size_t j = std::size_t(std::max(it->second.elapsed, 0)); j < base_.p.size(); ++j)
            s += row_mass(it->second, it->second.anchor + int(j));
        return s;
    }

    int min_period() const {
        int m = current_period_;
        for (const auto& [id, row] : rows_) m = std::min(m, row.anchor);
        return m;
    }

    int max_period() const {
        int m = current_period_;
        for (const auto& [id, row] : rows_)
            m = std::max(m, row.published ? row.pub_period : row.anchor + int(base_.p.size()) - 1);
        return m;
    }

private:
    ProbabilityVector base_;
    std::vector<double> tail_; // tail_[k] = sum of base_.p[k..]
    LagGranularity granularity_;
    int current_period_;
    std::map<CveId, Row> rows_;
};

namespace detail {

/// Cohort anchor for a record without its own timeline: serials are assigned
/// in arrival order, so an inferred ID takes the assignment period of the
/// nearest lower known-assigned serial in its cohort year (then nearest
/// higher, then the cohort year start).
inline int anchor_period_for(const CveRecord& r, LagGranularity g,
                             const std::map<int, std::vector<std::pair<std::int64_t, int>>>& assigned_by_year) {
    if (g == LagGranularity::Year) return r.id.year;
    if (r.assigned_at) return period_of(r.assigned_at->date(), g);
    auto it = assigned_by_year.find(r.id.year);
    if (it != assigned_by_year.end() && !it->second.empty()) {
        const auto& serials = it->second; // sorted by serial
        auto pos = std::lower_bound(serials.begin(), serials.end(),
                                    std::make_pair(r.id.serial, std::numeric_limits<int>::min()));
        if (pos != serials.begin()) return std::prev(pos)->second;
        return pos->second;
    }
    return period_of(Date::from_ymd(r.id.year, 1, 1), g);
}

} // namespace detail

/// Assembles the matrix state implied by a snapshot: certainties for
/// published records, conditioned probability rows for everything else. A
/// period counts as survived once the as-of date passes its last day, so a
/// December 31 snapshot conditions this year's queue on this year having
/// closed without them.
inline MatrixModel build_matrix_model(const Snapshot& snapshot, LagGranularity granularity,
                                      std::optional<int> lookback_years = std::nullopt) {
    auto pv = publication_probability_vector(snapshot, granularity, lookback_years);
    int now = period_of(snapshot.as_of_date() + 1, granularity);
    MatrixModel model(std::move(pv), granularity, now);

    std::map<int, std::vector<std::pair<std::int64_t, int>>> assigned_by_year;
    if (granularity == LagGranularity::Month)
        for (const auto& r : snapshot.records())
            if (r.assigned_at)
                assigned_by_year[r.id.year].emplace_back(r.id.serial,
                                                         period_of(r.assigned_at->date(), granularity));
    for (auto& [year, serials] : assigned_by_year) std::sort(serials.begin(), serials.end());

    for (const auto& r : snapshot.records()) {
        if (r.status == RecordStatus::Rejected) continue; // consumed an ID but will not publish
        if (r.status == RecordStatus::Published && r.published_at) {
            model.insert_published(r.id, period_of(r.published_at->date(), granularity));
        } else {
            model.insert_inferred(r.id, detail::anchor_period_for(r, granularity, assigned_by_year));
        }
    }
    return model;
}

/// Matrix model as a window forecaster: probabilistic mass falling inside
/// (origin, origin+lookahead], with the current period's remaining mass
/// spread over its remaining days. Certainty rows are past events and
/// contribute nothing to a future window.
inline ForecastResult forecast_matrix(const Snapshot& snapshot, Date origin, int lookahead_days,
                                      std::optional<LagGranularity> granularity = std::nullopt,
                                      std::optional<int> lookback_years = std::nullopt) {
    LagGranularity g =
        granularity.value_or(lookahead_days >= 365 ? LagGranularity::Year : LagGranularity::Month);
    MatrixModel model = build_matrix_model(snapshot, g, lookback_years);

    Date end = origin + lookahead_days;
    int first = period_of(origin, g), last = period_of(end, g);
    double total = 0;
    for (int p = first; p <= last; ++p) {
        Date p_first = period_first_day(p, g), p_last = period_last_day(p, g);
        Date future_from = std::max(p_first, origin + 1); // remaining part of the period
        Date covered_to = std::min(p_last, end);
        if (covered_to < future_from) continue;
        double remaining_days = double(p_last - future_from) + 1.0;
        double covered_days = double(covered_to - future_from) + 1.0;
        double share = remaining_days > 0 ? covered_days / remaining_days : 0.0;

        // probabilistic rows only; certainties are already-published history
        total += model.column_mass_unpublished(p) * share;
    }

    ForecastResult r;
    r.model_name = "matrix";
    r.origin = origin;
    r.lookahead_days = lookahead_days;
    r.point = total;
    return r;
}

} // namespace vulncast
