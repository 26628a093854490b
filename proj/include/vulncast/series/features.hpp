#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vulncast/forecast/little.hpp"
#include "vulncast/forecast/mvue.hpp"
#include "vulncast/series/count_series.hpp"

namespace vulncast {

/// One regression row: trailing counts at the four intervals plus the two
/// leading-indicator projections, all computed strictly from data dated at or
/// before the origin.
struct FeatureRow {
    Date origin;
    int lookahead_days = 0;
    std::vector<std::string> names;
    std::vector<double> values;
    std::optional<double> target; // absent at prediction time
};

inline const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {"count_7d",  "count_30d",    "count_91d",
                                                   "count_365d", "mvue_proj", "little_lb_proj"};
    return names;
}

inline std::vector<FeatureRow> build_feature_rows(const Snapshot& snapshot, std::span<const Date> origins,
                                                  int lookahead_days, const SubgroupFilter& filter) {
    auto data_start = first_published_date(snapshot);
    if (!data_start) throw DataError("insufficient-history: snapshot has no published records");
    Date as_of = snapshot.as_of_date();

    std::vector<FeatureRow> rows;
    rows.reserve(origins.size());
    for (Date origin : origins) {
        if (origin - 365 < *data_start)
            throw DataError("insufficient-history: trailing 365d window precedes data start at origin " +
                            origin.to_string());
        FeatureRow row;
        row.origin = origin;
        row.lookahead_days = lookahead_days;
        row.names = feature_names();

        Snapshot view = snapshot.as_of_view(origin);
        static constexpr std::array<int, 4> kWindows = {7, 30, 91, 365};
        for (int w : kWindows)
            row.values.push_back(double(published_count_between(view, filter, origin - w, origin)));
        // the leading indicators may legitimately be unavailable at early
        // origins (e.g. an empty cohort year); a zero keeps the row usable
        try {
            row.values.push_back(forecast_mvue(view, origin, lookahead_days).point);
        } catch (const Error&) {
            row.values.push_back(0.0);
        }
        try {
            row.values.push_back(forecast_little_lb(view, origin, lookahead_days, lookahead_days, filter).point);
        } catch (const Error&) {
            row.values.push_back(0.0);
        }

        if (origin + lookahead_days <= as_of)
            row.target = double(published_count_between(snapshot, filter, origin, origin + lookahead_days));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace vulncast
