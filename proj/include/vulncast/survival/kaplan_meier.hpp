#pragma once

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include "vulncast/survival/lags.hpp"

namespace vulncast {

struct SurvivalPoint {
    double time = 0;
    double survival = 1.0;
};

/// Right-continuous step function; S(0) = 1, non-increasing.
struct SurvivalCurve {
    std::vector<SurvivalPoint> points; // at event times, ascending

    double at(double t) const {
        double s = 1.0;
        for (const auto& p : points) {
            if (p.time > t) break;
            s = p.survival;
        }
        return s;
    }
};

/// Product-limit estimator over (time, censored) observations. Ties between
/// events and censorings at the same time keep the censored subjects at risk
/// for that event (the standard convention).
inline SurvivalCurve kaplan_meier(std::span<const std::pair<double, bool>> observations) {
    if (observations.empty()) throw DataError("empty-input: kaplan_meier needs at least one observation");
    std::vector<std::pair<double, bool>> sorted(observations.begin(), observations.end());
    std::sort(sorted.begin(), sorted.end());

    SurvivalCurve curve;
    double s = 1.0;
    std::size_t at_risk = sorted.size();
    std::size_t i = 0;
    while (i < sorted.size()) {
        double t = sorted[i].first;
        std::size_t events = 0, removed = 0;
        while (i < sorted.size() && sorted[i].first == t) {
            if (!sorted[i].second) ++events;
            ++removed;
            ++i;
        }
        if (events > 0) {
            s *= 1.0 - double(events) / double(at_risk);
            curve.points.push_back({t, s});
        }
        at_risk -= removed;
    }
    return curve;
}

inline SurvivalCurve kaplan_meier(const std::vector<LagObservation>& lags, LagGranularity granularity) {
    std::vector<std::pair<double, bool>> obs;
    obs.reserve(lags.size());
    for (const auto& l : lags) obs.emplace_back(double(lag_period_index(l.days(), granularity)), l.censored);
    return kaplan_meier(obs);
}

} // namespace vulncast
