#pragma once

#include <atomic>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vulncast/eval/interval.hpp"
#include "vulncast/eval/metrics.hpp"
#include "vulncast/forecast/registry.hpp"

namespace vulncast {

/// End dates staggered within each calendar month at days {1, 1+step, ...}
/// capped at 28, so every month contributes the same number of dates. At the
/// 10-day step this puts 3 end dates in each month: 24 across the
/// Jan-Sep 2018 validation range and 72 across the Sep 2018-Sep 2020 test
/// range. Range is half-open: [from, to).
inline std::vector<Date> staggered_end_dates(Date from, Date to, int step_days) {
    if (step_days < 1) throw ConfigError("step_days must be >= 1");
    std::vector<Date> out;
    for (Date m = month_start(from); m < to; m = next_bucket(m, Interval::Month))
        for (int day = 1; day <= 28; day += step_days) {
            Date d = Date::from_ymd(m.year(), m.month(), unsigned(day));
            if (d >= from && d < to) out.push_back(d);
        }
    return out;
}

/// Retrocasting protocol: fixed lookahead, end dates sliding through held-out
/// history, strict date separation (the model never sees past its origin).
struct RetrocastPlan {
    Date start_end_date;              // test range start (inclusive)
    Date final_end_date;              // test range end (exclusive)
    int step_days = 10;
    int lookahead_days = 365;
    std::optional<std::pair<Date, Date>> validation; // [start, end) of validation end dates
    std::string filter_id = "all";
    double z = 1.96;

    /// The published protocol: validation Jan-Sep 2018, test Sep 2018-Sep 2020.
    static RetrocastPlan paper_default(int lookahead_days) {
        RetrocastPlan plan;
        plan.start_end_date = Date::from_ymd(2018, 9, 1);
        plan.final_end_date = Date::from_ymd(2020, 9, 1);
        plan.lookahead_days = lookahead_days;
        plan.validation = {Date::from_ymd(2018, 1, 1), Date::from_ymd(2018, 9, 1)};
        return plan;
    }

    void check() const {
        if (start_end_date > final_end_date) throw ConfigError("retrocast plan: start after final end date");
        if (validation && validation->second > start_end_date)
            throw ConfigError("retrocast plan: validation range must precede the test range");
    }

    std::vector<Date> test_end_dates() const { return staggered_end_dates(start_end_date, final_end_date, step_days); }

    std::vector<Date> validation_end_dates() const {
        if (!validation) return {};
        return staggered_end_dates(validation->first, validation->second, step_days);
    }
};

struct RetrocastRow {
    Date end_date;
    Date origin;
    double truth = 0;
    double prediction = 0;
    std::optional<double> interval_low, interval_high;
};

struct RetrocastOutcome {
    std::vector<RetrocastRow> rows;
    MetricReport metrics;
    std::optional<IntervalSpec> interval; // from the validation split, when present
};

namespace detail {

inline std::vector<RetrocastRow> run_end_dates(const Snapshot& snapshot, const std::vector<Date>& ends,
                                               int lookahead_days, const Forecaster& model,
                                               const SubgroupFilter& filter, int jobs = 1) {
    auto one = [&](Date end) {
        RetrocastRow row;
        row.end_date = end;
        row.origin = end - lookahead_days;
        row.truth = double(published_count_between(snapshot, filter, row.origin, end));
        row.prediction = model.forecast(snapshot, row.origin, lookahead_days, filter).point;
        return row;
    };
    std::vector<RetrocastRow> rows(ends.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < ends.size(); ++i) rows[i] = one(ends[i]);
        return rows;
    }
    // end dates are independent; results land at their index so assembly
    // order never affects output
    std::vector<std::future<void>> tasks;
    std::atomic<std::size_t> next{0};
    for (int j = 0; j < jobs; ++j)
        tasks.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < ends.size(); i = next.fetch_add(1)) rows[i] = one(ends[i]);
        }));
    for (auto& t : tasks) t.get();
    return rows;
}

} // namespace detail

/// Runs the plan's test range; when a validation range is present the model
/// is also scored there and its residual sigma provides every row's interval.
inline RetrocastOutcome retrocast(const Snapshot& snapshot, const RetrocastPlan& plan, const Forecaster& model,
                                  int jobs = 1) {
    plan.check();
    auto ends = plan.test_end_dates();
    if (ends.empty()) throw DataError("window-outside-data: retrocast plan has no end dates");
    if (ends.back() > snapshot.as_of_date())
        throw DataError("window-outside-data: end date " + ends.back().to_string() + " is after snapshot as_of");
    SubgroupFilter filter = compile_filter(plan.filter_id);

    RetrocastOutcome out;
    out.rows = detail::run_end_dates(snapshot, ends, plan.lookahead_days, model, filter, jobs);

    if (plan.validation) {
        auto vends = plan.validation_end_dates();
        if (vends.size() >= 3) {
            auto vrows = detail::run_end_dates(snapshot, vends, plan.lookahead_days, model, filter, jobs);
            std::vector<double> vt, vp;
            for (const auto& r : vrows) {
                vt.push_back(r.truth);
                vp.push_back(r.prediction);
            }
            out.interval = prediction_interval(vt, vp, plan.z);
            for (auto& r : out.rows) {
                auto [lo, hi] = out.interval->apply(r.prediction);
                r.interval_low = lo;
                r.interval_high = hi;
            }
        }
    }

    std::vector<double> truths, preds;
    for (const auto& r : out.rows) {
        truths.push_back(r.truth);
        preds.push_back(r.prediction);
    }
    out.metrics = compute_metrics(truths, preds);
    return out;
}

/// Validation-only scoring of one model.
inline MetricReport validation_metrics(const Snapshot& snapshot, const RetrocastPlan& plan,
                                       const Forecaster& model, int jobs = 1) {
    if (!plan.validation) throw ConfigError("select_model requires a validation range in the plan");
    SubgroupFilter filter = compile_filter(plan.filter_id);
    auto ends = plan.validation_end_dates();
    if (ends.empty()) throw DataError("window-outside-data: empty validation range");
    auto rows = detail::run_end_dates(snapshot, ends, plan.lookahead_days, model, filter, jobs);
    std::vector<double> truths, preds;
    for (const auto& r : rows) {
        truths.push_back(r.truth);
        preds.push_back(r.prediction);
    }
    return compute_metrics(truths, preds);
}

struct SelectionOutcome {
    std::string spec;
    MetricReport validation;
    std::vector<std::pair<std::string, std::string>> failures; // (spec, error)
};

/// Lowest validation MSLogE wins; ties break on MAE, then model name.
inline SelectionOutcome select_model(const std::vector<std::pair<std::string, const Forecaster*>>& candidates,
                                     const Snapshot& snapshot, const RetrocastPlan& plan, int jobs = 1) {
    if (candidates.empty()) throw ConfigError("select_model needs at least one candidate");
    SelectionOutcome out;
    bool have = false;
    for (const auto& [spec, model] : candidates) {
        MetricReport m;
        try {
            m = validation_metrics(snapshot, plan, *model, jobs);
        } catch (const Error& e) {
            out.failures.emplace_back(spec, e.what());
            continue;
        }
        bool better = !have || m.msloge < out.validation.msloge ||
                      (m.msloge == out.validation.msloge &&
                       (m.mae < out.validation.mae || (m.mae == out.validation.mae && spec < out.spec)));
        if (better) {
            out.spec = spec;
            out.validation = m;
            have = true;
        }
    }
    if (!have) throw ModelError("all-candidates-failed: no candidate completed the validation run");
    return out;
}

inline SelectionOutcome select_model(const std::vector<std::string>& candidate_specs, const Snapshot& snapshot,
                                     const RetrocastPlan& plan, int jobs = 1) {
    std::vector<std::unique_ptr<Forecaster>> owned;
    std::vector<std::pair<std::string, const Forecaster*>> candidates;
    for (const auto& spec : candidate_specs) {
        owned.push_back(make_forecaster(spec));
        candidates.emplace_back(spec, owned.back().get());
    }
    return select_model(candidates, snapshot, plan, jobs);
}

struct SweepOutcome {
    std::vector<ForecastResult> results;
    std::vector<std::pair<int, std::string>> errors; // (lookahead, error)
};

/// Forecasting protocol: fixed origin, sweeping lookaheads. Intervals come
/// from validation residuals at each lookahead over end dates in the trailing
/// year before the origin.
inline SweepOutcome forecast_sweep(const Snapshot& snapshot, Date origin, const std::vector<int>& lookaheads,
                                   const Forecaster& model, const SubgroupFilter& filter = SubgroupFilter::all(),
                                   double z = 1.96, int jobs = 1) {
    if (origin > snapshot.as_of_date())
        throw DataError("window-outside-data: origin is after the snapshot as_of date");
    SweepOutcome out;
    for (int lookahead : lookaheads) {
        try {
            ForecastResult r = model.forecast(snapshot, origin, lookahead, filter);
            auto vends = staggered_end_dates(origin - 365, origin, 10);
            std::vector<double> vt, vp;
            for (Date end : vends) {
                try {
                    auto row = model.forecast(snapshot, end - lookahead, lookahead, filter);
                    vt.push_back(double(published_count_between(snapshot, filter, end - lookahead, end)));
                    vp.push_back(row.point);
                } catch (const Error&) {
                    // early validation origins may lack history; interval just loses a point
                }
            }
            if (vt.size() >= 3) {
                auto spec = prediction_interval(vt, vp, z);
                auto [lo, hi] = spec.apply(r.point);
                r.interval_low = lo;
                r.interval_high = hi;
            }
            out.results.push_back(std::move(r));
        } catch (const Error& e) {
            out.errors.emplace_back(lookahead, e.what());
        }
    }
    (void)jobs;
    return out;
}

} // namespace vulncast
