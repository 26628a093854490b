#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "vulncast/eval/retrocast.hpp"

namespace vulncast {

/// One (filter, lookahead) cell of the subgroup report. Cells that fail keep
/// their error string so one wild subgroup cannot sink the rest of the run.
struct PipelineCell {
    std::string filter_id;
    int lookahead_days = 0;
    std::string selected_model;
    MetricReport validation;
    MetricReport test;
    std::optional<ForecastResult> forecast;
    bool high_validation_variance = false;
    std::string error;
};

struct PipelineReport {
    std::vector<PipelineCell> cells;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json root = nlohmann::ordered_json::object();
        for (const auto& c : cells) {
            nlohmann::ordered_json cell;
            if (!c.error.empty()) {
                cell["error"] = c.error;
            } else {
                cell["model"] = c.selected_model;
                cell["validation_msloge"] = c.validation.msloge;
                cell["test_msloge"] = c.test.msloge;
                cell["test_mae"] = c.test.mae;
                cell["high_validation_variance"] = c.high_validation_variance;
                if (c.forecast) {
                    cell["forecast"] = c.forecast->point;
                    if (c.forecast->interval_low) cell["interval_low"] = *c.forecast->interval_low;
                    if (c.forecast->interval_high) cell["interval_high"] = *c.forecast->interval_high;
                }
            }
            root[c.filter_id][std::to_string(c.lookahead_days)] = cell;
        }
        return root;
    }
};

/// Coefficient of variation above this marks a subgroup whose validation
/// truths jump around too much for point forecasts to mean much.
inline constexpr double kHighVarianceCv = 1.0;

/// select -> retrocast -> forward forecast for every (filter, lookahead)
/// pair. Serial-number models (mvue, matrix) are dropped from candidate sets
/// for non-"all" filters.
inline PipelineReport subgroup_pipeline(const Snapshot& snapshot, const std::vector<SubgroupFilter>& filters,
                                        const std::vector<int>& lookaheads,
                                        const std::vector<std::string>& candidates, RetrocastPlan base_plan,
                                        int jobs = 1) {
    PipelineReport report;
    for (const auto& filter : filters) {
        for (int lookahead : lookaheads) {
            PipelineCell cell;
            cell.filter_id = filter.id();
            cell.lookahead_days = lookahead;
            try {
                RetrocastPlan plan = base_plan;
                plan.lookahead_days = lookahead;
                plan.filter_id = filter.id();

                std::vector<std::string> usable;
                for (const auto& spec : candidates) {
                    if (!filter.is_all() && !make_forecaster(spec)->supports_subgroups()) continue;
                    usable.push_back(spec);
                }
                auto selection = select_model(usable, snapshot, plan, jobs);
                cell.selected_model = selection.spec;
                cell.validation = selection.validation;

                // flag subgroups whose validation truths swing wildly
                if (plan.validation) {
                    auto vends = plan.validation_end_dates();
                    std::vector<double> truths;
                    for (Date end : vends)
                        truths.push_back(double(published_count_between(snapshot, filter, end - lookahead, end)));
                    double mean = 0;
                    for (double t : truths) mean += t;
                    mean /= double(truths.size());
                    double var = 0;
                    for (double t : truths) var += (t - mean) * (t - mean);
                    double sd = std::sqrt(var / double(truths.size()));
                    cell.high_validation_variance = mean > 0 ? (sd / mean > kHighVarianceCv) : sd > 0;
                }

                auto model = make_forecaster(selection.spec);
                auto outcome = retrocast(snapshot, plan, *model, jobs);
                cell.test = outcome.metrics;

                auto sweep = forecast_sweep(snapshot, snapshot.as_of_date(), {lookahead}, *model, filter,
                                            plan.z, jobs);
                if (!sweep.results.empty()) cell.forecast = sweep.results.front();
            } catch (const Error& e) {
                cell.error = e.what();
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

} // namespace vulncast
