#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vulncast/forecast/baselines.hpp"
#include "vulncast/forecast/croston.hpp"
#include "vulncast/forecast/little.hpp"
#include "vulncast/forecast/matrix.hpp"
#include "vulncast/forecast/mvue.hpp"
#include "vulncast/forecast/ridge.hpp"

namespace vulncast {

/// Common forecaster surface. forecast() rewinds the snapshot to the origin
/// before the concrete model sees it, so no model can read past the origin
/// regardless of how it is implemented.
class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual std::string name() const = 0;
    virtual bool supports_subgroups() const { return true; }

    ForecastResult forecast(const Snapshot& snapshot, Date origin, int lookahead_days,
                            const SubgroupFilter& filter = SubgroupFilter::all()) const {
        if (lookahead_days < 1) throw ConfigError("lookahead_days must be >= 1");
        if (!filter.is_all() && !supports_subgroups())
            throw ModelError("unsupported-subgroup: " + name() + " cannot forecast population subsets");
        const Snapshot* view = &snapshot;
        Snapshot rewound;
        if (snapshot.as_of() > end_of_day(origin)) {
            rewound = snapshot.as_of_view(origin);
            view = &rewound;
        }
        ForecastResult r = do_forecast(*view, origin, lookahead_days, filter);
        r.model_name = name();
        r.origin = origin;
        r.lookahead_days = lookahead_days;
        r.filter_id = filter.id();
        r.point = std::max(0.0, r.point);
        return r;
    }

protected:
    virtual ForecastResult do_forecast(const Snapshot& view, Date origin, int lookahead_days,
                                       const SubgroupFilter& filter) const = 0;

    static CountSeries daily_series(const Snapshot& view, const SubgroupFilter& filter, Date origin) {
        auto start = first_published_date(view);
        if (!start) throw ModelError("insufficient-history: no published records before origin");
        return aggregate_counts(view, Interval::Day, filter, std::make_pair(*start, origin));
    }
};

namespace models {

class PreviousValue final : public Forecaster {
public:
    std::string name() const override { return "previous_value"; }

protected:
    ForecastResult do_forecast(const Snapshot& view, Date origin, int lookahead_days,
                               const SubgroupFilter& filter) const override {
        return forecast_previous_value(daily_series(view, filter, origin), origin, lookahead_days);
    }
};

class RollingMean final : public Forecaster {
public:
    explicit RollingMean(int k = 3) : k_(k) {}
    std::string name() const override { return "rolling_mean:k=" + std::to_string(k_); }

protected:
    ForecastResult do_forecast(const Snapshot& view, Date origin, int lookahead_days,
                               const SubgroupFilter& filter) const override {
        return forecast_rolling_mean(daily_series(view, filter, origin), origin, lookahead_days, k_);
    }

private:
    int k_;
};

class Croston final : public Forecaster {
public:
    explicit Croston(double alpha = 0.1) : alpha_(alpha) {}
    std::string name() const override {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "croston:alpha=%g", alpha_);
        return buf;
    }

protected:
    ForecastResult do_forecast(const Snapshot& view, Date origin, int lookahead_days,
                               const SubgroupFilter& filter) const override {
        return forecast_croston(daily_series(view, filter, origin), origin, lookahead_days, alpha_);
    }

private:
    double alpha_;
};

class Mvue final : public Forecaster {
public:
    explicit Mvue(bool uniform_fraction = false) : uniform_(uniform_fraction) {}
    std::string name() const override { return uniform_ ? "mvue:fraction=uniform" : "mvue"; }
    bool supports_subgroups() const override { return false; } // serial numbers carry no subset information

protected:
    ForecastResult do_forecast(const Snapshot& view, Date origin, int lookahead_days,
                               const SubgroupFilter&) const override {
        return forecast_mvue(view, origin, lookahead_days, uniform_);
    }

private:
    bool uniform_;
};

class Matrix final : public Forecaster {
public:
    explicit Matrix(std::optional<int> lookback_years = std::nullopt) : lookback_(lookback_years) {}
    std::string name() const override {
        return lookback_ ? "matrix:lookback=" + std::to_string(*lookback_) : "matrix";
    }
    bool supports_subgroups() const override { return false; } // rows are IDs, not subsets

protected:
    ForecastResult do_forecast(const Snapshot& view, Date origin, int lookahead_days,
                               const SubgroupFilter&) const override {
        return forecast_matrix(view, origin, lookahead_days, std::nullopt, lookback_);
    }

private:
    std::optional<int> lookback_;
};

class LittleLb final : public Forecaster {
public:
    explicit LittleLb(std::optional<int> lookback_days = std::nullopt) : lookback_(lookback_days) {}
    std::string name() const override {
        return lookback_ ? "little_lb:lookback=" + std::to_string(*lookback_) : "little_lb";
    }

protected:
    ForecastResult do_forecast(const Snapshot& view, Date origin, int lookahead_days,
                               const SubgroupFilter& filter) const override {
        return forecast_little_lb(view, origin, lookahead_days, lookback_.value_or(lookahead_days), filter);
    }

private:
    std::optional<int> lookback_;
};

/// Ridge over the leading-indicator feature rows. Training rows are built at
/// every standard grid origin whose 365d feature window and target both fit
/// inside the rewound view.
class Ridge final : public Forecaster {
public:
    explicit Ridge(double regularization = 1.0, int training_step_days = 10)
        : reg_(regularization), step_(training_step_days) {}
    std::string name() const override {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "ridge:reg=%g", reg_);
        return buf;
    }

protected:
    ForecastResult do_forecast(const Snapshot& view, Date origin, int lookahead_days,
                               const SubgroupFilter& filter) const override {
        auto data_start = first_published_date(view);
        if (!data_start) throw ModelError("insufficient-history: no published records before origin");
        std::vector<Date> origins;
        for (Date o = *data_start + 365; o + lookahead_days <= origin; o = o + step_) origins.push_back(o);
        if (origins.size() < 2)
            throw ModelError("insufficient-history: not enough training origins before " + origin.to_string());
        auto rows = build_feature_rows(view, origins, lookahead_days, filter);
        RidgeModel model = fit_ridge(rows, reg_);
        std::vector<Date> target{origin};
        auto prediction_row = build_feature_rows(view, target, lookahead_days, filter);
        auto r = predict_ridge(model, prediction_row.front());
        r.filter_id = filter.id();
        return r;
    }

private:
    double reg_;
    int step_;
};

} // namespace models

/// Instantiates a forecaster from its spec string, e.g. "mvue",
/// "rolling_mean:k=3", "ridge:reg=0.1", "little_lb:lookback=365".
inline std::unique_ptr<Forecaster> make_forecaster(const std::string& spec) {
    std::string head = spec;
    std::map<std::string, std::string> params;
    if (auto colon = spec.find(':'); colon != std::string::npos) {
        head = spec.substr(0, colon);
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            std::string kv = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("unparseable-model: \"" + spec + "\"");
            params[kv.substr(0, eq)] = kv.substr(eq + 1);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    auto num = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        if (it == params.end()) return fallback;
        try {
            return std::stod(it->second);
        } catch (const std::exception&) {
            throw ConfigError("unparseable-model: bad value for " + key + " in \"" + spec + "\"");
        }
    };

    if (head == "previous_value") return std::make_unique<models::PreviousValue>();
    if (head == "rolling_mean") return std::make_unique<models::RollingMean>(int(num("k", 3)));
    if (head == "croston") return std::make_unique<models::Croston>(num("alpha", 0.1));
    if (head == "mvue") {
        bool uniform = params.count("fraction") && params["fraction"] == "uniform";
        return std::make_unique<models::Mvue>(uniform);
    }
    if (head == "matrix") {
        std::optional<int> lb;
        if (params.count("lookback")) lb = int(num("lookback", 0));
        return std::make_unique<models::Matrix>(lb);
    }
    if (head == "little_lb") {
        std::optional<int> lb;
        if (params.count("lookback")) lb = int(num("lookback", 0));
        return std::make_unique<models::LittleLb>(lb);
    }
    if (head == "ridge") return std::make_unique<models::Ridge>(num("reg", 1.0), int(num("step", 10)));
    throw ConfigError("unknown-model: \"" + spec + "\"");
}

/// Candidate set for --model auto and the subgroup pipeline. Serial-number
/// models are excluded for subgroup filters (they cannot see subsets).
inline std::vector<std::string> default_candidates(bool subgroup) {
    std::vector<std::string> c = {"previous_value", "rolling_mean:k=3", "croston:alpha=0.1",
                                  "little_lb",      "ridge:reg=0.01",   "ridge:reg=0.1",
                                  "ridge:reg=1",    "ridge:reg=10"};
    if (!subgroup) {
        c.push_back("mvue");
        c.push_back("matrix");
    }
    std::sort(c.begin(), c.end());
    return c;
}

} // namespace vulncast
