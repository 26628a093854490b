#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "vulncast/forecast/result.hpp"
#include "vulncast/series/features.hpp"

namespace vulncast {

/// Closed-form ridge regression on z-scored features with an unpenalized
/// intercept (features are centered, so the intercept is the target mean).
struct RidgeModel {
    std::vector<std::string> feature_names;
    std::vector<double> coefficients;                    // per standardized feature
    double intercept = 0.0;
    double regularization = 0.0;
    std::vector<std::pair<double, double>> standardization; // (mean, std) per feature, training-set only

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["model"] = "ridge";
        j["regularization"] = regularization;
        j["intercept"] = intercept;
        j["features"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < feature_names.size(); ++i) {
            nlohmann::ordered_json f;
            f["name"] = feature_names[i];
            f["coefficient"] = coefficients[i];
            f["mean"] = standardization[i].first;
            f["std"] = standardization[i].second;
            j["features"].push_back(f);
        }
        return j;
    }
};

namespace detail {

/// Gauss elimination with partial pivoting; throws on a singular system.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-12)
            throw ModelError("degenerate-design: normal equations are singular");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

} // namespace detail

inline RidgeModel fit_ridge(const std::vector<FeatureRow>& rows, double regularization) {
    if (regularization < 0) throw ConfigError("ridge regularization must be >= 0");
    std::vector<const FeatureRow*> train;
    for (const auto& r : rows)
        if (r.target) train.push_back(&r);
    if (train.size() < 2) throw ModelError("degenerate-design: ridge needs at least 2 rows with targets");

    const std::size_t n = train.size();
    const std::size_t k = train.front()->values.size();

    RidgeModel model;
    model.feature_names = train.front()->names;
    model.regularization = regularization;
    model.standardization.resize(k);

    std::vector<std::vector<double>> x(n, std::vector<double>(k));
    for (std::size_t j = 0; j < k; ++j) {
        double mean = 0;
        for (const auto* r : train) mean += r->values[j];
        mean /= double(n);
        double var = 0;
        for (const auto* r : train) var += (r->values[j] - mean) * (r->values[j] - mean);
        double sd = std::sqrt(var / double(n));
        if (sd == 0) sd = 1.0; // constant feature: centered column is zero, coefficient stays 0
        model.standardization[j] = {mean, sd};
        for (std::size_t i = 0; i < n; ++i) x[i][j] = (train[i]->values[j] - mean) / sd;
    }

    double y_mean = 0;
    for (const auto* r : train) y_mean += *r->target;
    y_mean /= double(n);
    model.intercept = y_mean;

    // (X^T X + reg I) beta = X^T (y - y_mean)
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < k; ++a) {
            xty[a] += x[i][a] * (*train[i]->target - y_mean);
            for (std::size_t b = a; b < k; ++b) xtx[a][b] += x[i][a] * x[i][b];
        }
    }
    for (std::size_t a = 0; a < k; ++a) {
        xtx[a][a] += regularization;
        for (std::size_t b = 0; b < a; ++b) xtx[a][b] = xtx[b][a];
    }
    model.coefficients = detail::solve_linear(std::move(xtx), std::move(xty));
    return model;
}

/// Point = max(0, intercept + beta . standardized features).
inline ForecastResult predict_ridge(const RidgeModel& model, const FeatureRow& row) {
    if (row.names != model.feature_names)
        throw ModelError("feature-mismatch: row features do not match the fitted model");
    double y = model.intercept;
    for (std::size_t j = 0; j < model.coefficients.size(); ++j) {
        auto [mean, sd] = model.standardization[j];
        y += model.coefficients[j] * ((row.values[j] - mean) / sd);
    }
    ForecastResult r;
    r.model_name = "ridge";
    r.origin = row.origin;
    r.lookahead_days = row.lookahead_days;
    r.point = std::max(0.0, y);
    return r;
}

} // namespace vulncast
