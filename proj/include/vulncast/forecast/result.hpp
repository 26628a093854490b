#pragma once

#include <optional>
#include <string>

#include "vulncast/time.hpp"

namespace vulncast {

/// Point forecast of publications in (origin, origin + lookahead_days], with
/// an optional prediction interval attached from validation residuals.
struct ForecastResult {
    std::string model_name;
    Date origin;
    int lookahead_days = 0;
    std::string filter_id = "all";
    double point = 0.0;
    std::optional<double> interval_low;
    std::optional<double> interval_high;
};

} // namespace vulncast
