#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vulncast/eval/retrocast.hpp"
#include "vulncast/series/count_series.hpp"
#include "vulncast/survival/heatmap.hpp"
#include "vulncast/survival/kaplan_meier.hpp"
#include "vulncast/survival/ks.hpp"
#include "vulncast/survival/lags.hpp"

namespace vulncast {

using Provenance = std::vector<std::pair<std::string, std::string>>;

namespace detail {

inline std::string provenance_comment(const Provenance& prov) {
    std::ostringstream out;
    out << "# vulncast";
    for (const auto& [k, v] : prov) out << ' ' << k << '=' << v;
    out << '\n';
    return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("io-error: cannot write " + path.string());
    out << text;
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace detail

inline void write_count_series_csv(const CountSeries& series, const std::filesystem::path& path,
                                   const Provenance& prov) {
    std::ostringstream out;
    out << detail::provenance_comment(prov);
    out << "period_start,count\n";
    for (const auto& [day, n] : series.buckets) out << day.to_string() << ',' << n << '\n';
    detail::write_text(path, out.str());
}

inline void write_survival_curve_csv(const SurvivalCurve& curve, const std::filesystem::path& path,
                                     const Provenance& prov) {
    std::ostringstream out;
    out << detail::provenance_comment(prov);
    out << "time,survival\n";
    out << "0," << detail::fmt(1.0) << '\n';
    for (const auto& p : curve.points) out << detail::fmt(p.time) << ',' << detail::fmt(p.survival) << '\n';
    detail::write_text(path, out.str());
}

inline void write_ks_matrix_csv(const KsMatrix& m, const std::filesystem::path& path, const Provenance& prov) {
    std::ostringstream out;
    out << detail::provenance_comment(prov);
    out << "year";
    for (int y : m.years) out << ',' << y;
    out << '\n';
    for (std::size_t i = 0; i < m.years.size(); ++i) {
        out << m.years[i];
        for (std::size_t j = 0; j < m.years.size(); ++j) out << ',' << detail::fmt(m.d[i][j]);
        out << '\n';
    }
    detail::write_text(path, out.str());
}

inline void write_heatmap_csv(const HeatmapCounts& h, const std::filesystem::path& path, const Provenance& prov) {
    std::ostringstream out;
    out << detail::provenance_comment(prov);
    out << "cve_year";
    for (int y : h.publication_years) out << ',' << y;
    out << '\n';
    for (std::size_t i = 0; i < h.cve_years.size(); ++i) {
        out << h.cve_years[i];
        for (std::size_t j = 0; j < h.publication_years.size(); ++j) out << ',' << h.counts[i][j];
        out << '\n';
    }
    detail::write_text(path, out.str());
}

inline void write_retrocast_csv(const std::vector<RetrocastRow>& rows, const std::string& model_name,
                                int lookahead_days, const std::filesystem::path& path, const Provenance& prov) {
    std::ostringstream out;
    out << detail::provenance_comment(prov);
    out << "end_date,origin,lookahead_days,model,truth,prediction,interval_low,interval_high\n";
    for (const auto& r : rows) {
        out << r.end_date.to_string() << ',' << r.origin.to_string() << ',' << lookahead_days << ','
            << model_name << ',' << detail::fmt(r.truth) << ',' << detail::fmt(r.prediction) << ',';
        if (r.interval_low) out << detail::fmt(*r.interval_low);
        out << ',';
        if (r.interval_high) out << detail::fmt(*r.interval_high);
        out << '\n';
    }
    detail::write_text(path, out.str());
}

inline void write_forecast_csv(const std::vector<ForecastResult>& results, const std::filesystem::path& path,
                               const Provenance& prov) {
    std::ostringstream out;
    out << detail::provenance_comment(prov);
    out << "origin,lookahead_days,model,filter,point,interval_low,interval_high\n";
    for (const auto& r : results) {
        out << r.origin.to_string() << ',' << r.lookahead_days << ',' << r.model_name << ',' << r.filter_id
            << ',' << detail::fmt(r.point) << ',';
        if (r.interval_low) out << detail::fmt(*r.interval_low);
        out << ',';
        if (r.interval_high) out << detail::fmt(*r.interval_high);
        out << '\n';
    }
    detail::write_text(path, out.str());
}

inline nlohmann::ordered_json lag_summary_json(const LagSummary& s) {
    nlohmann::ordered_json j;
    j["n"] = s.n;
    j["mean_days"] = s.mean_days;
    j["std_days"] = s.std_days;
    j["min_days"] = s.min_days;
    j["q1_days"] = s.q1_days;
    j["median_days"] = s.median_days;
    j["q3_days"] = s.q3_days;
    j["max_days"] = s.max_days;
    return j;
}

inline nlohmann::ordered_json metric_report_json(const MetricReport& m) {
    nlohmann::ordered_json j;
    j["mae"] = m.mae;
    j["mse"] = m.mse;
    j["msloge"] = m.msloge;
    j["frac_gt_10pct"] = m.frac_gt_10pct ? nlohmann::ordered_json(*m.frac_gt_10pct) : nlohmann::ordered_json(nullptr);
    j["frac_gt_5pct"] = m.frac_gt_5pct ? nlohmann::ordered_json(*m.frac_gt_5pct) : nlohmann::ordered_json(nullptr);
    j["frac_asym"] = m.frac_asym ? nlohmann::ordered_json(*m.frac_asym) : nlohmann::ordered_json(nullptr);
    j["n_windows"] = m.n_windows;
    j["n_skipped_zero_truth"] = m.n_skipped_zero_truth;
    return j;
}

inline void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path,
                       const Provenance& prov) {
    nlohmann::ordered_json root = j;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : prov) p[k] = v;
    root["provenance"] = p;
    detail::write_text(path, root.dump(2) + "\n");
}

} // namespace vulncast
