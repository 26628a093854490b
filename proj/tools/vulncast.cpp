// vulncast: forecast the volume of CVE publications from NVD/MITRE data.
//
// Subcommands: ingest, stats, retrocast, forecast, report. Exit codes:
// 0 success, 2 configuration error, 3 data error, 4 model error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vulncast/report/csv.hpp"
#include "vulncast/report/svg.hpp"
#include "vulncast/version.hpp"
#include "vulncast/vulncast.hpp"

namespace fs = std::filesystem;
using namespace vulncast;

namespace {

// Relative input paths fall back to $VULNCAST_DATA_DIR.
fs::path resolve_input(const std::string& path) {
    fs::path p(path);
    if (p.is_absolute() || fs::exists(p)) return p;
    if (const char* root = std::getenv("VULNCAST_DATA_DIR")) {
        fs::path candidate = fs::path(root) / p;
        if (fs::exists(candidate)) return candidate;
    }
    return p;
}

// JSON config mirrors long flag names; explicit command-line flags win.
void apply_config(CLI::App* cmd, const std::string& config_path) {
    if (config_path.empty()) return;
    std::string text = read_file_bytes(resolve_input(config_path));
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config-error: bad JSON config: ") + e.what());
    }
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt || opt->count() > 0) continue;
        std::vector<std::string> tokens;
        if (value.is_array())
            for (const auto& v : value) tokens.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        else
            tokens.push_back(value.is_string() ? value.get<std::string>() : value.dump());
        for (auto& t : tokens) opt->add_result(t);
        opt->run_callback();
    }
}

Provenance output_provenance(const Snapshot& snapshot, const std::string& model_spec) {
    Provenance p;
    p.emplace_back("version", kVersion);
    p.emplace_back("snapshot-digest", snapshot_digest(snapshot));
    if (!model_spec.empty()) p.emplace_back("model", model_spec);
    return p;
}

ServiceTime parse_service(const std::string& text) {
    auto colon = text.find(':');
    std::string kind = colon == std::string::npos ? text : text.substr(0, colon);
    std::map<std::string, double> params;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            std::string kv = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("config-error: bad service spec \"" + text + "\"");
            params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (kind == "deterministic") return ServiceTime::deterministic(params.count("days") ? params["days"] : 0.0);
    if (kind == "exponential") return ServiceTime::exponential(params.count("mean") ? params["mean"] : 51.0);
    if (kind == "lognormal")
        return ServiceTime::lognormal_median(params.count("median") ? params["median"] : 51.0,
                                             params.count("sigma") ? params["sigma"] : 1.2);
    throw ConfigError("config-error: unknown service distribution \"" + kind + "\"");
}

struct IngestArgs {
    std::vector<std::string> nvd_files;
    std::string assigned_file;
    std::string as_of;
    std::string out = "snapshot.jsonl";
    std::string synthetic; // e.g. "years=3,rate=1000,service=lognormal:median=51,sigma=1.2"
    std::string truth_out;
    std::uint64_t seed = 1;
    bool strict = false;
};

int run_ingest(const IngestArgs& a) {
    if (!a.synthetic.empty()) {
        SyntheticSpec spec;
        spec.seed = a.seed;
        std::string rest = a.synthetic;
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            std::string kv = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigError("config-error: bad synthetic spec near \"" + kv + "\"");
            std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
            if (key == "years") spec.n_years = std::stoi(value);
            else if (key == "rate") spec.arrivals_per_year = std::stod(value);
            else if (key == "start-year") spec.start_year = std::stoi(value);
            else if (key == "horizon") spec.horizon_days = std::stoi(value);
            else if (key == "vendors") spec.n_vendors = std::stoi(value);
            else if (key == "mitre") spec.mitre_export = value == "true" || value == "1";
            else if (key == "service") {
                // the service value itself contains commas; it must come last
                spec.service = parse_service(rest.substr(pos + eq + 1));
                break;
            } else throw ConfigError("config-error: unknown synthetic key \"" + key + "\"");
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        auto [snapshot, truth] = generate_synthetic_snapshot(spec);
        write_snapshot(snapshot, a.out);
        std::cout << "wrote " << a.out << " (" << snapshot.size() << " records, as_of "
                  << snapshot.as_of_date().to_string() << ")\n";
        if (!a.truth_out.empty()) {
            std::ostringstream csv;
            csv << "# vulncast version=" << kVersion << " seed=" << spec.seed << "\n";
            csv << "day_offset,exits\n";
            for (std::size_t i = 0; i < truth.daily_exits.size(); ++i)
                csv << (i + 1) << ',' << truth.daily_exits[i] << '\n';
            detail::write_text(a.truth_out, csv.str());
            std::cout << "wrote " << a.truth_out << "\n";
        }
        return 0;
    }

    if (a.nvd_files.empty()) throw ConfigError("config-error: ingest needs --nvd files or --synthetic");
    std::vector<CveRecord> partials;
    Provenance prov;
    prov.emplace_back("version", kVersion);
    std::size_t skipped = 0;
    for (const auto& f : a.nvd_files) {
        fs::path path = resolve_input(f);
        auto result = parse_nvd_feed(path, {.skip_malformed = !a.strict});
        skipped += result.skipped;
        for (auto& r : result.records) partials.push_back(std::move(r));
        prov.emplace_back(path.filename().string(), digest_hex(read_file_bytes(path)));
    }
    AssignedDates assigned;
    if (!a.assigned_file.empty()) {
        fs::path path = resolve_input(a.assigned_file);
        assigned = parse_assigned_dates(path);
        prov.emplace_back(path.filename().string(), digest_hex(read_file_bytes(path)));
        if (!assigned.rejected_rows.empty())
            std::cerr << "warning: " << assigned.rejected_rows.size() << " unparseable assigned-date rows\n";
        if (assigned.duplicate_rows > 0)
            std::cerr << "warning: " << assigned.duplicate_rows << " duplicate assigned-date rows (kept earliest)\n";
    }
    DateTime as_of;
    if (!a.as_of.empty()) {
        as_of = end_of_day(Date::parse(a.as_of));
    } else {
        DateTime latest{0};
        for (const auto& r : partials)
            if (r.published_at && *r.published_at > latest) latest = *r.published_at;
        as_of = latest;
    }
    auto built = build_snapshot(std::move(partials), assigned, as_of, std::move(prov));
    write_snapshot(built.snapshot, a.out);
    std::cout << "wrote " << a.out << ": " << built.stats.published << " published, " << built.stats.rejected
              << " rejected, " << built.stats.assigned_unpublished << " assigned-unpublished, "
              << built.stats.reserved_inferred << " reserved-inferred";
    if (skipped > 0) std::cout << " (" << skipped << " malformed feed items skipped)";
    std::cout << "\n";
    return 0;
}

struct StatsArgs {
    std::string snapshot;
    std::string out_dir = ".";
};

int run_stats(const StatsArgs& a) {
    Snapshot snapshot = read_snapshot(resolve_input(a.snapshot));
    fs::create_directories(a.out_dir);
    fs::path dir(a.out_dir);
    Provenance prov = output_provenance(snapshot, "");

    auto lags = compute_lags(snapshot);
    auto summary = lag_summary(lags.observations);
    auto j = lag_summary_json(summary);
    j["censored"] = std::count_if(lags.observations.begin(), lags.observations.end(),
                                  [](const LagObservation& l) { return l.censored; });
    j["anomalies_skipped"] = lags.anomalies_skipped;
    write_json(j, dir / "lag_summary.json", prov);

    auto km_years = kaplan_meier(lags.observations, LagGranularity::Year);
    auto km_months = kaplan_meier(lags.observations, LagGranularity::Month);
    write_survival_curve_csv(km_years, dir / "km_years.csv", prov);
    write_survival_curve_csv(km_months, dir / "km_months.csv", prov);
    write_survival_svg({{"years", km_years}}, "Kaplan-Meier, year lags", dir / "km_years.svg", prov);
    write_survival_svg({{"months", km_months}}, "Kaplan-Meier, month lags", dir / "km_months.svg", prov);

    auto ks_years = ks_year_matrix(snapshot);
    auto ks_cum = ks_cumulative_matrix(snapshot);
    write_ks_matrix_csv(ks_years, dir / "ks_years.csv", prov);
    write_ks_matrix_csv(ks_cum, dir / "ks_cumulative.csv", prov);
    write_matrix_svg(ks_years.years, ks_years.years, ks_years.d, "KS distances, month lags by cohort year",
                     dir / "ks_years.svg", prov);
    write_matrix_svg(ks_cum.years, ks_cum.years, ks_cum.d, "KS distances, cumulative vs calendar cohorts",
                     dir / "ks_cumulative.svg", prov);

    auto heat = heatmap_counts(snapshot);
    write_heatmap_csv(heat, dir / "heatmap.csv", prov);
    std::vector<std::vector<double>> heatd(heat.cve_years.size(),
                                           std::vector<double>(heat.publication_years.size(), 0.0));
    for (std::size_t i = 0; i < heat.counts.size(); ++i)
        for (std::size_t k = 0; k < heat.counts[i].size(); ++k) heatd[i][k] = double(heat.counts[i][k]);
    write_matrix_svg(heat.cve_years, heat.publication_years, heatd, "CVE year vs publication year",
                     dir / "heatmap.svg", prov);

    for (Interval iv : {Interval::Day, Interval::Week, Interval::Month, Interval::Quarter, Interval::Year}) {
        auto series = aggregate_counts(snapshot, iv, SubgroupFilter::all());
        write_count_series_csv(series, dir / ("counts_" + std::string(to_string(iv)) + ".csv"), prov);
    }

    std::cout << "stats written to " << a.out_dir << " (median lag " << detail::fmt(summary.median_days)
              << " days over " << summary.n << " uncensored observations)\n";
    return 0;
}

struct RetrocastArgs {
    std::string snapshot;
    std::string model = "mvue";
    int lookahead = 365;
    std::string start = "2018-09-01";
    std::string end = "2020-09-01";
    int step = 10;
    std::string validation_start, validation_end;
    std::string filter = "all";
    int cutoff_year = 0;
    double z = 1.96;
    int jobs = 1;
    std::string out_csv = "retrocast.csv";
    std::string out_metrics = "retrocast_metrics.json";
};

RetrocastPlan plan_from(const RetrocastArgs& a) {
    RetrocastPlan plan;
    plan.start_end_date = Date::parse(a.start);
    plan.final_end_date = Date::parse(a.end);
    plan.step_days = a.step;
    plan.lookahead_days = a.lookahead;
    plan.filter_id = a.filter;
    plan.z = a.z;
    if (!a.validation_start.empty() && !a.validation_end.empty()) {
        plan.validation = {Date::parse(a.validation_start), Date::parse(a.validation_end)};
    } else {
        // default: the eight calendar months before the test range
        int y = plan.start_end_date.year();
        int m = int(plan.start_end_date.month()) - 8;
        if (m < 1) { m += 12; --y; }
        plan.validation = {Date::from_ymd(y, unsigned(m), 1), plan.start_end_date};
    }
    return plan;
}

int run_retrocast(const RetrocastArgs& a) {
    Snapshot snapshot = read_snapshot(resolve_input(a.snapshot));
    if (a.cutoff_year > 0) snapshot = apply_cutoff(snapshot, a.cutoff_year);
    RetrocastPlan plan = plan_from(a);

    std::string spec = a.model;
    if (spec == "auto") {
        auto selection = select_model(default_candidates(plan.filter_id != "all"), snapshot, plan, a.jobs);
        spec = selection.spec;
        std::cout << "selected model: " << spec << " (validation MSLogE "
                  << detail::fmt(selection.validation.msloge) << ")\n";
    }
    auto model = make_forecaster(spec);
    auto outcome = retrocast(snapshot, plan, *model, a.jobs);

    Provenance prov = output_provenance(snapshot, spec);
    prov.emplace_back("lookahead", std::to_string(a.lookahead));
    prov.emplace_back("filter", a.filter);
    write_retrocast_csv(outcome.rows, spec, a.lookahead, a.out_csv, prov);
    auto mj = metric_report_json(outcome.metrics);
    mj["model"] = spec;
    mj["lookahead_days"] = a.lookahead;
    if (outcome.interval) mj["validation_sigma"] = outcome.interval->sigma;
    write_json(mj, a.out_metrics, prov);

    std::cout << outcome.rows.size() << " windows: MAE " << detail::fmt(outcome.metrics.mae) << ", MSLogE "
              << detail::fmt(outcome.metrics.msloge) << " -> " << a.out_csv << ", " << a.out_metrics << "\n";
    return 0;
}

struct ForecastArgs {
    std::string snapshot;
    std::string model = "auto";
    std::string origin;
    std::vector<int> lookaheads = {30, 91, 182, 365};
    std::string filter = "all";
    double z = 1.96;
    int jobs = 1;
    std::string out_csv = "forecast.csv";
    std::string out_svg = "forecast.svg";
};

int run_forecast(const ForecastArgs& a) {
    Snapshot snapshot = read_snapshot(resolve_input(a.snapshot));
    Date origin = a.origin.empty() ? snapshot.as_of_date() : Date::parse(a.origin);
    SubgroupFilter filter = compile_filter(a.filter);

    std::vector<ForecastResult> results;
    std::vector<std::string> specs;
    for (int lookahead : a.lookaheads) {
        std::string spec = a.model;
        if (spec == "auto") {
            RetrocastPlan plan;
            plan.start_end_date = origin - 365;
            plan.final_end_date = origin;
            plan.lookahead_days = lookahead;
            plan.filter_id = a.filter;
            plan.validation = {origin - 365, origin};
            auto selection = select_model(default_candidates(!filter.is_all()), snapshot, plan, a.jobs);
            spec = selection.spec;
        }
        auto model = make_forecaster(spec);
        auto sweep = forecast_sweep(snapshot, origin, {lookahead}, *model, filter, a.z, a.jobs);
        for (const auto& [la, err] : sweep.errors)
            std::cerr << "model-error at lookahead " << la << ": " << err << "\n";
        for (auto& r : sweep.results) {
            specs.push_back(spec);
            results.push_back(std::move(r));
        }
    }
    if (results.empty()) throw ModelError("model-error: no lookahead produced a forecast");

    Provenance prov = output_provenance(snapshot, a.model);
    prov.emplace_back("origin", origin.to_string());
    prov.emplace_back("filter", a.filter);
    write_forecast_csv(results, a.out_csv, prov);

    std::vector<BarDatum> bars;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        BarDatum b;
        b.label = std::to_string(r.lookahead_days) + "d (" + specs[i] + ")";
        b.value = r.point;
        b.low = r.interval_low;
        b.high = r.interval_high;
        bars.push_back(std::move(b));
    }
    write_bar_chart_svg(bars, "CVEs expected after " + origin.to_string() + " [" + filter.id() + "]",
                        a.out_svg, prov);

    for (const auto& r : results)
        std::cout << r.lookahead_days << "d: " << detail::fmt(std::round(r.point))
                  << (r.interval_low ? " [" + detail::fmt(std::round(*r.interval_low)) + ", " +
                                           detail::fmt(std::round(*r.interval_high)) + "]"
                                     : "")
                  << " (" << r.model_name << ")\n";
    std::cout << "wrote " << a.out_csv << ", " << a.out_svg << "\n";
    return 0;
}

struct ReportArgs {
    std::string snapshot;
    std::string out_dir = "report";
    std::string subgroups; // "top5" or comma-separated filter specs
    std::vector<int> lookaheads = {30, 91, 182, 365};
    int jobs = 1;
    double z = 1.96;
};

int run_report(const ReportArgs& a) {
    Snapshot snapshot = read_snapshot(resolve_input(a.snapshot));
    fs::create_directories(a.out_dir);
    fs::path dir(a.out_dir);

    StatsArgs stats{a.snapshot, (dir / "stats").string()};
    run_stats(stats);

    ForecastArgs fc;
    fc.snapshot = a.snapshot;
    fc.lookaheads = a.lookaheads;
    fc.jobs = a.jobs;
    fc.z = a.z;
    fc.out_csv = (dir / "forecast.csv").string();
    fc.out_svg = (dir / "forecast.svg").string();
    run_forecast(fc);

    if (!a.subgroups.empty()) {
        std::vector<SubgroupFilter> filters;
        if (a.subgroups == "top5") {
            for (auto kind : {SubgroupFilter::Kind::Vendor, SubgroupFilter::Kind::Product,
                              SubgroupFilter::Kind::Weakness})
                for (auto& f : top_subgroups(snapshot, kind, 5)) filters.push_back(f);
            filters.push_back(compile_filter("severity>=HIGH"));
        } else {
            std::size_t pos = 0;
            while (pos < a.subgroups.size()) {
                auto comma = a.subgroups.find(',', pos);
                filters.push_back(compile_filter(
                    a.subgroups.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
        RetrocastPlan base = RetrocastPlan::paper_default(365);
        base.z = a.z;
        auto report = subgroup_pipeline(snapshot, filters, a.lookaheads, default_candidates(true), base, a.jobs);
        write_json(report.to_json(), dir / "subgroups.json", output_provenance(snapshot, "auto"));
        std::cout << "wrote " << (dir / "subgroups.json").string() << "\n";
    }
    std::cout << "report written to " << a.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vulncast: CVE publication volume forecasting"};
    app.set_version_flag("--version", std::string("vulncast ") + kVersion);
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Parse NVD/MITRE feeds (or generate synthetic data) into a snapshot");
    ingest->add_option("--nvd", ingest_args.nvd_files, "NVD JSON 1.1 yearly feed files (optionally .gz)");
    ingest->add_option("--assigned", ingest_args.assigned_file, "MITRE assigned-date CSV (cve_id,assigned_date)");
    ingest->add_option("--as-of", ingest_args.as_of, "Snapshot cut date YYYY-MM-DD (default: last publication)");
    ingest->add_option("--out", ingest_args.out, "Output snapshot JSONL path");
    ingest->add_option("--synthetic", ingest_args.synthetic,
                       "Synthetic spec, e.g. years=3,rate=1000,service=lognormal:median=51,sigma=1.2");
    ingest->add_option("--truth-out", ingest_args.truth_out, "CSV of simulated future exits (synthetic only)");
    ingest->add_option("--seed", ingest_args.seed, "Random seed for synthetic generation");
    ingest->add_flag("--strict", ingest_args.strict, "Fail on malformed feed items instead of skipping");

    StatsArgs stats_args;
    auto* stats = app.add_subcommand("stats", "Lag summary, Kaplan-Meier curves, KS matrices, heatmap");
    stats->add_option("--snapshot", stats_args.snapshot, "Snapshot JSONL")->required();
    stats->add_option("--out-dir", stats_args.out_dir, "Output directory");

    RetrocastArgs retro_args;
    auto* retro = app.add_subcommand("retrocast", "Backtest a model over staggered end dates");
    retro->add_option("--snapshot", retro_args.snapshot, "Snapshot JSONL")->required();
    retro->add_option("--model", retro_args.model, "Model spec or 'auto'");
    retro->add_option("--lookahead", retro_args.lookahead, "Lookahead window in days");
    retro->add_option("--start", retro_args.start, "First end date (inclusive)");
    retro->add_option("--end", retro_args.end, "Final end date (exclusive)");
    retro->add_option("--step", retro_args.step, "Stagger step in days");
    retro->add_option("--validation-start", retro_args.validation_start, "Validation range start");
    retro->add_option("--validation-end", retro_args.validation_end, "Validation range end (exclusive)");
    retro->add_option("--filter", retro_args.filter, "Subgroup filter spec");
    retro->add_option("--cutoff-year", retro_args.cutoff_year, "Drop data before Jan 1 of this year");
    retro->add_option("--z", retro_args.z, "Interval z-score");
    retro->add_option("--jobs", retro_args.jobs, "Parallel end-date evaluations");
    retro->add_option("--out-csv", retro_args.out_csv, "Predictions CSV path");
    retro->add_option("--out-metrics", retro_args.out_metrics, "Metrics JSON path");

    ForecastArgs fc_args;
    auto* fc = app.add_subcommand("forecast", "Forward forecasts at several lookaheads with interval bars");
    fc->add_option("--snapshot", fc_args.snapshot, "Snapshot JSONL")->required();
    fc->add_option("--model", fc_args.model, "Model spec or 'auto'");
    fc->add_option("--origin", fc_args.origin, "Forecast origin date (default: snapshot as_of)");
    fc->add_option("--lookaheads", fc_args.lookaheads, "Lookahead windows in days")->delimiter(',');
    fc->add_option("--filter", fc_args.filter, "Subgroup filter spec");
    fc->add_option("--z", fc_args.z, "Interval z-score");
    fc->add_option("--jobs", fc_args.jobs, "Parallel evaluations");
    fc->add_option("--out-csv", fc_args.out_csv, "Forecast CSV path");
    fc->add_option("--out-svg", fc_args.out_svg, "Forecast SVG path");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Combined stats + forecast (+ subgroup pipeline) bundle");
    report->add_option("--snapshot", report_args.snapshot, "Snapshot JSONL")->required();
    report->add_option("--out-dir", report_args.out_dir, "Output directory");
    report->add_option("--subgroups", report_args.subgroups, "'top5' or comma-separated filter specs");
    report->add_option("--lookaheads", report_args.lookaheads, "Lookahead windows in days")->delimiter(',');
    report->add_option("--jobs", report_args.jobs, "Parallel evaluations");
    report->add_option("--z", report_args.z, "Interval z-score");

    std::string config_path;
    for (auto* cmd : {ingest, stats, retro, fc, report})
        cmd->add_option("--config", config_path, "JSON config mirroring these flags");

    try {
        app.parse(argc, argv);
        for (auto* cmd : {ingest, stats, retro, fc, report})
            if (cmd->parsed()) apply_config(cmd, config_path);
        if (ingest->parsed()) return run_ingest(ingest_args);
        if (stats->parsed()) return run_stats(stats_args);
        if (retro->parsed()) return run_retrocast(retro_args);
        if (fc->parsed()) return run_forecast(fc_args);
        if (report->parsed()) return run_report(report_args);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "config-error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config-error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model-error: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data-error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
