#include <catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"

using namespace testutil;

namespace {

CountSeries daily_series(std::vector<long> counts, Date first) {
    CountSeries s;
    s.interval = Interval::Day;
    for (std::size_t i = 0; i < counts.size(); ++i) s.buckets.emplace_back(first + int(i), counts[i]);
    return s;
}

CountSeries constant_series(long per_day, Date first, Date last) {
    CountSeries s;
    s.interval = Interval::Day;
    for (Date d = first; d <= last; d = d + 1) s.buckets.emplace_back(d, per_day);
    return s;
}

} // namespace

TEST_CASE("previous value takes the immediately preceding window") {
    Date first = day("2020-01-01");
    // 10 days of zeros, then 7 days summing to 42, origin at the end
    std::vector<long> counts(10, 0);
    for (int i = 0; i < 7; ++i) counts.push_back(6);
    auto series = daily_series(counts, first);
    Date origin = first + 16;
    auto r = forecast_previous_value(series, origin, 7);
    CHECK(r.point == 42.0);
}

TEST_CASE("previous value on constant data scales with the window") {
    auto series = constant_series(10, day("2018-01-01"), day("2020-01-01"));
    auto r = forecast_previous_value(series, day("2020-01-01"), 365);
    CHECK(r.point == 3650.0);
}

TEST_CASE("previous value boundary: history exactly lookahead long") {
    auto series = constant_series(1, day("2020-01-02"), day("2020-01-31"));
    CHECK_NOTHROW(forecast_previous_value(series, day("2020-01-31"), 30));
    CHECK_THROWS_AS(forecast_previous_value(series, day("2020-01-31"), 31), ModelError);
}

TEST_CASE("rolling mean averages k trailing windows") {
    // three windows of 5 days with totals 10, 20, 30 (most recent last)
    std::vector<long> counts;
    for (long w : {10, 20, 30})
        for (int i = 0; i < 5; ++i) counts.push_back(w / 5);
    auto series = daily_series(counts, day("2020-01-01"));
    Date origin = day("2020-01-15");
    CHECK(forecast_rolling_mean(series, origin, 5, 3).point == 20.0);
    SECTION("k=1 equals previous value") {
        CHECK(forecast_rolling_mean(series, origin, 5, 1).point ==
              forecast_previous_value(series, origin, 5).point);
    }
    SECTION("k=2 of {0,100}") {
        std::vector<long> c2;
        for (int i = 0; i < 5; ++i) c2.push_back(0);
        for (int i = 0; i < 5; ++i) c2.push_back(20);
        auto s2 = daily_series(c2, day("2020-01-01"));
        CHECK(forecast_rolling_mean(s2, day("2020-01-10"), 5, 2).point == 50.0);
    }
}

TEST_CASE("rolling mean k=1 equals previous value on random series") {
    std::mt19937 gen(77);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<long> counts;
        for (int i = 0; i < 60; ++i) counts.push_back(long(gen() % 9));
        auto series = daily_series(counts, day("2020-01-01"));
        Date origin = day("2020-01-01") + 59;
        int lookahead = 1 + int(gen() % 20);
        CHECK(forecast_rolling_mean(series, origin, lookahead, 1).point ==
              forecast_previous_value(series, origin, lookahead).point);
    }
}

TEST_CASE("croston classic") {
    SECTION("constant demand forecasts the constant") {
        auto series = constant_series(4, day("2020-01-01"), day("2020-03-01"));
        auto r = forecast_croston(series, day("2020-03-01"), 30, 0.1);
        CHECK(r.point == Catch::Approx(120.0)); // 4 per day * 30 days
    }
    SECTION("3,0,0,3,0,0,3 smooths to one per period") {
        auto series = daily_series({3, 0, 0, 3, 0, 0, 3}, day("2020-01-01"));
        auto r = forecast_croston(series, day("2020-01-07"), 10, 0.1);
        CHECK(r.point == Catch::Approx(10.0)); // z=3, p=3 -> 1/day
    }
    SECTION("all-zero history raises") {
        auto series = constant_series(0, day("2020-01-01"), day("2020-02-01"));
        CHECK_THROWS_AS(forecast_croston(series, day("2020-02-01"), 30, 0.1), ModelError);
    }
    SECTION("alpha bounds") {
        auto series = constant_series(1, day("2020-01-01"), day("2020-02-01"));
        CHECK_THROWS_AS(forecast_croston(series, day("2020-02-01"), 30, 0.0), ConfigError);
        CHECK_THROWS_AS(forecast_croston(series, day("2020-02-01"), 30, 1.0), ConfigError);
    }
}

TEST_CASE("mvue estimator") {
    SECTION("dense prefix returns the maximum") {
        std::vector<CveRecord> records;
        for (int i = 1; i <= 10; ++i)
            records.push_back(published_only(CveId{2020, i}.to_string(), "2020-06-01T00:00:00Z"));
        Snapshot s{end_of_day(day("2020-12-31")), std::move(records)};
        CHECK(mvue_estimate(s, 2020) == Catch::Approx(10.0));
    }
    SECTION("M=10, k=5 gives 11") {
        std::vector<CveRecord> records;
        for (int i : {2, 4, 6, 8, 10})
            records.push_back(published_only(CveId{2020, i}.to_string(), "2020-06-01T00:00:00Z"));
        Snapshot s{end_of_day(day("2020-12-31")), std::move(records)};
        CHECK(mvue_estimate(s, 2020) == Catch::Approx(10.0 * (1.0 + 1.0 / 5.0) - 1.0)); // 11
    }
    SECTION("monotone in the maximum") {
        for (int m : {20, 30, 50}) {
            std::vector<CveRecord> a, b;
            for (int i : {1, 2, 3, 4})
                a.push_back(published_only(CveId{2020, i}.to_string(), "2020-06-01T00:00:00Z"));
            a.push_back(published_only(CveId{2020, m}.to_string(), "2020-06-01T00:00:00Z"));
            for (int i : {1, 2, 3, 4})
                b.push_back(published_only(CveId{2020, i}.to_string(), "2020-06-01T00:00:00Z"));
            b.push_back(published_only(CveId{2020, m + 5}.to_string(), "2020-06-01T00:00:00Z"));
            Snapshot sa{end_of_day(day("2020-12-31")), std::move(a)};
            Snapshot sb{end_of_day(day("2020-12-31")), std::move(b)};
            CHECK(mvue_estimate(sb, 2020) > mvue_estimate(sa, 2020));
        }
    }
    SECTION("empty cohort raises no-observations") {
        auto s = snap("2020-12-31", {published_only("CVE-2019-0001", "2020-06-01T00:00:00Z")});
        CHECK_THROWS_AS(mvue_estimate(s, 2020), ModelError);
    }
    SECTION("unbiased on uniform draws (small monte carlo)") {
        std::mt19937_64 gen(12345);
        const long N = 1000;
        const int k = 20, trials = 600;
        double sum = 0;
        std::vector<std::int64_t> pool(N);
        for (long i = 0; i < N; ++i) pool[std::size_t(i)] = i + 1;
        for (int t = 0; t < trials; ++t) {
            for (int i = 0; i < k; ++i)
                std::swap(pool[std::size_t(i)], pool[std::size_t(i) + gen() % std::size_t(N - i)]);
            std::vector<CveRecord> records;
            for (int i = 0; i < k; ++i)
                records.push_back(published_only(CveId{2020, pool[std::size_t(i)]}.to_string(),
                                                 "2020-06-01T00:00:00Z"));
            Snapshot s{end_of_day(day("2020-12-31")), std::move(records)};
            sum += mvue_estimate(s, 2020);
        }
        CHECK(std::abs(sum / trials - double(N)) / double(N) < 0.03);
    }
}

TEST_CASE("mvue forecaster takes the max of projection and previous-year total") {
    // previous year: 2000 published; current year: 450 published of serials <= 500
    std::vector<CveRecord> records;
    for (int i = 1; i <= 2000; ++i) {
        Date d = day("2019-01-01") + (i % 360);
        records.push_back(published(CveId{2019, i}.to_string(),
                                    DateTime::from_date(d).to_rfc3339(),
                                    DateTime::from_date(d, 10).to_rfc3339()));
    }
    for (int i = 1; i <= 450; ++i) {
        Date d = day("2020-01-01") + (i % 150);
        records.push_back(published(CveId{2020, i + (i > 400 ? 50 : 0)}.to_string(),
                                    DateTime::from_date(d).to_rfc3339(),
                                    DateTime::from_date(d, 10).to_rfc3339()));
    }
    Snapshot s{end_of_day(day("2020-06-15")), std::move(records)};

    double estimate = mvue_estimate(s, 2020); // ~500
    CHECK(estimate < 600);
    auto r = forecast_mvue(s, day("2020-06-15"), 365);
    // yearly basis must be the previous year's total, not the small projection
    auto uniform = forecast_mvue(s, day("2020-06-15"), 365, true);
    CHECK(uniform.point == Catch::Approx(2000.0));
    SECTION("full-year lookahead returns the yearly basis with empirical fraction too") {
        CHECK(r.point == Catch::Approx(2000.0));
    }
    SECTION("half-year lookahead scales by the empirical fraction") {
        auto half = forecast_mvue(s, day("2020-06-15"), 182);
        CHECK(half.point > 0.0);
        CHECK(half.point < r.point);
        auto half_uniform = forecast_mvue(s, day("2020-06-15"), 182, true);
        CHECK(half_uniform.point == Catch::Approx(2000.0 * 182.0 / 365.0));
    }
}

TEST_CASE("little's law with lookback") {
    SECTION("formula evaluation") {
        QueueStats s{10.0, 5, 0.8, 365};
        CHECK(s.exit_estimate() == Catch::Approx(12.0));
    }
    SECTION("component counting") {
        // 10 arrivals in the lookback year: 6 published quickly, 1 published
        // slowly (service > lookahead), 3 still queued
        std::vector<CveRecord> records;
        Date origin = day("2020-12-01");
        for (int i = 1; i <= 6; ++i)
            records.push_back(published(CveId{2020, i}.to_string(),
                                        DateTime::from_date(origin - 300).to_rfc3339(),
                                        DateTime::from_date(origin - 300 + 40).to_rfc3339()));
        records.push_back(published(CveId{2020, 7}.to_string(),
                                    DateTime::from_date(origin - 300).to_rfc3339(),
                                    DateTime::from_date(origin - 300 + 200).to_rfc3339()));
        for (int i = 8; i <= 10; ++i)
            records.push_back(assigned_only(CveId{2020, i}.to_string(),
                                            DateTime::from_date(origin - 100).to_rfc3339()));
        Snapshot s{end_of_day(day("2020-12-31")), std::move(records)};

        auto stats = little_queue_stats(s, origin, 90, 365);
        CHECK(stats.q == 3);
        CHECK(stats.lambda == Catch::Approx(10.0 * 90.0 / 365.0));
        CHECK(stats.p_within == Catch::Approx(0.6)); // the 200-day service exceeds the 90-day window
        CHECK(stats.exit_estimate() == Catch::Approx((3.0 + 10.0 * 90.0 / 365.0) * 0.6));
    }
    SECTION("empty window with older data returns zero") {
        auto s = snap("2020-12-31", {published("CVE-2018-0001", "2018-01-01T00:00:00Z", "2018-02-01T00:00:00Z")});
        auto r = forecast_little_lb(s, day("2020-12-01"), 30, 30);
        CHECK(r.point == 0.0);
    }
    SECTION("no assignment data at all raises empty-lookback-window") {
        auto s = snap("2020-12-31", {published_only("CVE-2020-0001", "2020-06-01T00:00:00Z")});
        CHECK_THROWS_AS(forecast_little_lb(s, day("2020-12-01"), 30, 30), ModelError);
    }
    SECTION("monotone in lookahead") {
        SyntheticSpec spec;
        spec.n_years = 3;
        spec.arrivals_per_year = 500;
        spec.service = ServiceTime::lognormal_median(51, 1.2);
        spec.seed = 99;
        auto [s, truth] = generate_synthetic_snapshot(spec);
        double last = 0;
        for (int lookahead : {30, 91, 182, 365}) {
            auto stats = little_queue_stats(s, s.as_of_date(), lookahead, 365);
            double e = stats.exit_estimate();
            CHECK(e >= last);
            last = e;
        }
    }
}

TEST_CASE("ridge regression") {
    auto make_row = [](double x1, double x2, std::optional<double> y) {
        FeatureRow r;
        r.origin = day("2020-01-01");
        r.lookahead_days = 30;
        r.names = {"x1", "x2"};
        r.values = {x1, x2};
        r.target = y;
        return r;
    };
    SECTION("reg=0 recovers an exact linear relationship") {
        std::vector<FeatureRow> rows;
        for (double x = 1; x <= 5; ++x) rows.push_back(make_row(x, 2 * x + 1, 3.0 + 2.0 * x));
        // second feature is collinear; drop it to keep the system nonsingular
        for (auto& r : rows) {
            r.names = {"x1"};
            r.values = {r.values[0]};
        }
        auto model = fit_ridge(rows, 0.0);
        for (const auto& r : rows)
            CHECK(predict_ridge(model, r).point == Catch::Approx(*r.target).margin(1e-9));
    }
    SECTION("huge regularization shrinks to the mean") {
        std::vector<FeatureRow> rows;
        for (double x = 1; x <= 5; ++x) rows.push_back(make_row(x, x * x, 10.0 * x));
        auto model = fit_ridge(rows, 1e12);
        for (double c : model.coefficients) CHECK(std::abs(c) < 1e-6);
        CHECK(model.intercept == Catch::Approx(30.0)); // mean of 10..50
        CHECK(predict_ridge(model, rows[0]).point == Catch::Approx(30.0).margin(1e-3));
    }
    SECTION("matches an independent normal-equations evaluation (3 rows, 2 features, reg=1)") {
        std::vector<FeatureRow> rows{make_row(1, 4, 10), make_row(2, 5, 14), make_row(4, 9, 26)};
        auto model = fit_ridge(rows, 1.0);

        // oracle: standardize, center, solve 2x2 (XtX + I) b = Xt y by Cramer's rule in long double
        long double mx1 = (1 + 2 + 4) / 3.0L, mx2 = (4 + 5 + 9) / 3.0L, my = (10 + 14 + 26) / 3.0L;
        long double sx1 = sqrtl(((1 - mx1) * (1 - mx1) + (2 - mx1) * (2 - mx1) + (4 - mx1) * (4 - mx1)) / 3.0L);
        long double sx2 = sqrtl(((4 - mx2) * (4 - mx2) + (5 - mx2) * (5 - mx2) + (9 - mx2) * (9 - mx2)) / 3.0L);
        long double x1[3] = {(1 - mx1) / sx1, (2 - mx1) / sx1, (4 - mx1) / sx1};
        long double x2[3] = {(4 - mx2) / sx2, (5 - mx2) / sx2, (9 - mx2) / sx2};
        long double y[3] = {10 - my, 14 - my, 26 - my};
        long double a11 = 1, a12 = 0, a22 = 1, b1 = 0, b2 = 0;
        for (int i = 0; i < 3; ++i) {
            a11 += x1[i] * x1[i];
            a12 += x1[i] * x2[i];
            a22 += x2[i] * x2[i];
            b1 += x1[i] * y[i];
            b2 += x2[i] * y[i];
        }
        long double det = a11 * a22 - a12 * a12;
        long double beta1 = (b1 * a22 - a12 * b2) / det;
        long double beta2 = (a11 * b2 - b1 * a12) / det;

        CHECK(model.coefficients[0] == Catch::Approx(double(beta1)).margin(1e-10));
        CHECK(model.coefficients[1] == Catch::Approx(double(beta2)).margin(1e-10));
        CHECK(model.intercept == Catch::Approx(double(my)).margin(1e-12));
    }
    SECTION("degenerate design raises at reg=0") {
        std::vector<FeatureRow> rows{make_row(1, 1, 1), make_row(1, 1, 2), make_row(1, 1, 3)};
        // identical rows: centered columns are all zero
        CHECK_THROWS_AS(fit_ridge(rows, 0.0), ModelError);
    }
    SECTION("feature mismatch raises") {
        std::vector<FeatureRow> rows{make_row(1, 4, 10), make_row(2, 5, 14), make_row(4, 9, 26)};
        auto model = fit_ridge(rows, 1.0);
        FeatureRow other = rows[0];
        other.names = {"a", "b"};
        CHECK_THROWS_AS(predict_ridge(model, other), ModelError);
    }
    SECTION("negative raw predictions clamp to zero") {
        std::vector<FeatureRow> rows;
        for (double x = 1; x <= 4; ++x) rows.push_back(make_row(x, 0, 0));
        rows[0].target = 4;
        rows[1].target = 2;
        rows[2].target = 1;
        rows[3].target = 0;
        // drop the constant second feature
        for (auto& r : rows) {
            r.names = {"x1"};
            r.values = {r.values[0]};
        }
        auto model = fit_ridge(rows, 0.0);
        auto probe = rows[0];
        probe.values = {100.0}; // far beyond training range, raw prediction is negative
        CHECK(predict_ridge(model, probe).point == 0.0);
    }
}

TEST_CASE("all registered models are deterministic and non-negative") {
    SyntheticSpec spec;
    spec.n_years = 3;
    spec.arrivals_per_year = 400;
    spec.service = ServiceTime::lognormal_median(51, 1.2);
    spec.seed = 7;
    auto [s, truth] = generate_synthetic_snapshot(spec);
    Date origin = s.as_of_date();
    for (const auto& name : default_candidates(false)) {
        auto model = make_forecaster(name);
        auto a = model->forecast(s, origin, 91);
        auto b = model->forecast(s, origin, 91);
        INFO(name);
        CHECK(a.point == b.point); // bit-identical
        CHECK(a.point >= 0.0);
    }
}
