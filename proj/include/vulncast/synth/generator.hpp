#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vulncast/snapshot.hpp"

namespace vulncast {

/// Deterministic transforms over mt19937_64 so generated data is reproducible
/// byte-for-byte for a given seed (std distribution objects are
/// implementation-defined and avoided here).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; } // [0, 1)

    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct ServiceTime {
    enum class Kind { Deterministic, Exponential, LogNormal };
    Kind kind = Kind::LogNormal;
    double p1 = 51.0; // deterministic: days; exponential: mean days; lognormal: median days
    double p2 = 1.2;  // lognormal: sigma (log-days)

    static ServiceTime deterministic(double days) { return {Kind::Deterministic, days, 0.0}; }
    static ServiceTime exponential(double mean_days) { return {Kind::Exponential, mean_days, 0.0}; }
    static ServiceTime lognormal_median(double median_days, double sigma) {
        return {Kind::LogNormal, median_days, sigma};
    }

    void validate() const {
        switch (kind) {
            case Kind::Deterministic:
                if (p1 < 0) throw ConfigError("invalid-distribution: deterministic days must be >= 0");
                return;
            case Kind::Exponential:
                if (p1 <= 0) throw ConfigError("invalid-distribution: exponential mean must be > 0");
                return;
            case Kind::LogNormal:
                if (p1 <= 0 || p2 <= 0)
                    throw ConfigError("invalid-distribution: lognormal needs median > 0 and sigma > 0");
                return;
        }
        throw ConfigError("invalid-distribution: unknown kind");
    }

    double sample_days(Rng& rng) const {
        switch (kind) {
            case Kind::Deterministic: return p1;
            case Kind::Exponential: return rng.exponential(p1);
            case Kind::LogNormal: return rng.lognormal(std::log(p1), p2);
        }
        return 0.0;
    }

    std::string describe() const {
        char buf[96];
        switch (kind) {
            case Kind::Deterministic: std::snprintf(buf, sizeof(buf), "deterministic:days=%g", p1); break;
            case Kind::Exponential: std::snprintf(buf, sizeof(buf), "exponential:mean=%g", p1); break;
            case Kind::LogNormal: std::snprintf(buf, sizeof(buf), "lognormal:median=%g,sigma=%g", p1, p2); break;
        }
        return buf;
    }
};

struct SyntheticSpec {
    int n_years = 3;
    double arrivals_per_year = 1000.0;
    ServiceTime service{};
    std::uint64_t seed = 1;
    int start_year = 2015;
    int horizon_days = 730;      // how far past as_of ground truth is recorded
    bool mitre_export = true;    // false: unpublished arrivals invisible except via serial gaps
    int n_vendors = 0;           // >0: cycle vendor/product/cwe/severity attributes onto published records

    void validate() const {
        if (n_years < 1) throw ConfigError("invalid-distribution: n_years must be >= 1");
        if (arrivals_per_year < 0) throw ConfigError("invalid-distribution: arrivals_per_year must be >= 0");
        if (horizon_days < 0) throw ConfigError("invalid-distribution: horizon_days must be >= 0");
        service.validate();
    }
};

/// True publication counts after the snapshot cut, per day. queue_daily_exits
/// covers only records already assigned by as_of (the visible queue), the
/// population lag-based models can actually predict.
struct SyntheticTruth {
    Date as_of_date;
    std::vector<long> daily_exits;       // index d = publications on as_of_date + 1 + d
    std::vector<long> queue_daily_exits; // same, restricted to arrivals <= as_of

    long exits_within(int days) const { return sum_prefix(daily_exits, days); }
    long queue_exits_within(int days) const { return sum_prefix(queue_daily_exits, days); }

private:
    static long sum_prefix(const std::vector<long>& v, int days) {
        long total = 0;
        for (int d = 0; d < days && d < int(v.size()); ++d) total += v[std::size_t(d)];
        return total;
    }
};

/// Poisson assignment arrivals with pluggable publication delays; returns the
/// snapshot visible at as_of plus the simulated future exits. Arrivals keep
/// flowing through the truth horizon so forecast targets include
/// assigned-after-origin publications.
inline std::pair<Snapshot, SyntheticTruth> generate_synthetic_snapshot(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    Date start = Date::from_ymd(spec.start_year, 1, 1);
    Date as_of_date = Date::from_ymd(spec.start_year + spec.n_years, 1, 1) - 1; // Dec 31 of last year
    DateTime as_of = end_of_day(as_of_date);
    double sim_days = double((as_of_date + spec.horizon_days) - start) + 1.0;

    static const char* kSeverities[] = {"LOW", "MEDIUM", "HIGH", "CRITICAL"};

    std::vector<CveRecord> records;
    SyntheticTruth truth{as_of_date, std::vector<long>(std::size_t(spec.horizon_days), 0),
                         std::vector<long>(std::size_t(spec.horizon_days), 0)};

    std::map<int, std::int64_t> serial_counter;
    double mean_gap_days = spec.arrivals_per_year > 0 ? 365.0 / spec.arrivals_per_year : 0.0;
    double t = 0.0;
    std::int64_t arrival_index = 0;
    while (spec.arrivals_per_year > 0) {
        t += rng.exponential(mean_gap_days);
        if (t >= sim_days) break;
        DateTime assigned = DateTime::from_date(start) + std::int64_t(t * kSecondsPerDay);
        double service_days = spec.service.sample_days(rng);
        DateTime published = assigned + std::int64_t(service_days * kSecondsPerDay);

        int cohort = assigned.date().year();
        std::int64_t serial = ++serial_counter[cohort];

        if (published > as_of) {
            int offset = published.date() - as_of_date - 1;
            if (offset >= 0 && offset < int(truth.daily_exits.size())) {
                ++truth.daily_exits[std::size_t(offset)];
                if (assigned <= as_of) ++truth.queue_daily_exits[std::size_t(offset)];
            }
        }

        if (assigned <= as_of) {
            CveRecord r;
            r.id = CveId{cohort, serial};
            r.assigned_at = assigned;
            if (published <= as_of) {
                r.published_at = published;
                r.status = RecordStatus::Published;
                if (spec.n_vendors > 0) {
                    long v = long(arrival_index % spec.n_vendors);
                    r.vendors = {"vendor" + std::to_string(v)};
                    r.products = {"product" + std::to_string(v)};
                    r.cwes = {"CWE-" + std::to_string(100 + v % 8)};
                    r.severity = severity_from_string(kSeverities[arrival_index % 4]);
                }
                records.push_back(std::move(r));
            } else if (spec.mitre_export) {
                r.status = RecordStatus::AssignedUnpublished;
                records.push_back(std::move(r));
            }
            // without a MITRE export the ID surfaces only via serial gaps
        }
        ++arrival_index;
    }

    detail::materialize_inferred(records);

    std::vector<std::pair<std::string, std::string>> provenance{
        {"synthetic-seed", std::to_string(spec.seed)},
        {"synthetic-service", spec.service.describe()},
        {"synthetic-arrivals-per-year", std::to_string(spec.arrivals_per_year)},
    };
    return {Snapshot{as_of, std::move(records), std::move(provenance)}, std::move(truth)};
}

} // namespace vulncast
