#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "vulncast/errors.hpp"

namespace vulncast {

inline constexpr std::int64_t kSecondsPerDay = 86400;

enum class Interval { Day, Week, Month, Quarter, Year };

inline std::string_view to_string(Interval iv) {
    switch (iv) {
        case Interval::Day: return "day";
        case Interval::Week: return "week";
        case Interval::Month: return "month";
        case Interval::Quarter: return "quarter";
        case Interval::Year: return "year";
    }
    return "?";
}

inline Interval interval_from_string(std::string_view s) {
    if (s == "day") return Interval::Day;
    if (s == "week") return Interval::Week;
    if (s == "month") return Interval::Month;
    if (s == "quarter") return Interval::Quarter;
    if (s == "year") return Interval::Year;
    throw ConfigError("unknown-interval: " + std::string(s));
}

/// Calendar date (UTC), stored as whole days since 1970-01-01.
class Date {
public:
    Date() = default;
    explicit constexpr Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day) {
        using namespace std::chrono;
        year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
        if (!ymd.ok()) throw DataError("malformed-date: invalid calendar date");
        return Date{static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count())};
    }

    // Strict "YYYY-MM-DD".
    static Date parse(std::string_view s) {
        auto d = try_parse(s);
        if (!d) throw DataError("malformed-date: expected YYYY-MM-DD, got \"" + std::string(s) + "\"");
        return *d;
    }

    static std::optional<Date> try_parse(std::string_view s) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
        int y;
        unsigned m, d;
        if (!parse_fixed_int(s.substr(0, 4), y) || !parse_fixed_uint(s.substr(5, 2), m) ||
            !parse_fixed_uint(s.substr(8, 2), d))
            return std::nullopt;
        using namespace std::chrono;
        year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
        if (!ymd.ok()) return std::nullopt;
        return Date{static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count())};
    }

    constexpr std::int32_t days_since_epoch() const { return days_; }

    int year() const { return int(ymd().year()); }
    unsigned month() const { return unsigned(ymd().month()); }
    unsigned day() const { return unsigned(ymd().day()); }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year(), month(), day());
        return buf;
    }

    friend constexpr Date operator+(Date a, int days) { return Date{a.days_ + days}; }
    friend constexpr Date operator-(Date a, int days) { return Date{a.days_ - days}; }
    friend constexpr int operator-(Date a, Date b) { return a.days_ - b.days_; }
    constexpr auto operator<=>(const Date&) const = default;

private:
    static bool parse_fixed_int(std::string_view s, int& out) {
        out = 0;
        for (char c : s) {
            if (c < '0' || c > '9') return false;
            out = out * 10 + (c - '0');
        }
        return true;
    }
    static bool parse_fixed_uint(std::string_view s, unsigned& out) {
        int v;
        if (!parse_fixed_int(s, v)) return false;
        out = static_cast<unsigned>(v);
        return true;
    }
    std::chrono::year_month_day ymd() const {
        return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days_}}};
    }

    std::int32_t days_ = 0;
};

/// Instant (UTC), stored as seconds since 1970-01-01T00:00:00Z.
class DateTime {
public:
    DateTime() = default;
    explicit constexpr DateTime(std::int64_t secs_since_epoch) : secs_(secs_since_epoch) {}

    static DateTime from_date(Date d, int hour = 0, int minute = 0, int second = 0) {
        return DateTime{std::int64_t(d.days_since_epoch()) * kSecondsPerDay + hour * 3600 + minute * 60 + second};
    }

    /// Accepts ISO-8601 / RFC 3339 variants seen in NVD and MITRE exports:
    /// "2019-01-02T20:29Z", "2019-11-02T10:00:00", "...T10:00:00.123Z",
    /// "...T10:00:00+01:00", and bare dates "2019-11-02".
    static std::optional<DateTime> try_parse(std::string_view s) {
        if (s.size() < 10) return std::nullopt;
        auto date = Date::try_parse(s.substr(0, 10));
        if (!date) return std::nullopt;
        if (s.size() == 10) return from_date(*date);
        if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
        std::string_view rest = s.substr(11);
        int hh = 0, mm = 0, ss = 0;
        if (rest.size() < 5 || rest[2] != ':') return std::nullopt;
        if (!two_digits(rest.substr(0, 2), hh) || !two_digits(rest.substr(3, 2), mm)) return std::nullopt;
        std::size_t pos = 5;
        if (pos < rest.size() && rest[pos] == ':') {
            if (rest.size() < pos + 3 || !two_digits(rest.substr(pos + 1, 2), ss)) return std::nullopt;
            pos += 3;
        }
        if (pos < rest.size() && rest[pos] == '.') { // drop fractional seconds
            ++pos;
            while (pos < rest.size() && rest[pos] >= '0' && rest[pos] <= '9') ++pos;
        }
        std::int64_t offset = 0;
        if (pos < rest.size()) {
            char c = rest[pos];
            if (c == 'Z') {
                ++pos;
            } else if (c == '+' || c == '-') {
                if (rest.size() < pos + 6 || rest[pos + 3] != ':') return std::nullopt;
                int oh = 0, om = 0;
                if (!two_digits(rest.substr(pos + 1, 2), oh) || !two_digits(rest.substr(pos + 4, 2), om))
                    return std::nullopt;
                offset = (c == '+' ? -1 : 1) * std::int64_t(oh * 3600 + om * 60);
                pos += 6;
            }
        }
        if (pos != rest.size()) return std::nullopt;
        if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
        return DateTime{std::int64_t(date->days_since_epoch()) * kSecondsPerDay + hh * 3600 + mm * 60 + ss +
                        offset};
    }

    static DateTime parse(std::string_view s) {
        auto t = try_parse(s);
        if (!t) throw DataError("malformed-timestamp: \"" + std::string(s) + "\"");
        return *t;
    }

    constexpr std::int64_t seconds_since_epoch() const { return secs_; }

    Date date() const {
        std::int64_t d = secs_ >= 0 ? secs_ / kSecondsPerDay : (secs_ - kSecondsPerDay + 1) / kSecondsPerDay;
        return Date{static_cast<std::int32_t>(d)};
    }

    std::string to_rfc3339() const {
        Date d = date();
        std::int64_t rem = secs_ - std::int64_t(d.days_since_epoch()) * kSecondsPerDay;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%sT%02d:%02d:%02dZ", d.to_string().c_str(), int(rem / 3600),
                      int((rem / 60) % 60), int(rem % 60));
        return buf;
    }

    friend constexpr DateTime operator+(DateTime a, std::int64_t secs) { return DateTime{a.secs_ + secs}; }
    friend constexpr std::int64_t operator-(DateTime a, DateTime b) { return a.secs_ - b.secs_; }
    constexpr auto operator<=>(const DateTime&) const = default;

private:
    static bool two_digits(std::string_view s, int& out) {
        if (s.size() < 2 || s[0] < '0' || s[0] > '9' || s[1] < '0' || s[1] > '9') return false;
        out = (s[0] - '0') * 10 + (s[1] - '0');
        return true;
    }

    std::int64_t secs_ = 0;
};

/// Instant just before the next midnight; "data through day d" cuts use this.
inline DateTime end_of_day(Date d) {
    return DateTime{std::int64_t(d.days_since_epoch() + 1) * kSecondsPerDay - 1};
}

inline double seconds_to_days(std::int64_t secs) { return double(secs) / double(kSecondsPerDay); }

/// Monday of the ISO week containing d.
inline Date week_start(Date d) {
    std::int64_t n = d.days_since_epoch() + 3; // 1969-12-29 (a Monday) maps to 0
    std::int64_t m = ((n % 7) + 7) % 7;
    return d - static_cast<int>(m);
}

inline Date month_start(Date d) { return Date::from_ymd(d.year(), d.month(), 1); }

inline Date quarter_start(Date d) {
    unsigned qm = 1 + 3 * ((d.month() - 1) / 3);
    return Date::from_ymd(d.year(), qm, 1);
}

inline Date year_start(Date d) { return Date::from_ymd(d.year(), 1, 1); }

inline Date bucket_start(Date d, Interval iv) {
    switch (iv) {
        case Interval::Day: return d;
        case Interval::Week: return week_start(d);
        case Interval::Month: return month_start(d);
        case Interval::Quarter: return quarter_start(d);
        case Interval::Year: return year_start(d);
    }
    return d;
}

/// Start of the bucket after the one beginning at `start`.
inline Date next_bucket(Date start, Interval iv) {
    switch (iv) {
        case Interval::Day: return start + 1;
        case Interval::Week: return start + 7;
        case Interval::Month: {
            int y = start.year();
            unsigned m = start.month() + 1;
            if (m > 12) { m = 1; ++y; }
            return Date::from_ymd(y, m, 1);
        }
        case Interval::Quarter: {
            int y = start.year();
            unsigned m = start.month() + 3;
            if (m > 12) { m -= 12; ++y; }
            return Date::from_ymd(y, m, 1);
        }
        case Interval::Year: return Date::from_ymd(start.year() + 1, 1, 1);
    }
    return start + 1;
}

/// Nominal bucket length in days, used to scale per-period forecasts.
inline double nominal_days(Interval iv) {
    switch (iv) {
        case Interval::Day: return 1.0;
        case Interval::Week: return 7.0;
        case Interval::Month: return 30.44;
        case Interval::Quarter: return 91.31;
        case Interval::Year: return 365.25;
    }
    return 1.0;
}

} // namespace vulncast
