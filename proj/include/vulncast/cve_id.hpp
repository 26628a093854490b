#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "vulncast/errors.hpp"

namespace vulncast {

/// CVE identifier "CVE-YEAR-SERIAL". The serial part is at least four digits
/// in the canonical string but carries no upper bound (CVE-2014-123456 is
/// valid); the year token names the assignment cohort, not the publication
/// year.
struct CveId {
    int year = 0;
    std::int64_t serial = 0;

    std::string to_string() const {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "CVE-%04d-%04lld", year, static_cast<long long>(serial));
        return buf;
    }

    constexpr auto operator<=>(const CveId&) const = default;
};

inline constexpr int kMinCveYear = 1999;
inline constexpr int kMaxCveYear = 2100;

/// Strict parse of "CVE-<4-digit year>-<serial, 4+ digits>".
inline CveId parse_cve_id(std::string_view text) {
    auto fail = [&] { throw DataError("malformed-id: \"" + std::string(text) + "\""); };
    if (text.size() < 13 || text.substr(0, 4) != "CVE-" || text[8] != '-') fail();
    int year = 0;
    for (int i = 4; i < 8; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') fail();
        year = year * 10 + (c - '0');
    }
    std::string_view digits = text.substr(9);
    if (digits.size() < 4 || digits.size() > 18) fail();
    std::int64_t serial = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') fail();
        serial = serial * 10 + (c - '0');
    }
    if (year < kMinCveYear || year > kMaxCveYear || serial < 1) fail();
    return CveId{year, serial};
}

inline bool is_cve_id(std::string_view text) {
    try {
        parse_cve_id(text);
        return true;
    } catch (const DataError&) {
        return false;
    }
}

} // namespace vulncast
