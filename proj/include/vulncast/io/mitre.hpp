#pragma once

#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vulncast/cve_id.hpp"
#include "vulncast/io/file.hpp"
#include "vulncast/time.hpp"

namespace vulncast {

struct AssignedDates {
    std::map<CveId, DateTime> by_id;
    std::size_t duplicate_rows = 0;          // later rows for an id already seen
    std::vector<std::string> rejected_rows;  // unparseable rows, reported not dropped silently
};

/// Parses the normalized MITRE assigned-date export: header `cve_id,assigned_date`,
/// ISO-8601 timestamps. Duplicate ids keep the earliest date (assignment is a
/// one-time event; later rows are corrections we cannot interpret).
inline AssignedDates parse_assigned_dates(const std::filesystem::path& path) {
    std::string text = read_text_auto(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("io-error: empty file " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "cve_id,assigned_date")
        throw DataError("header-mismatch: expected \"cve_id,assigned_date\", got \"" + line + "\"");

    AssignedDates out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            out.rejected_rows.push_back("line " + std::to_string(lineno) + ": no delimiter");
            continue;
        }
        std::string id_text = line.substr(0, comma);
        std::string date_text = line.substr(comma + 1);
        CveId id;
        try {
            id = parse_cve_id(id_text);
        } catch (const DataError&) {
            out.rejected_rows.push_back("line " + std::to_string(lineno) + ": bad id \"" + id_text + "\"");
            continue;
        }
        auto ts = DateTime::try_parse(date_text);
        if (!ts) {
            out.rejected_rows.push_back("line " + std::to_string(lineno) + ": bad date \"" + date_text + "\"");
            continue;
        }
        auto [it, inserted] = out.by_id.emplace(id, *ts);
        if (!inserted) {
            ++out.duplicate_rows;
            if (*ts < it->second) it->second = *ts;
        }
    }
    return out;
}

} // namespace vulncast
