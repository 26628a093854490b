#pragma once

#include <string>
#include <vector>

#include "vulncast/vulncast.hpp"

namespace testutil {

using namespace vulncast;

inline DateTime dt(const std::string& s) { return DateTime::parse(s); }
inline Date day(const std::string& s) { return Date::parse(s); }

inline CveRecord published(const std::string& id, const std::string& assigned, const std::string& pub) {
    CveRecord r;
    r.id = parse_cve_id(id);
    r.assigned_at = dt(assigned);
    r.published_at = dt(pub);
    r.status = RecordStatus::Published;
    return r;
}

inline CveRecord published_only(const std::string& id, const std::string& pub) {
    CveRecord r;
    r.id = parse_cve_id(id);
    r.published_at = dt(pub);
    r.status = RecordStatus::Published;
    return r;
}

inline CveRecord assigned_only(const std::string& id, const std::string& assigned) {
    CveRecord r;
    r.id = parse_cve_id(id);
    r.assigned_at = dt(assigned);
    r.status = RecordStatus::AssignedUnpublished;
    return r;
}

inline Snapshot snap(const std::string& as_of_day, std::vector<CveRecord> records) {
    return Snapshot{end_of_day(day(as_of_day)), std::move(records)};
}

/// Like snap(), but with serial-gap records materialized the way ingest and
/// as_of_view leave them.
inline Snapshot snap_inferred(const std::string& as_of_day, std::vector<CveRecord> records) {
    detail::materialize_inferred(records);
    return Snapshot{end_of_day(day(as_of_day)), std::move(records)};
}

} // namespace testutil
