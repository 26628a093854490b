#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vulncast/cve_id.hpp"
#include "vulncast/time.hpp"

namespace vulncast {

enum class Severity { None, Low, Medium, High, Critical };

inline std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::None: return "NONE";
        case Severity::Low: return "LOW";
        case Severity::Medium: return "MEDIUM";
        case Severity::High: return "HIGH";
        case Severity::Critical: return "CRITICAL";
    }
    return "?";
}

inline std::optional<Severity> severity_from_string(std::string_view s) {
    if (s == "NONE") return Severity::None;
    if (s == "LOW") return Severity::Low;
    if (s == "MEDIUM") return Severity::Medium;
    if (s == "HIGH") return Severity::High;
    if (s == "CRITICAL") return Severity::Critical;
    return std::nullopt;
}

/// CVSS v2 base score fallback when no v3 severity is present:
/// LOW < 4.0 <= MEDIUM < 7.0 <= HIGH.
inline Severity severity_from_cvss_v2(double base_score) {
    if (base_score < 4.0) return Severity::Low;
    if (base_score < 7.0) return Severity::Medium;
    return Severity::High;
}

enum class RecordStatus { Published, ReservedInferred, AssignedUnpublished, Rejected };

inline std::string_view to_string(RecordStatus s) {
    switch (s) {
        case RecordStatus::Published: return "published";
        case RecordStatus::ReservedInferred: return "reserved-inferred";
        case RecordStatus::AssignedUnpublished: return "assigned-unpublished";
        case RecordStatus::Rejected: return "rejected";
    }
    return "?";
}

inline RecordStatus status_from_string(std::string_view s) {
    if (s == "published") return RecordStatus::Published;
    if (s == "reserved-inferred") return RecordStatus::ReservedInferred;
    if (s == "assigned-unpublished") return RecordStatus::AssignedUnpublished;
    if (s == "rejected") return RecordStatus::Rejected;
    throw DataError("unknown-status: " + std::string(s));
}

/// One CVE as seen in a snapshot. Vendors/products/cwes are kept as sorted,
/// deduplicated, lowercase token lists so serialization is deterministic.
struct CveRecord {
    CveId id;
    std::optional<DateTime> assigned_at;
    std::optional<DateTime> published_at;
    RecordStatus status = RecordStatus::Published;
    std::vector<std::string> vendors;
    std::vector<std::string> products;
    std::vector<std::string> cwes;
    std::optional<Severity> severity;

    bool is_published() const { return status == RecordStatus::Published; }

    // Legacy retro-assignments exist (publication before assignment); they are
    // flagged here and skipped by lag statistics rather than dropped.
    bool lag_anomaly() const {
        return assigned_at && published_at && *published_at < *assigned_at;
    }
};

inline void normalize_tokens(std::vector<std::string>& tokens) {
    for (auto& t : tokens)
        std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
}

} // namespace vulncast
