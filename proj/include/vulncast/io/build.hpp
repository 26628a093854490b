#pragma once

#include <utility>
#include <vector>

#include "vulncast/io/mitre.hpp"
#include "vulncast/snapshot.hpp"

namespace vulncast {

struct BuildStats {
    std::size_t published = 0;
    std::size_t rejected = 0;
    std::size_t assigned_unpublished = 0;
    std::size_t reserved_inferred = 0;
    std::size_t dropped_future = 0;   // neither published nor assigned by as_of
    std::size_t duplicate_nvd = 0;
    std::size_t lag_anomalies = 0;
};

struct BuildResult {
    Snapshot snapshot;
    BuildStats stats;
};

/// Merges NVD partial records with MITRE assigned dates into a snapshot at
/// `as_of`. Records published later than as_of are demoted to
/// assigned-unpublished when their assignment is already known, otherwise
/// dropped (serial inference may still recover their IDs). MITRE-only ids
/// become assigned-unpublished records.
inline BuildResult build_snapshot(std::vector<CveRecord> nvd, const AssignedDates& assigned, DateTime as_of,
                                  std::vector<std::pair<std::string, std::string>> provenance = {}) {
    BuildStats stats;
    std::vector<CveRecord> merged;
    merged.reserve(nvd.size() + assigned.by_id.size());
    std::set<CveId> seen;

    for (auto& r : nvd) {
        if (!seen.insert(r.id).second) {
            ++stats.duplicate_nvd;
            continue;
        }
        if (auto it = assigned.by_id.find(r.id); it != assigned.by_id.end()) r.assigned_at = it->second;
        if (r.published_at && *r.published_at <= as_of) {
            if (r.lag_anomaly()) ++stats.lag_anomalies;
            r.status == RecordStatus::Rejected ? ++stats.rejected : ++stats.published;
            merged.push_back(std::move(r));
        } else if (r.assigned_at && *r.assigned_at <= as_of) {
            CveRecord demoted;
            demoted.id = r.id;
            demoted.assigned_at = r.assigned_at;
            demoted.status = RecordStatus::AssignedUnpublished;
            ++stats.assigned_unpublished;
            merged.push_back(std::move(demoted));
        } else {
            ++stats.dropped_future;
        }
    }

    for (const auto& [id, ts] : assigned.by_id) {
        if (seen.count(id) || ts > as_of) continue;
        CveRecord r;
        r.id = id;
        r.assigned_at = ts;
        r.status = RecordStatus::AssignedUnpublished;
        ++stats.assigned_unpublished;
        merged.push_back(std::move(r));
    }

    std::size_t before = merged.size();
    detail::materialize_inferred(merged);
    stats.reserved_inferred = merged.size() - before;

    return BuildResult{Snapshot{as_of, std::move(merged), std::move(provenance)}, stats};
}

} // namespace vulncast
