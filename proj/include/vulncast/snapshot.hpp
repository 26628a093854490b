#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vulncast/record.hpp"

namespace vulncast {

/// Immutable as-of-date view of the CVE universe: every known record plus the
/// IDs whose existence is implied by serial-number gaps. The sole input to
/// every model.
class Snapshot {
public:
    Snapshot() = default;

    Snapshot(DateTime as_of, std::vector<CveRecord> records,
             std::vector<std::pair<std::string, std::string>> provenance = {})
        : as_of_(as_of), records_(std::move(records)), provenance_(std::move(provenance)) {
        std::sort(records_.begin(), records_.end(),
                  [](const CveRecord& a, const CveRecord& b) { return a.id < b.id; });
        for (std::size_t i = 1; i < records_.size(); ++i)
            if (records_[i].id == records_[i - 1].id)
                throw DataError("duplicate-id: " + records_[i].id.to_string());
        for (const auto& r : records_) {
            if (r.published_at && *r.published_at > as_of_)
                throw DataError("record-after-as-of: " + r.id.to_string());
            if (r.status == RecordStatus::Published && !r.published_at)
                throw DataError("published-without-date: " + r.id.to_string());
            if (r.status == RecordStatus::ReservedInferred && (r.assigned_at || r.published_at))
                throw DataError("inferred-with-dates: " + r.id.to_string());
        }
    }

    DateTime as_of() const { return as_of_; }
    Date as_of_date() const { return as_of_.date(); }
    std::span<const CveRecord> records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    const std::vector<std::pair<std::string, std::string>>& provenance() const { return provenance_; }

    const CveRecord* find(const CveId& id) const {
        auto it = std::lower_bound(records_.begin(), records_.end(), id,
                                   [](const CveRecord& r, const CveId& k) { return r.id < k; });
        if (it == records_.end() || !(it->id == id)) return nullptr;
        return &*it;
    }

    std::vector<int> years_present() const {
        std::vector<int> years;
        for (const auto& r : records_)
            if (years.empty() || years.back() != r.id.year) years.push_back(r.id.year);
        return years; // records sorted by id => years already sorted, unique
    }

    /// Rewind to the knowledge available at end of day `day`: future
    /// publications are demoted to assigned-unpublished (dropping the
    /// attribute data their publication would have revealed) or removed, and
    /// reserved IDs are re-inferred from what remains.
    Snapshot as_of_view(Date day) const;

private:
    DateTime as_of_;
    std::vector<CveRecord> records_;
    std::vector<std::pair<std::string, std::string>> provenance_;
};

/// Serial numbers consumed below the cohort maximum but absent from the
/// snapshot: publication of CVE-2020-0100 implies CVE-2020-0001..0099 exist.
inline std::vector<CveId> infer_unpublished_ids(const Snapshot& snapshot, int year) {
    std::vector<std::int64_t> seen;
    for (const auto& r : snapshot.records())
        if (r.id.year == year) seen.push_back(r.id.serial);
    if (seen.empty()) throw DataError("unknown-year: no records for CVE-" + std::to_string(year));
    std::int64_t max_serial = *std::max_element(seen.begin(), seen.end());
    std::set<std::int64_t> present(seen.begin(), seen.end());
    std::vector<CveId> inferred;
    inferred.reserve(std::size_t(max_serial) - present.size());
    for (std::int64_t s = 1; s <= max_serial; ++s)
        if (!present.count(s)) inferred.push_back(CveId{year, s});
    return inferred;
}

namespace detail {

/// Appends a reserved-inferred record for every serial gap, per cohort year.
inline void materialize_inferred(std::vector<CveRecord>& records) {
    std::map<int, std::pair<std::int64_t, std::set<std::int64_t>>> by_year; // year -> (max, seen)
    for (const auto& r : records) {
        auto& [mx, seen] = by_year[r.id.year];
        mx = std::max(mx, r.id.serial);
        seen.insert(r.id.serial);
    }
    for (const auto& [year, entry] : by_year) {
        const auto& [mx, seen] = entry;
        for (std::int64_t s = 1; s <= mx; ++s) {
            if (seen.count(s)) continue;
            CveRecord r;
            r.id = CveId{year, s};
            r.status = RecordStatus::ReservedInferred;
            records.push_back(std::move(r));
        }
    }
}

} // namespace detail

inline Snapshot Snapshot::as_of_view(Date day) const {
    DateTime cut = end_of_day(day);
    if (cut >= as_of_) return *this;
    std::vector<CveRecord> kept;
    kept.reserve(records_.size());
    for (const auto& r : records_) {
        switch (r.status) {
            case RecordStatus::Published:
            case RecordStatus::Rejected:
                if (r.published_at && *r.published_at <= cut) {
                    kept.push_back(r);
                } else if (r.assigned_at && *r.assigned_at <= cut) {
                    CveRecord demoted;
                    demoted.id = r.id;
                    demoted.assigned_at = r.assigned_at;
                    demoted.status = RecordStatus::AssignedUnpublished;
                    kept.push_back(std::move(demoted));
                }
                break;
            case RecordStatus::AssignedUnpublished:
                if (r.assigned_at && *r.assigned_at <= cut) kept.push_back(r);
                break;
            case RecordStatus::ReservedInferred:
                break; // re-inferred below
        }
    }
    detail::materialize_inferred(kept);
    auto prov = provenance_;
    prov.emplace_back("rewound-to", day.to_string());
    return Snapshot{cut, std::move(kept), std::move(prov)};
}

} // namespace vulncast
