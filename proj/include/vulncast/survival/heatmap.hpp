#pragma once

#include <map>
#include <vector>

#include "vulncast/snapshot.hpp"

namespace vulncast {

/// Published-record counts bucketed by (CVE-ID year, publication year); the
/// historical-record view that exposes retro-assignments and the 2017
/// publication push.
struct HeatmapCounts {
    std::vector<int> cve_years;             // rows, ascending
    std::vector<int> publication_years;     // columns, ascending
    std::vector<std::vector<long>> counts;  // counts[row][col]
    long total = 0;

    long at(int cve_year, int publication_year) const {
        for (std::size_t i = 0; i < cve_years.size(); ++i)
            if (cve_years[i] == cve_year)
                for (std::size_t j = 0; j < publication_years.size(); ++j)
                    if (publication_years[j] == publication_year) return counts[i][j];
        return 0;
    }
};

inline HeatmapCounts heatmap_counts(const Snapshot& snapshot) {
    std::map<std::pair<int, int>, long> cells;
    for (const auto& r : snapshot.records()) {
        if (r.status != RecordStatus::Published || !r.published_at) continue;
        ++cells[{r.id.year, r.published_at->date().year()}];
    }
    HeatmapCounts h;
    std::map<int, std::size_t> row_of, col_of;
    for (const auto& [key, n] : cells) {
        row_of.emplace(key.first, 0);
        col_of.emplace(key.second, 0);
        h.total += n;
    }
    for (auto& [y, idx] : row_of) {
        idx = h.cve_years.size();
        h.cve_years.push_back(y);
    }
    for (auto& [y, idx] : col_of) {
        idx = h.publication_years.size();
        h.publication_years.push_back(y);
    }
    h.counts.assign(h.cve_years.size(), std::vector<long>(h.publication_years.size(), 0));
    for (const auto& [key, n] : cells) h.counts[row_of[key.first]][col_of[key.second]] = n;
    return h;
}

} // namespace vulncast
