#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "vulncast/snapshot.hpp"

namespace vulncast {

/// Predicate over CveRecord attributes. Grammar:
///   all | vendor:<v> | product:<p> | cwe:<id> | severity>=<level>
/// Values are lowercase-normalized; ids round-trip through compile_filter.
struct SubgroupFilter {
    enum class Kind { All, Vendor, Product, Weakness, SeverityAtLeast };

    Kind kind = Kind::All;
    std::string value;                        // normalized token for vendor/product/cwe
    Severity min_severity = Severity::None;   // for SeverityAtLeast

    static SubgroupFilter all() { return SubgroupFilter{}; }

    std::string id() const {
        switch (kind) {
            case Kind::All: return "all";
            case Kind::Vendor: return "vendor:" + value;
            case Kind::Product: return "product:" + value;
            case Kind::Weakness: return "cwe:" + value;
            case Kind::SeverityAtLeast: return "severity>=" + std::string(to_string(min_severity));
        }
        return "all";
    }

    bool matches(const CveRecord& r) const {
        switch (kind) {
            case Kind::All: return true;
            case Kind::Vendor: return std::binary_search(r.vendors.begin(), r.vendors.end(), value);
            case Kind::Product: return std::binary_search(r.products.begin(), r.products.end(), value);
            case Kind::Weakness: return std::binary_search(r.cwes.begin(), r.cwes.end(), value);
            case Kind::SeverityAtLeast: return r.severity && *r.severity >= min_severity;
        }
        return false;
    }

    bool is_all() const { return kind == Kind::All; }

    friend bool operator==(const SubgroupFilter& a, const SubgroupFilter& b) { return a.id() == b.id(); }
};

inline SubgroupFilter compile_filter(const std::string& spec) {
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
        return s;
    };
    if (lower(spec) == "all") return SubgroupFilter::all();
    if (auto pos = spec.find(">="); pos != std::string::npos) {
        std::string head = lower(spec.substr(0, pos));
        if (head != "severity") throw ConfigError("unparseable-spec: \"" + spec + "\"");
        std::string level = spec.substr(pos + 2);
        std::transform(level.begin(), level.end(), level.begin(),
                       [](unsigned char c) { return char(std::toupper(c)); });
        auto sev = severity_from_string(level);
        if (!sev) throw ConfigError("unknown-severity: \"" + level + "\"");
        SubgroupFilter f;
        f.kind = SubgroupFilter::Kind::SeverityAtLeast;
        f.min_severity = *sev;
        return f;
    }
    auto colon = spec.find(':');
    if (colon == std::string::npos || colon + 1 >= spec.size())
        throw ConfigError("unparseable-spec: \"" + spec + "\"");
    std::string head = lower(spec.substr(0, colon));
    SubgroupFilter f;
    f.value = lower(spec.substr(colon + 1));
    if (head == "vendor") f.kind = SubgroupFilter::Kind::Vendor;
    else if (head == "product") f.kind = SubgroupFilter::Kind::Product;
    else if (head == "cwe") f.kind = SubgroupFilter::Kind::Weakness;
    else throw ConfigError("unparseable-spec: \"" + spec + "\"");
    return f;
}

/// Most common vendors/products/CWEs among records published in the latest
/// full calendar year of the snapshot (k=5 mirrors the paper's subgroup
/// figures).
inline std::vector<SubgroupFilter> top_subgroups(const Snapshot& snapshot, SubgroupFilter::Kind kind,
                                                 int k = 5) {
    Date as_of = snapshot.as_of_date();
    int year = as_of.year();
    if (as_of < Date::from_ymd(year, 12, 31)) --year; // latest *full* year

    std::map<std::string, long> freq;
    for (const auto& r : snapshot.records()) {
        if (r.status != RecordStatus::Published || !r.published_at) continue;
        if (r.published_at->date().year() != year) continue;
        const std::vector<std::string>* tokens = nullptr;
        if (kind == SubgroupFilter::Kind::Vendor) tokens = &r.vendors;
        else if (kind == SubgroupFilter::Kind::Product) tokens = &r.products;
        else if (kind == SubgroupFilter::Kind::Weakness) tokens = &r.cwes;
        else continue;
        for (const auto& t : *tokens) ++freq[t];
    }
    std::vector<std::pair<long, std::string>> ranked;
    for (const auto& [token, n] : freq) ranked.emplace_back(n, token);
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    std::vector<SubgroupFilter> out;
    for (int i = 0; i < k && i < int(ranked.size()); ++i) {
        SubgroupFilter f;
        f.kind = kind;
        f.value = ranked[std::size_t(i)].second;
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace vulncast
