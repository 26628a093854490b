#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "vulncast/io/file.hpp"
#include "vulncast/record.hpp"

namespace vulncast {

struct NvdParseOptions {
    bool skip_malformed = true; // count and continue instead of throwing schema-error
};

struct NvdParseResult {
    std::vector<CveRecord> records;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

namespace detail {

// cpe23Uri fields are colon-separated with backslash escapes.
inline std::vector<std::string> split_cpe(const std::string& uri) {
    std::vector<std::string> parts;
    std::string cur;
    for (std::size_t i = 0; i < uri.size(); ++i) {
        if (uri[i] == '\\' && i + 1 < uri.size()) {
            cur += uri[i + 1];
            ++i;
        } else if (uri[i] == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += uri[i];
        }
    }
    parts.push_back(cur);
    return parts;
}

inline void collect_cpes(const nlohmann::json& node, std::vector<std::string>& vendors,
                         std::vector<std::string>& products) {
    if (node.contains("cpe_match")) {
        for (const auto& m : node["cpe_match"]) {
            if (m.contains("vulnerable") && m["vulnerable"].is_boolean() && !m["vulnerable"].get<bool>())
                continue;
            if (!m.contains("cpe23Uri") || !m["cpe23Uri"].is_string()) continue;
            auto parts = split_cpe(m["cpe23Uri"].get<std::string>());
            if (parts.size() > 4) {
                vendors.push_back(parts[3]);
                products.push_back(parts[4]);
            }
        }
    }
    if (node.contains("children"))
        for (const auto& child : node["children"]) collect_cpes(child, vendors, products);
}

inline CveRecord parse_nvd_item(const nlohmann::json& item) {
    CveRecord r;
    r.id = parse_cve_id(item.at("cve").at("CVE_data_meta").at("ID").get<std::string>());
    if (item.contains("publishedDate") && item["publishedDate"].is_string())
        r.published_at = DateTime::parse(item["publishedDate"].get<std::string>());
    r.status = RecordStatus::Published;

    if (item["cve"].contains("description"))
        for (const auto& d : item["cve"]["description"].value("description_data", nlohmann::json::array()))
            if (d.contains("value") && d["value"].is_string() &&
                d["value"].get<std::string>().rfind("** REJECT **", 0) == 0)
                r.status = RecordStatus::Rejected;

    if (item["cve"].contains("problemtype"))
        for (const auto& pt : item["cve"]["problemtype"].value("problemtype_data", nlohmann::json::array()))
            for (const auto& d : pt.value("description", nlohmann::json::array()))
                if (d.contains("value") && d["value"].is_string()) {
                    std::string v = d["value"].get<std::string>();
                    if (v.rfind("CWE-", 0) == 0) r.cwes.push_back(v);
                }

    if (item.contains("configurations"))
        for (const auto& node : item["configurations"].value("nodes", nlohmann::json::array()))
            detail::collect_cpes(node, r.vendors, r.products);
    normalize_tokens(r.vendors);
    normalize_tokens(r.products);
    normalize_tokens(r.cwes);

    if (item.contains("impact")) {
        const auto& impact = item["impact"];
        if (impact.contains("baseMetricV3") && impact["baseMetricV3"].contains("cvssV3") &&
            impact["baseMetricV3"]["cvssV3"].contains("baseSeverity")) {
            r.severity = severity_from_string(impact["baseMetricV3"]["cvssV3"]["baseSeverity"].get<std::string>());
        } else if (impact.contains("baseMetricV2") && impact["baseMetricV2"].contains("cvssV2") &&
                   impact["baseMetricV2"]["cvssV2"].contains("baseScore")) {
            r.severity = severity_from_cvss_v2(impact["baseMetricV2"]["cvssV2"]["baseScore"].get<double>());
        }
    }
    return r;
}

} // namespace detail

/// Parses an NVD JSON 1.1 yearly feed (optionally gzipped) into partial
/// records. Statuses are provisional (published/rejected); build_snapshot
/// finalizes them against the as-of date and MITRE data.
inline NvdParseResult parse_nvd_feed(const std::filesystem::path& path, NvdParseOptions opts = {}) {
    std::string text = read_text_auto(path);
    nlohmann::json feed;
    try {
        feed = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("schema-error: " + path.string() + " is not valid JSON (" + e.what() + ")");
    }
    if (!feed.contains("CVE_Items") || !feed["CVE_Items"].is_array())
        throw DataError("schema-error: " + path.string() + " has no CVE_Items array");

    NvdParseResult result;
    const auto& items = feed["CVE_Items"];
    result.records.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        try {
            result.records.push_back(detail::parse_nvd_item(items[i]));
        } catch (const std::exception& e) {
            if (!opts.skip_malformed)
                throw DataError("schema-error: item " + std::to_string(i) + " in " + path.string() + ": " +
                                e.what());
            ++result.skipped;
            result.warnings.push_back("item " + std::to_string(i) + ": " + e.what());
        }
    }
    return result;
}

} // namespace vulncast
