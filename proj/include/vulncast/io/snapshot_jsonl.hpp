#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vulncast/io/digest.hpp"
#include "vulncast/io/file.hpp"
#include "vulncast/snapshot.hpp"

namespace vulncast {

/// Canonical snapshot-on-disk form: a meta line followed by one record per
/// line, sorted by id, RFC 3339 timestamps, nulls for absent fields. Stable
/// bytes for identical inputs.
inline std::string serialize_snapshot(const Snapshot& snapshot) {
    using json = nlohmann::ordered_json;
    std::ostringstream out;
    json meta;
    meta["as_of"] = snapshot.as_of().to_rfc3339();
    meta["format"] = "vulncast-snapshot-v1";
    json prov = json::object();
    for (const auto& [k, v] : snapshot.provenance()) prov[k] = v;
    meta["provenance"] = prov;
    out << meta.dump() << '\n';

    for (const auto& r : snapshot.records()) {
        json j;
        j["id"] = r.id.to_string();
        j["assigned_at"] = r.assigned_at ? json(r.assigned_at->to_rfc3339()) : json(nullptr);
        j["published_at"] = r.published_at ? json(r.published_at->to_rfc3339()) : json(nullptr);
        j["status"] = std::string(to_string(r.status));
        j["vendors"] = r.vendors;
        j["products"] = r.products;
        j["cwes"] = r.cwes;
        j["severity"] = r.severity ? json(std::string(to_string(*r.severity))) : json(nullptr);
        out << j.dump() << '\n';
    }
    return out.str();
}

inline void write_snapshot(const Snapshot& snapshot, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("io-error: cannot write " + path.string());
    out << serialize_snapshot(snapshot);
}

inline std::string snapshot_digest(const Snapshot& snapshot) { return digest_hex(serialize_snapshot(snapshot)); }

inline Snapshot parse_snapshot_jsonl(const std::string& text,
                                     std::vector<std::pair<std::string, std::string>> extra_provenance = {}) {
    using json = nlohmann::json;
    std::istringstream in(text);
    std::string line;
    std::vector<CveRecord> records;
    std::optional<DateTime> as_of;
    std::vector<std::pair<std::string, std::string>> provenance = std::move(extra_provenance);
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError("schema-error: snapshot line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.contains("id")) { // meta line
            if (j.contains("as_of")) as_of = DateTime::parse(j["as_of"].get<std::string>());
            if (j.contains("provenance"))
                for (const auto& [k, v] : j["provenance"].items())
                    provenance.emplace_back(k, v.get<std::string>());
            continue;
        }
        CveRecord r;
        try {
            r.id = parse_cve_id(j["id"].get<std::string>());
            if (j.contains("assigned_at") && !j["assigned_at"].is_null())
                r.assigned_at = DateTime::parse(j["assigned_at"].get<std::string>());
            if (j.contains("published_at") && !j["published_at"].is_null())
                r.published_at = DateTime::parse(j["published_at"].get<std::string>());
            r.status = status_from_string(j.value("status", "published"));
            if (j.contains("vendors")) r.vendors = j["vendors"].get<std::vector<std::string>>();
            if (j.contains("products")) r.products = j["products"].get<std::vector<std::string>>();
            if (j.contains("cwes")) r.cwes = j["cwes"].get<std::vector<std::string>>();
            if (j.contains("severity") && !j["severity"].is_null()) {
                r.severity = severity_from_string(j["severity"].get<std::string>());
                if (!r.severity) throw DataError("unknown-severity: " + j["severity"].get<std::string>());
            }
        } catch (const json::exception& e) {
            throw DataError("schema-error: snapshot line " + std::to_string(lineno) + ": " + e.what());
        }
        records.push_back(std::move(r));
    }
    if (!as_of) {
        DateTime latest{0};
        for (const auto& r : records) {
            if (r.published_at && *r.published_at > latest) latest = *r.published_at;
            if (r.assigned_at && *r.assigned_at > latest) latest = *r.assigned_at;
        }
        as_of = latest;
    }
    return Snapshot{*as_of, std::move(records), std::move(provenance)};
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
    std::string text = read_text_auto(path);
    return parse_snapshot_jsonl(text, {{"source", path.filename().string()},
                                       {"source-digest", digest_hex(text)}});
}

} // namespace vulncast
