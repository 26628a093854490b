#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "helpers.hpp"

using namespace testutil;
namespace fs = std::filesystem;

namespace {

const fs::path kDataDir = VULNCAST_TEST_DATA_DIR;

fs::path temp_file(const std::string& name) {
    auto dir = fs::temp_directory_path() / "vulncast_tests";
    fs::create_directories(dir);
    return dir / name;
}

// gzip compression for the .gz feed test (the library only inflates)
std::string gzip_bytes(const std::string& input) {
    z_stream zs{};
    REQUIRE(deflateInit2(&zs, Z_BEST_SPEED, Z_DEFLATED, 16 + MAX_WBITS, 8, Z_DEFAULT_STRATEGY) == Z_OK);
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(input.data()));
    zs.avail_in = uInt(input.size());
    std::string out(input.size() + 1024, '\0');
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = uInt(out.size());
    REQUIRE(deflate(&zs, Z_FINISH) == Z_STREAM_END);
    out.resize(out.size() - zs.avail_out);
    deflateEnd(&zs);
    return out;
}

} // namespace

TEST_CASE("nvd feed parsing extracts ids, dates, attributes") {
    auto result = parse_nvd_feed(kDataDir / "nvd_mini.json");

    // independent oracle: walk the raw JSON and count well-formed items
    auto raw = nlohmann::json::parse(read_file_bytes(kDataDir / "nvd_mini.json"));
    std::size_t well_formed = 0;
    for (const auto& item : raw["CVE_Items"])
        if (item["cve"]["CVE_data_meta"].contains("ID")) ++well_formed;
    CHECK(result.records.size() == well_formed);
    CHECK(result.records.size() + result.skipped == raw["CVE_Items"].size());
    CHECK(result.skipped == 1); // the item with no ID

    const auto& first = result.records[0];
    CHECK(first.id == CveId{2019, 2});
    CHECK(first.status == RecordStatus::Published);
    REQUIRE(first.published_at);
    CHECK(first.published_at->to_rfc3339() == "2019-01-08T20:29:00Z");
    CHECK(first.vendors == std::vector<std::string>{"examplecorp"});
    CHECK(first.products == std::vector<std::string>{"widget"});
    CHECK(first.cwes == std::vector<std::string>{"cwe-119"});
    CHECK(first.severity == Severity::Critical);

    const auto& reject = result.records[1];
    CHECK(reject.id == CveId{2019, 7});
    CHECK(reject.status == RecordStatus::Rejected);

    const auto& nested = result.records[2];
    CHECK(nested.vendors == std::vector<std::string>{"webvendor"}); // lowercased, non-vulnerable cpe skipped
    CHECK(nested.products == std::vector<std::string>{"portal"});
    CHECK(nested.cwes == std::vector<std::string>{"cwe-79"}); // NVD-CWE-noinfo dropped
    CHECK(nested.severity == Severity::Medium);               // CVSS v2 5.0 fallback

    CHECK(result.records[3].severity == Severity::High); // CVSS v2 7.5 fallback
}

TEST_CASE("nvd feed strict mode raises schema-error with the item index") {
    try {
        parse_nvd_feed(kDataDir / "nvd_mini.json", {.skip_malformed = false});
        FAIL("expected schema-error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("schema-error") != std::string::npos);
        CHECK(std::string(e.what()).find("item 4") != std::string::npos);
    }
}

TEST_CASE("gzipped feeds parse identically") {
    auto plain = parse_nvd_feed(kDataDir / "nvd_mini.json");
    auto gz_path = temp_file("nvd_mini.json.gz");
    {
        std::ofstream out(gz_path, std::ios::binary);
        out << gzip_bytes(read_file_bytes(kDataDir / "nvd_mini.json"));
    }
    auto gz = parse_nvd_feed(gz_path);
    REQUIRE(gz.records.size() == plain.records.size());
    for (std::size_t i = 0; i < gz.records.size(); ++i) CHECK(gz.records[i].id == plain.records[i].id);
}

TEST_CASE("missing feed file raises io-error") {
    CHECK_THROWS_AS(parse_nvd_feed("does_not_exist.json"), DataError);
}

TEST_CASE("assigned-date csv parsing") {
    auto path = temp_file("assigned.csv");
    {
        std::ofstream out(path);
        out << "cve_id,assigned_date\n";
        out << "CVE-2019-0001,2019-11-02T10:00:00\n";
        out << "CVE-2019-0002,2019-01-03T09:00:00\n";
        out << "CVE-2019-0002,2019-01-01T09:00:00\n"; // duplicate, earlier wins
        out << "CVE-2019-0003,not-a-date\n";
        out << "garbage line without comma\n";
    }
    auto result = parse_assigned_dates(path);
    CHECK(result.by_id.size() == 2);
    CHECK(result.by_id.at(CveId{2019, 1}).to_rfc3339() == "2019-11-02T10:00:00Z");
    CHECK(result.by_id.at(CveId{2019, 2}).to_rfc3339() == "2019-01-01T09:00:00Z");
    CHECK(result.duplicate_rows == 1);
    CHECK(result.rejected_rows.size() == 2);
}

TEST_CASE("assigned-date csv header mismatch") {
    auto path = temp_file("assigned_bad_header.csv");
    {
        std::ofstream out(path);
        out << "id,date\nCVE-2019-0001,2019-11-02T10:00:00\n";
    }
    CHECK_THROWS_AS(parse_assigned_dates(path), DataError);
}

TEST_CASE("assigned-date fixture of 1000 rows maps 1000 entries") {
    auto path = temp_file("assigned_1000.csv");
    std::size_t written = 0; // line-count oracle
    {
        std::ofstream out(path);
        out << "cve_id,assigned_date\n";
        for (int i = 1; i <= 1000; ++i) {
            out << CveId{2019, i}.to_string() << ",2019-01-01T00:00:00\n";
            ++written;
        }
    }
    auto result = parse_assigned_dates(path);
    CHECK(result.by_id.size() == written);
}

TEST_CASE("build_snapshot merges, demotes, and infers") {
    auto feed = parse_nvd_feed(kDataDir / "nvd_mini.json");
    AssignedDates assigned;
    assigned.by_id[CveId{2019, 2}] = dt("2018-11-20T00:00:00Z");   // published record gains assignment
    assigned.by_id[CveId{2019, 12}] = dt("2019-12-01T00:00:00Z");  // in MITRE only: assigned-unpublished
    assigned.by_id[CveId{2019, 900}] = dt("2021-06-01T00:00:00Z"); // assigned after as_of: invisible

    DateTime as_of = end_of_day(day("2019-12-31"));
    auto built = build_snapshot(feed.records, assigned, as_of);
    const Snapshot& s = built.snapshot;

    const auto* merged = s.find(CveId{2019, 2});
    REQUIRE(merged);
    CHECK(merged->assigned_at == dt("2018-11-20T00:00:00Z"));
    CHECK(merged->published_at == dt("2019-01-08T20:29:00Z"));
    CHECK(merged->status == RecordStatus::Published);

    const auto* mitre_only = s.find(CveId{2019, 12});
    REQUIRE(mitre_only);
    CHECK(mitre_only->status == RecordStatus::AssignedUnpublished);

    CHECK(s.find(CveId{2019, 900}) == nullptr);

    // CVE-2019-0012 was published 2020-02-11, after as_of, with no MITRE row: dropped
    CHECK(s.find(CveId{2020, 12}) == nullptr);

    // serial gaps below max seen (12) become reserved-inferred
    const auto* gap = s.find(CveId{2019, 5});
    REQUIRE(gap);
    CHECK(gap->status == RecordStatus::ReservedInferred);
    CHECK(built.stats.reserved_inferred > 0);

    // rejected item kept (it consumed an ID) but flagged rejected
    const auto* rej = s.find(CveId{2019, 7});
    REQUIRE(rej);
    CHECK(rej->status == RecordStatus::Rejected);
}

TEST_CASE("as-of cut excludes records published afterwards") {
    std::vector<CveRecord> partials{published_only("CVE-2019-0001", "2020-01-02T00:00:00Z")};
    auto built = build_snapshot(partials, {}, end_of_day(day("2019-12-31")));
    CHECK(built.snapshot.size() == 0);
    CHECK(built.stats.dropped_future == 1);
}

TEST_CASE("build_snapshot is idempotent byte for byte") {
    auto feed = parse_nvd_feed(kDataDir / "nvd_mini.json");
    AssignedDates assigned;
    assigned.by_id[CveId{2019, 2}] = dt("2018-11-20T00:00:00Z");
    DateTime as_of = end_of_day(day("2020-12-31"));
    auto a = build_snapshot(feed.records, assigned, as_of);
    auto b = build_snapshot(feed.records, assigned, as_of);
    CHECK(serialize_snapshot(a.snapshot) == serialize_snapshot(b.snapshot));
    CHECK(snapshot_digest(a.snapshot) == snapshot_digest(b.snapshot));
}

TEST_CASE("snapshot jsonl round-trips byte for byte") {
    auto rec = published("CVE-2020-0002", "2020-01-05T00:00:00Z", "2020-02-01T00:00:00Z");
    rec.vendors = {"vendorb", "vendora"};
    normalize_tokens(rec.vendors);
    rec.severity = Severity::High;
    auto s = snap("2020-12-31", {rec, assigned_only("CVE-2020-0003", "2020-03-01T00:00:00Z")});

    std::string first = serialize_snapshot(s);
    Snapshot reread = parse_snapshot_jsonl(first);
    CHECK(serialize_snapshot(reread) == first);
    CHECK(reread.as_of() == s.as_of());
    REQUIRE(reread.find(CveId{2020, 2}));
    CHECK(reread.find(CveId{2020, 2})->vendors == std::vector<std::string>{"vendora", "vendorb"});
}

TEST_CASE("snapshot file io") {
    auto path = temp_file("snapshot_roundtrip.jsonl");
    auto s = snap("2020-12-31", {published("CVE-2020-0001", "2020-01-05T00:00:00Z", "2020-02-01T00:00:00Z")});
    write_snapshot(s, path);
    Snapshot reread = read_snapshot(path);
    CHECK(reread.size() == 1);
    CHECK(reread.as_of() == s.as_of());
}
