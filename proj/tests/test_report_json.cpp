#include <doctest.h>

#include <json.hpp>

#include <string>
#include <vector>

#include "pbsearch/corpus_db.hpp"
#include "pbsearch/detector.hpp"
#include "pbsearch/errors.hpp"
#include "pbsearch/report_json.hpp"

using namespace pbsearch;

namespace {

PlagiarismReport sample_report() {
    PlagiarismReport report;
    report.query_id = "query-7";
    report.query_word_count = 50;
    report.longest_ccw = 13;
    report.coverage_percent = 62.5;
    MatchRecord first;
    first.query_start = 3;
    first.query_end = 21;
    first.ref_doc_id = 0;
    first.ref_start = 10;
    first.ref_end = 28;
    first.matched_words = 15;
    first.gaps = {{8, 3}};
    MatchRecord second;
    second.query_start = 30;
    second.query_end = 42;
    second.ref_doc_id = 1;
    second.ref_start = 0;
    second.ref_end = 12;
    second.matched_words = 12;
    report.matches = {first, second};
    return report;
}

} // namespace

TEST_CASE("to_meta joins registry identity") {
    CorpusDb db = CorpusDb::ingest(
        {
            {"Alpha Title", "https://example.org/alpha", "one two three four five six", ""},
            {"Beta Title", "", "seven eight nine ten eleven twelve", ""},
        },
        Alphabet(12));
    ReportMeta meta = to_meta(sample_report(), db);

    CHECK(meta.query_id == "query-7");
    CHECK(meta.query_word_count == 50);
    CHECK(meta.longest_ccw == 13);
    CHECK(meta.coverage_percent == doctest::Approx(62.5));
    REQUIRE(meta.matches.size() == 2);

    const MatchMeta& a = meta.matches[0];
    CHECK(a.query_start == 3);
    CHECK(a.query_end == 21);
    CHECK(a.ref_doc_id == 0);
    CHECK(a.ref_title == "Alpha Title");
    CHECK(a.ref_url == "https://example.org/alpha");
    CHECK(a.ref_start == 10);
    CHECK(a.ref_end == 28);
    CHECK(a.mismatch_gaps == std::vector<uint32_t>{3});
    CHECK(a.gap_offsets == std::vector<uint64_t>{8});

    const MatchMeta& b = meta.matches[1];
    CHECK(b.ref_title == "Beta Title");
    CHECK(b.ref_url == "");
    CHECK(b.mismatch_gaps.empty());
    CHECK(b.gap_offsets.empty());
}

TEST_CASE("to_meta pairwise flavor uses document ids") {
    std::vector<PbsDocument> docs{{"paperA", "AAAA", {}}, {"paperB", "CCCC", {}}};
    ReportMeta meta = to_meta(sample_report(), docs);
    REQUIRE(meta.matches.size() == 2);
    CHECK(meta.matches[0].ref_title == "paperA");
    CHECK(meta.matches[1].ref_title == "paperB");
    CHECK(meta.matches[0].ref_url == "");
    CHECK(meta.matches[1].ref_url == "");
}

TEST_CASE("json round trip preserves every field") {
    std::vector<PbsDocument> docs{{"paperA", "AAAA", {}}, {"paperB", "CCCC", {}}};
    ReportMeta meta = to_meta(sample_report(), docs);

    std::string text = meta_to_json(meta);
    ReportMeta back = meta_from_json(text);
    CHECK(back == meta);

    // compact output parses identically
    CHECK(meta_from_json(meta_to_json(meta, -1)) == meta);
}

TEST_CASE("json schema uses the documented key names") {
    std::vector<PbsDocument> docs{{"paperA", "AAAA", {}}, {"paperB", "CCCC", {}}};
    nlohmann::json value = nlohmann::json::parse(meta_to_json(to_meta(sample_report(), docs)));

    for (const char* key :
         {"queryId", "queryWordCount", "longestCcw", "coveragePercent", "matches"})
        CHECK(value.contains(key));
    CHECK(value["matches"].is_array());
    REQUIRE(value["matches"].size() == 2);
    for (const char* key : {"queryStart", "queryEnd", "refDocId", "refTitle", "refUrl",
                            "refStart", "refEnd", "mismatchGaps", "gapOffsets"})
        CHECK(value["matches"][0].contains(key));
    CHECK(value["matches"][0]["mismatchGaps"] == nlohmann::json::array({3}));
    CHECK(value["matches"][0]["gapOffsets"] == nlohmann::json::array({8}));
    CHECK(value["matches"][1]["mismatchGaps"].empty());
}

TEST_CASE("empty report serializes cleanly") {
    ReportMeta meta;
    meta.query_id = "nothing-found";
    meta.query_word_count = 9;
    ReportMeta back = meta_from_json(meta_to_json(meta));
    CHECK(back == meta);
    CHECK(back.matches.empty());
    CHECK(back.coverage_percent == doctest::Approx(0.0));
}

TEST_CASE("gapOffsets is optional when parsing") {
    std::string text = R"({
        "queryId": "q", "queryWordCount": 20, "longestCcw": 12, "coveragePercent": 60.0,
        "matches": [{
            "queryStart": 0, "queryEnd": 12, "refDocId": 0, "refTitle": "t", "refUrl": "",
            "refStart": 5, "refEnd": 17, "mismatchGaps": [2]
        }]
    })";
    ReportMeta meta = meta_from_json(text);
    REQUIRE(meta.matches.size() == 1);
    CHECK(meta.matches[0].mismatch_gaps == std::vector<uint32_t>{2});
    CHECK(meta.matches[0].gap_offsets.empty());
}

TEST_CASE("parser rejects schema violations") {
    auto base = []() {
        return nlohmann::json{
            {"queryId", "q"},
            {"queryWordCount", 20},
            {"longestCcw", 12},
            {"coveragePercent", 60.0},
            {"matches",
             nlohmann::json::array({{{"queryStart", 0},
                                     {"queryEnd", 12},
                                     {"refDocId", 0},
                                     {"refTitle", "t"},
                                     {"refUrl", ""},
                                     {"refStart", 5},
                                     {"refEnd", 17},
                                     {"mismatchGaps", nlohmann::json::array({2})},
                                     {"gapOffsets", nlohmann::json::array({4})}}})},
        };
    };
    CHECK_NOTHROW(meta_from_json(base().dump()));

    CHECK_THROWS_AS(meta_from_json("not json at all {"), ValidationError);
    CHECK_THROWS_AS(meta_from_json("[1,2,3]"), ValidationError);
    CHECK_THROWS_AS(meta_from_json("\"just a string\""), ValidationError);

    auto broken = base();
    broken.erase("queryId");
    CHECK_THROWS_AS(meta_from_json(broken.dump()), ValidationError);

    broken = base();
    broken["queryWordCount"] = "twenty";
    CHECK_THROWS_AS(meta_from_json(broken.dump()), ValidationError);

    broken = base();
    broken["matches"] = 5;
    CHECK_THROWS_AS(meta_from_json(broken.dump()), ValidationError);

    broken = base();
    broken["matches"][0].erase("refTitle");
    CHECK_THROWS_AS(meta_from_json(broken.dump()), ValidationError);

    broken = base();
    broken["matches"][0]["mismatchGaps"] = "none";
    CHECK_THROWS_AS(meta_from_json(broken.dump()), ValidationError);

    // inverted word ranges
    broken = base();
    broken["matches"][0]["queryEnd"] = 0;
    broken["matches"][0]["queryStart"] = 12;
    CHECK_THROWS_AS(meta_from_json(broken.dump()), ValidationError);

    broken = base();
    broken["matches"][0]["refEnd"] = 1;
    CHECK_THROWS_AS(meta_from_json(broken.dump()), ValidationError);

    // parallel arrays must agree when both present
    broken = base();
    broken["matches"][0]["gapOffsets"] = nlohmann::json::array({1, 2});
    CHECK_THROWS_AS(meta_from_json(broken.dump()), ValidationError);
}

TEST_CASE("report lists round trip") {
    std::vector<PbsDocument> docs{{"paperA", "AAAA", {}}, {"paperB", "CCCC", {}}};
    ReportMeta one = to_meta(sample_report(), docs);
    ReportMeta two;
    two.query_id = "empty";
    two.query_word_count = 4;

    std::string text = meta_list_to_json({one, two});
    auto back = meta_list_from_json(text);
    REQUIRE(back.size() == 2);
    CHECK(back[0] == one);
    CHECK(back[1] == two);

    CHECK(meta_list_from_json("[]").empty());
    CHECK_THROWS_AS(meta_list_from_json("{}"), ValidationError);
    CHECK_THROWS_AS(meta_list_from_json("[{\"queryId\": 3}]"), ValidationError);
}
