#include <doctest.h>

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <regex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pbsearch/corpus_db.hpp"
#include "pbsearch/service.hpp"
#include "pbsearch/zipfile.hpp"

using namespace pbsearch;
using nlohmann::json;

namespace {

const std::string kPlant = "ACDEGHIKLNQR"; // 12 words, exactly the report threshold

CorpusDb make_db() {
    return CorpusDb::from_encoded(
        {
            {"Reference Zero", "https://refs.example/zero",
             std::string(10, 'N') + kPlant + std::string(8, 'Q'), ""},
            {"Reference One", "", std::string(15, 'E'), ""},
        },
        Alphabet(12));
}

std::string planted_query_fasta() {
    return ">essay-secret\nGGGG" + kPlant + "HHHH\n";
}

struct RunningServer {
    SearchService& svc;
    std::thread thread;
    int port = 0;

    explicit RunningServer(SearchService& service) : svc(service) {
        port = svc.bind_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { svc.listen_after_bind(); });
        for (int i = 0; i < 500 && !svc.is_running(); ++i)
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
        REQUIRE(svc.is_running());
    }
    ~RunningServer() {
        svc.stop();
        thread.join();
    }
};

json poll_job(httplib::Client& cli, const std::string& id) {
    for (int i = 0; i < 400; ++i) {
        auto res = cli.Get("/api/v1/jobs/" + id);
        REQUIRE(res);
        REQUIRE(res->status == 200);
        json status = json::parse(res->body);
        if (status.at("state") == "done" || status.at("state") == "failed") return status;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    FAIL("job never settled: ", id);
    return {};
}

} // namespace

TEST_CASE("search handler outcomes") {
    SearchService svc;

    SUBCASE("503 until a database is loaded") {
        auto out = svc.handle_search(planted_query_fasta());
        CHECK(out.status == 503);
        CHECK(json::parse(out.body).at("error").get<std::string>().find("database") !=
              std::string::npos);
        CHECK(svc.handle_info().status == 503);
        CHECK(!svc.has_db());
    }

    svc.set_db(make_db());
    REQUIRE(svc.has_db());

    SUBCASE("planted duplicate is found and positioned") {
        auto out = svc.handle_search(planted_query_fasta());
        REQUIRE(out.status == 200);
        json report = json::parse(out.body);
        CHECK(report.at("queryId") == "essay-secret");
        CHECK(report.at("queryWordCount") == 20);
        CHECK(report.at("longestCcw") == 12);
        CHECK(report.at("coveragePercent").get<double>() == doctest::Approx(60.0));
        REQUIRE(report.at("matches").size() == 1);
        const json& m = report.at("matches")[0];
        CHECK(m.at("queryStart") == 4);
        CHECK(m.at("queryEnd") == 16);
        CHECK(m.at("refDocId") == 0);
        CHECK(m.at("refTitle") == "Reference Zero");
        CHECK(m.at("refUrl") == "https://refs.example/zero");
        CHECK(m.at("refStart") == 10);
        CHECK(m.at("refEnd") == 22);
        CHECK(m.at("mismatchGaps").empty());
    }

    SUBCASE("clean query reports nothing") {
        auto out = svc.handle_search(">clean\nGGGGGGGGGGGGGGGG\n");
        REQUIRE(out.status == 200);
        json report = json::parse(out.body);
        CHECK(report.at("matches").empty());
        CHECK(report.at("coveragePercent").get<double>() == doctest::Approx(0.0));
    }

    SUBCASE("malformed FASTA is a client error") {
        auto out = svc.handle_search("no header line at all");
        CHECK(out.status == 400);
        CHECK(json::parse(out.body).at("error").get<std::string>().find("FASTA") !=
              std::string::npos);
    }

    SUBCASE("letters outside the alphabet are a client error") {
        auto out = svc.handle_search(">q\nACDB\n");
        CHECK(out.status == 400);
        CHECK(json::parse(out.body).at("error").get<std::string>().find("'B'") !=
              std::string::npos);
    }

    SUBCASE("info describes the loaded corpus") {
        auto out = svc.handle_info();
        REQUIRE(out.status == 200);
        json info = json::parse(out.body);
        CHECK(info.at("documentCount") == 2);
        CHECK(info.at("totalWords") == 45);
        CHECK(info.at("alphabetSize") == 12);
        CHECK(info.at("seedK") == 8);
        CHECK(info.at("minReport") == 12);
    }
}

TEST_CASE("body size limits answer 413") {
    SearchService::Config config;
    config.max_search_body = 64;
    config.max_zip_body = 128;
    SearchService svc(config);
    // the search limit fires before the missing-database check
    CHECK(svc.handle_search(std::string(65, 'A')).status == 413);
    CHECK(svc.handle_search(">q\nACDE\n").status == 503);
    CHECK(svc.handle_pairwise(std::string(129, 'A')).status == 413);
}

TEST_CASE("pairwise handler works without any database") {
    SearchService svc;
    const std::string seq = kPlant + "NLKIHGED"; // 20 words
    // no repeated 8-mer, or the bystander would match itself at a shift
    const std::string other = "QRQNQLQKQIQHQGQEQDQC";

    SUBCASE("rejects junk and single-document archives") {
        CHECK(svc.handle_pairwise("definitely not a zip").status == 400);
        auto out = svc.handle_pairwise(write_zip({{"only.fasta", ">one\n" + seq + "\n"}}));
        CHECK(out.status == 400);
        CHECK(json::parse(out.body).at("error").get<std::string>().find("two") !=
              std::string::npos);
    }

    SUBCASE("rejects an entry that is not FASTA") {
        auto out = svc.handle_pairwise(
            write_zip({{"a.fasta", ">a\n" + seq + "\n"}, {"b.txt", "plain prose"}}));
        CHECK(out.status == 400);
        CHECK(json::parse(out.body).at("error").get<std::string>().find("b.txt") !=
              std::string::npos);
    }

    SUBCASE("rejects an entry with letters outside the alphabet") {
        auto out = svc.handle_pairwise(
            write_zip({{"a.fasta", ">a\n" + seq + "\n"}, {"b.fasta", ">b\nACDZ\n"}}));
        CHECK(out.status == 400);
        CHECK(json::parse(out.body).at("error").get<std::string>().find("'Z'") !=
              std::string::npos);
    }

    SUBCASE("identical pair cross-reports, bystander stays clean") {
        std::string body = write_zip({
            {"a.fasta", ">Doc A\n" + seq + "\n"},
            {"b.fasta", ">\n" + seq + "\n"}, // no description: named by its file
            {"c.fasta", ">Doc C\n" + other + "\n"},
        });
        auto out = svc.handle_pairwise(body);
        REQUIRE(out.status == 200);
        json reports = json::parse(out.body);
        REQUIRE(reports.is_array());
        REQUIRE(reports.size() == 3);

        CHECK(reports[0].at("queryId") == "Doc A");
        CHECK(reports[1].at("queryId") == "b.fasta");
        CHECK(reports[2].at("queryId") == "Doc C");

        for (int i : {0, 1}) {
            const json& rep = reports[i];
            REQUIRE(rep.at("matches").size() == 1);
            CHECK(rep.at("coveragePercent").get<double>() == doctest::Approx(100.0));
            CHECK(rep.at("longestCcw") == 20);
            const json& m = rep.at("matches")[0];
            CHECK(m.at("queryStart") == 0);
            CHECK(m.at("queryEnd") == 20);
            CHECK(m.at("refDocId") == (i == 0 ? 1 : 0));
            CHECK(m.at("refTitle") == (i == 0 ? "b.fasta" : "Doc A"));
        }
        CHECK(reports[2].at("matches").empty());
        CHECK(reports[2].at("coveragePercent").get<double>() == doctest::Approx(0.0));
    }
}

TEST_CASE("http round trip matches the direct handlers") {
    std::ostringstream log;
    SearchService::Config config;
    config.log = &log;
    SearchService svc(config);
    svc.set_db(make_db());

    std::string sync_search = svc.handle_search(planted_query_fasta()).body;
    std::string sync_info = svc.handle_info().body;

    {
        RunningServer running(svc);
        httplib::Client cli("127.0.0.1", running.port);
        cli.set_connection_timeout(5, 0);

        auto search = cli.Post("/api/v1/search", planted_query_fasta(), "text/plain");
        REQUIRE(search);
        CHECK(search->status == 200);
        CHECK(json::parse(search->body) == json::parse(sync_search));

        auto info = cli.Get("/api/v1/info");
        REQUIRE(info);
        CHECK(info->status == 200);
        CHECK(json::parse(info->body) == json::parse(sync_info));

        const std::string seq = kPlant + "NLKIHGED";
        auto pairwise_res = cli.Post(
            "/api/v1/pairwise",
            write_zip({{"a.fasta", ">a\n" + seq + "\n"}, {"b.fasta", ">b\n" + seq + "\n"}}),
            "application/zip");
        REQUIRE(pairwise_res);
        CHECK(pairwise_res->status == 200);
        CHECK(json::parse(pairwise_res->body).size() == 2);

        auto bad = cli.Post("/api/v1/search", "garbage", "text/plain");
        REQUIRE(bad);
        CHECK(bad->status == 400);

        auto missing = cli.Get("/api/v1/nowhere");
        REQUIRE(missing);
        CHECK(missing->status == 404);
    }

    // the access log carries method, path, and status — and nothing else
    std::istringstream lines(log.str());
    std::string line;
    size_t count = 0;
    const std::regex shape(R"(^(GET|POST) /[^ ]+ \d{3}$)");
    while (std::getline(lines, line)) {
        CHECK_MESSAGE(std::regex_match(line, shape), "unexpected log line: ", line);
        ++count;
    }
    CHECK(count == 5);
    CHECK(log.str().find("essay") == std::string::npos);
    CHECK(log.str().find(kPlant) == std::string::npos);
    CHECK(log.str().find("garbage") == std::string::npos);
}

TEST_CASE("async mode queues jobs and serves results") {
    SearchService::Config config;
    config.async = true;
    SearchService svc(config);
    svc.set_db(make_db());

    std::string sync_search = svc.handle_search(planted_query_fasta()).body;

    RunningServer running(svc);
    httplib::Client cli("127.0.0.1", running.port);
    cli.set_connection_timeout(5, 0);

    SUBCASE("search lands at 202 and settles to the sync result") {
        auto res = cli.Post("/api/v1/search", planted_query_fasta(), "text/plain");
        REQUIRE(res);
        REQUIRE(res->status == 202);
        const std::string id = json::parse(res->body).at("jobId");
        json status = poll_job(cli, id);
        CHECK(status.at("state") == "done");
        CHECK(status.at("result") == json::parse(sync_search));
    }

    SUBCASE("a bad body settles to a failed job, result stays empty") {
        auto res = cli.Post("/api/v1/search", "not fasta", "text/plain");
        REQUIRE(res);
        REQUIRE(res->status == 202);
        const std::string id = json::parse(res->body).at("jobId");
        json status = poll_job(cli, id);
        CHECK(status.at("state") == "failed");
        CHECK(status.at("status") == 400);
        CHECK(status.at("error").get<std::string>().find("FASTA") != std::string::npos);
        CHECK(!status.contains("result"));
    }

    SUBCASE("pairwise also queues") {
        const std::string seq = kPlant + "NLKIHGED";
        auto res = cli.Post(
            "/api/v1/pairwise",
            write_zip({{"a.fasta", ">a\n" + seq + "\n"}, {"b.fasta", ">b\n" + seq + "\n"}}),
            "application/zip");
        REQUIRE(res);
        REQUIRE(res->status == 202);
        json status = poll_job(cli, json::parse(res->body).at("jobId"));
        CHECK(status.at("state") == "done");
        CHECK(status.at("result").is_array());
    }

    SUBCASE("unknown jobs are 404") {
        auto res = cli.Get("/api/v1/jobs/job-999");
        REQUIRE(res);
        CHECK(res->status == 404);
    }
}
