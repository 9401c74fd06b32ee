#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pbsearch/encoder.hpp"
#include "pbsearch/errors.hpp"
#include "pbsearch/eval.hpp"
#include "pbsearch/synth.hpp"
#include "pbsearch/tokenizer.hpp"

using namespace pbsearch;

namespace {

// plain hash-map reference: word tuples joined with '\x1f', PBS via encoder
eval::FpReport oracle_fp(const std::vector<std::string_view>& documents, uint32_t k, uint32_t a) {
    Alphabet alphabet(static_cast<int>(a));
    std::set<std::string> unique_tuples;
    std::map<std::string, std::set<std::string>> bucket; // pbs -> tuples
    for (std::string_view doc : documents) {
        auto tokens = tokenize(doc);
        std::vector<std::string> words;
        for (const Token& t : tokens)
            words.emplace_back(doc.substr(t.byte_start, t.byte_end - t.byte_start));
        if (words.size() < k) continue;
        for (size_t i = 0; i + k <= words.size(); ++i) {
            std::string tuple, pbs;
            for (size_t j = 0; j < k; ++j) {
                tuple += words[i + j];
                tuple.push_back('\x1f');
                pbs.push_back(encode_word(words[i + j], alphabet));
            }
            unique_tuples.insert(tuple);
            bucket[pbs].insert(std::move(tuple));
        }
    }
    uint64_t colliding = 0;
    for (const auto& [pbs, tuples] : bucket)
        if (tuples.size() >= 2) colliding += tuples.size();
    return {k, a, unique_tuples.size(), colliding};
}

} // namespace

TEST_CASE("engineered collision yields rate one") {
    // "cat" and "tac" share the code-point sum 312, so the two 2-word
    // strings encode identically
    std::vector<std::string_view> docs{"cat x", "tac x"};
    eval::FpReport r = eval::fp_rate(docs, 2, 12);
    CHECK(r.unique_strings == 2);
    CHECK(r.colliding_strings == 2);
    CHECK(r.fp_rate() == doctest::Approx(1.0));
}

TEST_CASE("a single window cannot collide") {
    std::vector<std::string_view> docs{"one two three"};
    eval::FpReport r = eval::fp_rate(docs, 3, 12);
    CHECK(r.unique_strings == 1);
    CHECK(r.colliding_strings == 0);
    CHECK(r.fp_rate() == doctest::Approx(0.0));
}

TEST_CASE("duplicate windows count once") {
    // the same 2-word string twice is one unique string, no collision
    std::vector<std::string_view> docs{"cat x cat x cat"};
    eval::FpReport r = eval::fp_rate(docs, 2, 12);
    CHECK(r.unique_strings == 2); // "cat x" and "x cat"
    // "cat x" vs "x cat": sums are the same pair swapped -> both encode 'A','A'
    CHECK(r.colliding_strings == 2);
}

TEST_CASE("alphabet of one collides everything") {
    std::vector<std::string_view> docs{"assorted different words in here"};
    eval::FpReport r = eval::fp_rate(docs, 2, 1);
    CHECK(r.unique_strings == 4);
    CHECK(r.colliding_strings == 4);
    CHECK(r.fp_rate() == doctest::Approx(1.0));
}

TEST_CASE("the published ratio arithmetic holds") {
    eval::FpReport r{12, 12, 9'266'370'827ull, 70'352'323ull};
    CHECK(r.fp_rate() == doctest::Approx(0.0076).epsilon(0.01));
}

TEST_CASE("windows never cross document boundaries") {
    // concatenated, "b c" would be a window; split, it must not be
    std::vector<std::string_view> split{"a b", "c d"};
    eval::FpReport r = eval::fp_rate(split, 2, 12);
    CHECK(r.unique_strings == 2); // "a b" and "c d" only

    std::vector<std::string_view> joined{"a b c d"};
    CHECK(eval::fp_rate(joined, 2, 12).unique_strings == 3);
}

TEST_CASE("too little text is a usage error") {
    CHECK_THROWS_AS(eval::fp_rate({"one two"}, 3, 12), UsageError);
    CHECK_THROWS_AS(eval::fp_rate({}, 2, 12), UsageError);
    CHECK_THROWS_AS(eval::fp_rate({"", ""}, 1, 12), UsageError);
}

TEST_CASE("census equals the brute-force oracle on random corpora") {
    std::mt19937_64 rng(909);
    const char* vocab[] = {"cat", "tac", "act", "dog", "god", "x", "y",
                           "alpha", "beta", "單", "字", "ab", "ba"};
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<std::string> storage;
        for (int d = 0; d < 3; ++d) {
            std::string doc;
            const size_t n = 30 + rng() % 120;
            for (size_t i = 0; i < n; ++i) {
                if (i) doc += " ";
                doc += vocab[rng() % std::size(vocab)];
            }
            storage.push_back(std::move(doc));
        }
        std::vector<std::string_view> docs(storage.begin(), storage.end());
        for (uint32_t k : {2u, 3u, 8u}) {
            for (uint32_t a : {1u, 8u, 12u}) {
                eval::FpReport got = eval::fp_rate(docs, k, a);
                eval::FpReport want = oracle_fp(docs, k, a);
                REQUIRE(got.unique_strings == want.unique_strings);
                REQUIRE(got.colliding_strings == want.colliding_strings);
            }
        }
    }
}

TEST_CASE("sweep covers the grid and renders as TSV") {
    std::string corpus = synth::english_corpus(60'000, 5);
    std::vector<std::string_view> docs{corpus};
    auto reports = eval::sweep(docs, {8, 10, 12}, {8, 12});
    REQUIRE(reports.size() == 6);

    // monotone non-increasing in k for fixed a
    std::map<uint32_t, std::vector<std::pair<uint32_t, double>>> by_a;
    for (const auto& r : reports) by_a[r.a].push_back({r.k, r.fp_rate()});
    for (auto& [a, rows] : by_a) {
        std::sort(rows.begin(), rows.end());
        for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].second <= rows[i - 1].second);
    }

    std::string tsv = eval::sweep_tsv(reports);
    CHECK(tsv.find("k\ta\tunique\tcolliding\tfp_rate") == 0);
    CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 7); // header + 6 rows
}

TEST_CASE("compression accounting") {
    eval::CompressionReport tiny = eval::compression_ratio({"cat"}, Alphabet(12));
    CHECK(tiny.raw_bytes == 3);
    CHECK(tiny.pbs_chars == 1);
    CHECK(tiny.raw_to_pbs() == doctest::Approx(3.0));
    CHECK(tiny.db_bytes > 0);

    // english prose lands in the published band even at a modest sample size
    std::string english = synth::english_corpus(1'200'000, 99);
    eval::CompressionReport en = eval::compression_ratio({english}, Alphabet(12));
    CHECK(en.raw_to_pbs() >= 4.0);
    CHECK(en.raw_to_pbs() <= 8.0);

    std::string chinese = synth::chinese_corpus(1'200'000, 99);
    eval::CompressionReport zh = eval::compression_ratio({chinese}, Alphabet(12));
    CHECK(zh.raw_to_pbs() >= 1.5);
    CHECK(zh.raw_to_pbs() <= 3.0);

    // the index file stays within a small factor of the bare sequence
    CHECK(en.db_to_pbs() <= 1.85);
    CHECK(en.db_to_pbs() >= 1.0);

    CHECK_THROWS_AS(eval::compression_ratio({}, Alphabet(12)), UsageError);
}
