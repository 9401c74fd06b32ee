#include <doctest.h>

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pbsearch/errors.hpp"
#include "pbsearch/fm_index.hpp"

using namespace pbsearch;

namespace {

std::vector<uint64_t> naive_occurrences(std::string_view text, std::string_view pattern) {
    std::vector<uint64_t> out;
    if (pattern.empty()) {
        for (size_t i = 0; i <= text.size(); ++i) out.push_back(i);
        return out;
    }
    for (size_t pos = text.find(pattern); pos != std::string_view::npos;
         pos = text.find(pattern, pos + 1))
        out.push_back(pos);
    return out;
}

std::string random_text(std::mt19937_64& rng, const Alphabet& alphabet, size_t max_len) {
    std::string text(rng() % (max_len + 1), 'A');
    for (auto& c : text) c = alphabet.at(static_cast<int>(rng() % alphabet.size()));
    return text;
}

} // namespace

TEST_CASE("worked example: ACAC") {
    Alphabet a12(12);
    FmIndex idx = FmIndex::build("ACAC", a12);
    CHECK(idx.text_length() == 4);
    CHECK(idx.row_count() == 5);

    // suffix array [4,2,0,3,1] -> bwt "CC$AA"
    std::string bwt;
    for (uint64_t r = 0; r < idx.row_count(); ++r) bwt.push_back(idx.bwt_char(r));
    CHECK(bwt == "CC$AA");

    CHECK(idx.c_start('$') == 0);
    CHECK(idx.c_start('A') == 1);
    CHECK(idx.c_start('C') == 3);

    CHECK(idx.backward_search("ACAC").count() == 1);
    CHECK(idx.backward_search("AC").count() == 2);
    CHECK(idx.backward_search("CA").count() == 1);
    CHECK(idx.backward_search("CC").empty());
    CHECK(idx.locate(idx.backward_search("AC")) == std::vector<uint64_t>{0, 2});
    CHECK(idx.extract_text() == "ACAC");

    // exhaustive patterns of length <= 4
    const std::string chars = "ACDE";
    std::vector<std::string> patterns{""};
    for (int len = 1; len <= 4; ++len) {
        std::vector<std::string> next;
        for (const auto& p : patterns)
            if (p.size() == static_cast<size_t>(len - 1))
                for (char c : chars) next.push_back(p + c);
        for (auto& p : next) patterns.push_back(std::move(p));
    }
    for (const auto& p : patterns) {
        auto want = naive_occurrences("ACAC", p);
        CHECK(idx.backward_search(p).count() == want.size());
        CHECK(idx.locate(idx.backward_search(p)) == want);
    }
}

TEST_CASE("worked example: seed reference") {
    FmIndex idx = FmIndex::build("EDNGQDRGDQDRN", Alphabet(12));

    SaRange one = idx.backward_search("DNGQDRGD");
    CHECK(one.count() == 1);
    CHECK(idx.locate(one) == std::vector<uint64_t>{1});

    SaRange d = idx.backward_search("D");
    CHECK(d.count() == 4);
    CHECK(idx.locate(d) == std::vector<uint64_t>{1, 5, 8, 10});

    // empty pattern matches everywhere, sentinel row included
    CHECK(idx.backward_search("").count() == idx.row_count());

    // characters outside the alphabet give the empty range, not an error
    CHECK(idx.backward_search("DNB").empty());
    CHECK(idx.backward_search("$").empty());
}

TEST_CASE("empty text") {
    FmIndex idx = FmIndex::build("", Alphabet(12));
    CHECK(idx.text_length() == 0);
    CHECK(idx.row_count() == 1);
    CHECK(idx.bwt_char(0) == '$');
    CHECK(idx.backward_search("A").empty());
    CHECK(idx.backward_search("").count() == 1);
    CHECK(idx.extract_text().empty());
    CHECK(idx.locate(idx.backward_search("A")).empty());
}

TEST_CASE("illegal character in the text is rejected") {
    CHECK_THROWS_AS(FmIndex::build("ACB", Alphabet(12)), ValidationError);
    CHECK_THROWS_AS(FmIndex::build("AC$", Alphabet(12)), ValidationError);
    CHECK_THROWS_AS(FmIndex::build(std::string("AC\0AC", 5), Alphabet(12)), ValidationError);
}

TEST_CASE("random texts match the naive scanner") {
    Alphabet a12(12);
    std::mt19937_64 rng(1234);
    // small sampling rates force checkpoint and mark-walk code paths
    const FmIndex::Config configs[] = {{128, 32}, {4, 4}, {8, 2}, {1, 1}, {256, 64}};
    for (int trial = 0; trial < 200; ++trial) {
        const std::string text = random_text(rng, a12, 400);
        FmIndex idx = FmIndex::build(text, a12, configs[trial % 5]);
        CHECK(idx.extract_text() == text);
        for (int q = 0; q < 25; ++q) {
            const size_t len = 1 + rng() % 20;
            std::string pattern;
            if (!text.empty() && rng() % 2 == 0 && text.size() >= len) {
                const size_t at = rng() % (text.size() - len + 1);
                pattern = text.substr(at, len); // guaranteed present
            } else {
                pattern = random_text(rng, a12, len);
            }
            auto want = naive_occurrences(text, pattern);
            auto range = idx.backward_search(pattern);
            REQUIRE(range.count() == want.size());
            REQUIRE(idx.locate(range) == want);
        }
    }
}

TEST_CASE("rank agrees with a full prefix count") {
    Alphabet a12(12);
    std::mt19937_64 rng(99);
    const std::string text = random_text(rng, a12, 1000);
    FmIndex idx = FmIndex::build(text, a12, {16, 8});
    std::string bwt;
    for (uint64_t r = 0; r < idx.row_count(); ++r) bwt.push_back(idx.bwt_char(r));
    for (int probe = 0; probe < 500; ++probe) {
        const uint64_t pos = rng() % (idx.row_count() + 1);
        const char c = a12.at(static_cast<int>(rng() % 12));
        CHECK(idx.rank(c, pos) ==
              static_cast<uint64_t>(std::count(bwt.begin(), bwt.begin() + pos, c)));
    }
}

TEST_CASE("backward search narrows monotonically") {
    Alphabet a12(12);
    std::mt19937_64 rng(5);
    const std::string text = random_text(rng, a12, 500);
    FmIndex idx = FmIndex::build(text, a12);
    for (int q = 0; q < 100; ++q) {
        const std::string pattern = random_text(rng, a12, 10);
        // prepending a character never inflates the count
        for (size_t cut = 0; cut + 1 <= pattern.size(); ++cut)
            CHECK(idx.backward_search(pattern.substr(cut)).count() <=
                  idx.backward_search(pattern.substr(cut + 1)).count());
    }
}

TEST_CASE("serialization round trip") {
    Alphabet a12(12);
    std::mt19937_64 rng(31337);
    const std::string text = random_text(rng, a12, 3000);
    FmIndex idx = FmIndex::build(text, a12, {32, 8});

    std::ostringstream out;
    idx.save(out);
    std::istringstream in(out.str());
    FmIndex back = FmIndex::load(in);

    CHECK(back.text_length() == idx.text_length());
    CHECK(back.config().occ_rate == 32);
    CHECK(back.config().sa_rate == 8);
    CHECK(back.alphabet().chars() == a12.chars());
    CHECK(back.extract_text() == text);
    for (int q = 0; q < 200; ++q) {
        const std::string pattern = random_text(rng, a12, 12);
        auto a = idx.backward_search(pattern);
        auto b = back.backward_search(pattern);
        REQUIRE(a == b);
        REQUIRE(idx.locate(a) == back.locate(b));
    }
}

TEST_CASE("load failures are classified") {
    FmIndex idx = FmIndex::build("ACAC", Alphabet(12));
    std::ostringstream out;
    idx.save(out);
    const std::string bytes = out.str();

    auto load_kind = [](std::string data) {
        std::istringstream in(std::move(data));
        try {
            FmIndex::load(in);
            return std::optional<LoadError::Kind>{};
        } catch (const LoadError& e) {
            return std::optional<LoadError::Kind>{e.kind};
        }
    };

    CHECK(load_kind("") == LoadError::Kind::Truncated);
    CHECK(load_kind(bytes.substr(0, 2)) == LoadError::Kind::Truncated);
    CHECK(load_kind(bytes.substr(0, bytes.size() - 1)) == LoadError::Kind::Truncated);
    CHECK(load_kind(bytes.substr(0, bytes.size() / 2)) == LoadError::Kind::Truncated);

    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK(load_kind(bad_magic) == LoadError::Kind::BadMagic);

    std::string bad_version = bytes;
    bad_version[4] = 9;
    CHECK(load_kind(bad_version) == LoadError::Kind::BadVersion);

    // flipping one bwt byte shows up no later than the checksum trailer
    std::string corrupt = bytes;
    corrupt[corrupt.size() - 12] ^= 0x5A;
    auto kind = load_kind(corrupt);
    REQUIRE(kind.has_value());
    CHECK((*kind == LoadError::Kind::BadChecksum || *kind == LoadError::Kind::BadSection));

    std::string bad_crc = bytes;
    bad_crc[bad_crc.size() - 1] ^= 0xFF;
    CHECK(load_kind(bad_crc) == LoadError::Kind::BadChecksum);

    // untouched bytes still load
    CHECK_FALSE(load_kind(bytes).has_value());
}
