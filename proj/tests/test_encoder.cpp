#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "pbsearch/alphabet.hpp"
#include "pbsearch/encoder.hpp"
#include "pbsearch/errors.hpp"

using namespace pbsearch;

TEST_CASE("alphabet character sets") {
    CHECK(Alphabet(12).chars() == "ACDEGHIKLNQR");
    CHECK(Alphabet(16).chars() == "ACDEGHIKLNQRSTVW");
    CHECK(Alphabet(1).chars() == "A");
    CHECK(Alphabet(8).chars() == "ACDEGHIK");
    // extension letters merge in and the set stays sorted
    CHECK(Alphabet(17).chars() == "ABCDEGHIKLNQRSTVW");
    CHECK(Alphabet(26).chars() == "ABCDEFGHIJKLMNOPQRSTUVWXYZ");

    for (int a : {1, 8, 12, 16, 17, 26}) {
        Alphabet al(a);
        std::set<char> seen;
        for (int r = 0; r < al.size(); ++r) {
            CHECK(al.code_of(al.at(r)) == r);
            seen.insert(al.at(r));
            if (r) CHECK(al.at(r - 1) < al.at(r));
        }
        CHECK(static_cast<int>(seen.size()) == a);
    }
    CHECK(Alphabet(12).code_of('B') == -1);
    CHECK_FALSE(Alphabet(12).contains('$'));
    CHECK_THROWS_AS(Alphabet(0), std::invalid_argument);
    CHECK_THROWS_AS(Alphabet(27), std::invalid_argument);
}

TEST_CASE("word encoding by code-point sum") {
    Alphabet a12(12);
    CHECK(codepoint_sum("cat") == 312); // 99 + 97 + 116
    CHECK(encode_word("cat", a12) == 'A');
    CHECK(codepoint_sum("單") == 21934);
    CHECK(encode_word("單", a12) == 'Q'); // 21934 mod 12 = 10

    Alphabet a1(1);
    for (auto w : {"cat", "dog", "單", "anything-at-all"}) CHECK(encode_word(w, a1) == 'A');

    // deterministic and context free
    CHECK(encode_word("cat", a12) == encode_word("cat", a12));
}

TEST_CASE("document encoding carries the offset map") {
    Alphabet a12(12);
    PbsDocument doc = encode_document("q", "The cat sat", a12);
    CHECK(doc.id == "q");
    CHECK(doc.pbs == "CAG"); // sums 289, 312, 328 -> remainders 1, 0, 4
    REQUIRE(doc.map.size() == 3);
    CHECK(doc.map[0].byte_start == 0);
    CHECK(doc.map[0].byte_end == 3);
    CHECK(doc.map[1].byte_start == 4);
    CHECK(doc.map[1].byte_end == 7);
    CHECK(doc.map[2].byte_start == 8);
    CHECK(doc.map[2].byte_end == 11);
    for (size_t i = 0; i < doc.map.size(); ++i) CHECK(doc.map[i].word_index == i);

    CHECK(encode_document("q", "", a12).pbs.empty());
    CHECK_THROWS_AS(encode_document("q", "bad \xFF utf8", a12), EncodingError);
}

TEST_CASE("encoding is many-to-one") {
    // every character of the 12-letter alphabet is hit by at least two
    // distinct 3-letter ascii words
    Alphabet a12(12);
    std::vector<int> hits(12, 0);
    for (char c1 = 'a'; c1 <= 'z'; ++c1)
        for (char c2 = 'a'; c2 <= 'z'; ++c2) {
            std::string w{c1, c2, 'a'};
            hits[static_cast<size_t>(a12.code_of(encode_word(w, a12)))]++;
        }
    for (int h : hits) CHECK(h >= 2);

    // pigeonhole over 13 distinct single-char words
    std::set<char> codes;
    bool collided = false;
    for (char c = 'a'; c < 'a' + 13; ++c)
        collided |= !codes.insert(encode_word(std::string(1, c), a12)).second;
    CHECK(collided);
}

TEST_CASE("fasta writing") {
    Alphabet a12(12);
    PbsDocument doc{"d1", "CAG", {}};
    CHECK(write_fasta(doc, "d1") == ">d1\nCAG\n");
    CHECK(write_fasta(PbsDocument{"d1", "", {}}, "d1") == ">d1\n");

    PbsDocument long_doc{"x", std::string(200, 'A'), {}};
    std::string fasta = write_fasta(long_doc, "x");
    // header + 80 + 80 + 40
    CHECK(fasta == ">x\n" + std::string(80, 'A') + "\n" + std::string(80, 'A') + "\n" +
                       std::string(40, 'A') + "\n");

    CHECK_THROWS_AS(write_fasta(doc, "two\nlines"), std::invalid_argument);
}

TEST_CASE("fasta parsing") {
    FastaRecord rec = parse_fasta(">d1\nCAG\n");
    CHECK(rec.description == "d1");
    CHECK(rec.sequence == "CAG");

    // wrapped lines and stray whitespace collapse into one sequence
    CHECK(parse_fasta(">x\nAC GC\nTT\n").sequence == "ACGCTT");
    CHECK(parse_fasta(">x\r\nACGT\r\n").sequence == "ACGT");
    CHECK(parse_fasta(">only-header\n").sequence.empty());

    CHECK_THROWS_AS(parse_fasta(""), ValidationError);
    CHECK_THROWS_AS(parse_fasta("no header\n"), ValidationError);
    CHECK_THROWS_AS(parse_fasta(">a\nAC\n>b\nGG\n"), ValidationError); // two records

    // write -> parse round trip
    PbsDocument doc{"id", std::string(333, 'Q'), {}};
    FastaRecord back = parse_fasta(write_fasta(doc, "some description"));
    CHECK(back.description == "some description");
    CHECK(back.sequence == doc.pbs);
}

TEST_CASE("offset map sidecar round trip") {
    OffsetMap map;
    map.source_sha256_hex = "aa11";
    map.stripped_lines = {3, 17, 18};
    map.rows = {{0, 0, 3, TokenKind::WesternWord},
                {1, 4, 7, TokenKind::WesternWord},
                {2, 8, 11, TokenKind::EasternChar}};

    std::string text = write_offset_map(map);
    OffsetMap back = parse_offset_map(text);
    CHECK(back.source_sha256_hex == map.source_sha256_hex);
    CHECK(back.stripped_lines == map.stripped_lines);
    REQUIRE(back.rows.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(back.rows[i].word_index == map.rows[i].word_index);
        CHECK(back.rows[i].byte_start == map.rows[i].byte_start);
        CHECK(back.rows[i].byte_end == map.rows[i].byte_end);
    }

    // headers are optional
    OffsetMap bare = parse_offset_map("0\t0\t3\n1\t4\t7\n");
    CHECK(bare.source_sha256_hex.empty());
    CHECK(bare.stripped_lines.empty());
    CHECK(bare.rows.size() == 2);

    CHECK_THROWS_AS(parse_offset_map("0\t0\n"), ValidationError);     // short row
    CHECK_THROWS_AS(parse_offset_map("a\tb\tc\n"), ValidationError);  // non-numeric
    CHECK_THROWS_AS(parse_offset_map("1\t0\t3\n"), ValidationError);  // index gap
    CHECK_THROWS_AS(parse_offset_map("0\t5\t3\n"), ValidationError);  // inverted span
}
