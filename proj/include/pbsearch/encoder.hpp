#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pbsearch/alphabet.hpp"
#include "pbsearch/tokenizer.hpp"

namespace pbsearch {

/// A document after degenerate encoding: one alphabet character per source
/// word, plus the word-index -> byte-range map that stays on the client.
struct PbsDocument {
    std::string id;
    std::string pbs;
    std::vector<Token> map;
};

/// Code-point sum of a word, the quantity the encoder reduces modulo the
/// alphabet size. Throws EncodingError on malformed UTF-8.
uint64_t codepoint_sum(std::string_view word);

/// Irreversibly encodes one word to a single PBS character:
/// chars[ codepoint_sum(word) mod a ].
char encode_word(std::string_view word, const Alphabet& alphabet);

/// Tokenizes and encodes a whole document. pbs[i] is the encoding of token i
/// and map[i] carries that token's byte span.
PbsDocument encode_document(std::string_view id, std::string_view text, const Alphabet& alphabet);

/// FASTA rendering: ">" + description, then the sequence wrapped at `width`
/// columns, LF line endings. The description must not contain line breaks.
std::string write_fasta(const PbsDocument& doc, std::string_view description, size_t width = 80);

/// Parses a single-record FASTA back into (description, sequence). Sequence
/// line whitespace is dropped; characters are not validated here.
/// Throws ValidationError when the text is not one well-formed record.
struct FastaRecord {
    std::string description;
    std::string sequence;
};
FastaRecord parse_fasta(std::string_view text);

/// Offset-map sidecar: optional "#key<TAB>value" header lines, then one row
/// per token: wordIndex<TAB>byteStart<TAB>byteEnd. Never uploaded.
struct OffsetMap {
    std::string source_sha256_hex;          // empty when absent
    std::vector<uint64_t> stripped_lines;   // reference lines removed before encoding
    std::vector<Token> rows;
};

std::string write_offset_map(const OffsetMap& map);
OffsetMap parse_offset_map(std::string_view text);

} // namespace pbsearch
