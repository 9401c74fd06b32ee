#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace pbsearch {

enum class TokenKind : uint8_t {
    WesternWord,
    EasternChar,
};

/// One encodable unit of the source text. Byte offsets are half-open and
/// index into the original UTF-8 buffer.
struct Token {
    uint64_t word_index = 0;
    size_t byte_start = 0;
    size_t byte_end = 0;
    TokenKind kind = TokenKind::WesternWord;

    bool operator==(const Token&) const = default;
};

/// Splits UTF-8 text into words. Code points below 1000 are western-word
/// constituents unless they are one of the delimiters blank, tab, CR, LF,
/// '+', '&'; maximal runs of them form one token. Every code point at or
/// above 1000 stands alone as an eastern-char token, except Unicode spaces
/// (U+1680, U+2000.., U+3000), which delimit like a blank.
///
/// Throws EncodingError on malformed UTF-8.
std::vector<Token> tokenize(std::string_view text);

namespace unicode {

/// Decodes the code point starting at `pos`, advancing `pos` past it.
/// Rejects overlong forms, surrogates and values past U+10FFFF.
/// Throws EncodingError on malformed input.
char32_t decode(std::string_view text, size_t& pos);

/// True for the delimiter set described on tokenize().
bool is_delimiter(char32_t cp);

/// Number of code points in valid UTF-8 (counts non-continuation bytes, so
/// it degrades gracefully on damaged input).
size_t count_codepoints(std::string_view text);

} // namespace unicode

} // namespace pbsearch
