#include "pbsearch/tokenizer.hpp"

#include <string>

#include "pbsearch/errors.hpp"

namespace pbsearch {

namespace unicode {

namespace {

[[noreturn]] void bad_utf8(size_t pos) {
    throw EncodingError("invalid UTF-8 at byte offset " + std::to_string(pos));
}

} // namespace

char32_t decode(std::string_view text, size_t& pos) {
    const size_t start = pos;
    const auto byte = [&](size_t i) { return static_cast<unsigned char>(text[i]); };

    unsigned char b0 = byte(pos++);
    if (b0 < 0x80) {
        return b0;
    }

    int extra;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        cp = b0 & 0x07;
    } else {
        bad_utf8(start);
    }

    if (pos + static_cast<size_t>(extra) > text.size()) {
        bad_utf8(start);
    }
    for (int i = 0; i < extra; ++i) {
        unsigned char b = byte(pos);
        if ((b & 0xC0) != 0x80) {
            bad_utf8(start);
        }
        cp = (cp << 6) | (b & 0x3F);
        ++pos;
    }

    static constexpr char32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        bad_utf8(start);
    }
    return cp;
}

bool is_delimiter(char32_t cp) {
    switch (cp) {
    case U' ':
    case U'\t':
    case U'\r':
    case U'\n':
    case U'+':
    case U'&':
        return true;
    default:
        break;
    }
    // Unicode spaces at or above the western/eastern threshold cannot carry
    // word content, so they delimit instead of becoming eastern tokens.
    if (cp < 1000) {
        return false;
    }
    return cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) || cp == 0x2028 || cp == 0x2029 ||
           cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

size_t count_codepoints(std::string_view text) {
    size_t n = 0;
    for (char c : text) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++n;
        }
    }
    return n;
}

} // namespace unicode

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    size_t pos = 0;
    size_t word_start = 0;
    bool in_word = false;

    const auto flush_word = [&](size_t end) {
        if (in_word) {
            tokens.push_back(Token{tokens.size(), word_start, end, TokenKind::WesternWord});
            in_word = false;
        }
    };

    while (pos < text.size()) {
        const size_t cp_start = pos;
        const char32_t cp = unicode::decode(text, pos);

        if (unicode::is_delimiter(cp)) {
            flush_word(cp_start);
        } else if (cp >= 1000) {
            flush_word(cp_start);
            tokens.push_back(Token{tokens.size(), cp_start, pos, TokenKind::EasternChar});
        } else {
            if (!in_word) {
                word_start = cp_start;
                in_word = true;
            }
        }
    }
    flush_word(text.size());
    return tokens;
}

} // namespace pbsearch
