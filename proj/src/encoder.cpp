#include "pbsearch/encoder.hpp"

#include <charconv>
#include <stdexcept>

#include "pbsearch/errors.hpp"

namespace pbsearch {

uint64_t codepoint_sum(std::string_view word) {
    uint64_t sum = 0;
    size_t pos = 0;
    while (pos < word.size()) {
        sum += unicode::decode(word, pos);
    }
    return sum;
}

char encode_word(std::string_view word, const Alphabet& alphabet) {
    if (word.empty()) {
        throw std::invalid_argument("encode_word: empty word");
    }
    return alphabet.at(static_cast<int>(codepoint_sum(word) % static_cast<uint64_t>(alphabet.size())));
}

PbsDocument encode_document(std::string_view id, std::string_view text, const Alphabet& alphabet) {
    PbsDocument doc;
    doc.id = std::string(id);
    doc.map = tokenize(text);
    doc.pbs.reserve(doc.map.size());
    for (const Token& tok : doc.map) {
        doc.pbs.push_back(encode_word(text.substr(tok.byte_start, tok.byte_end - tok.byte_start), alphabet));
    }
    return doc;
}

std::string write_fasta(const PbsDocument& doc, std::string_view description, size_t width) {
    if (description.find('\n') != std::string_view::npos ||
        description.find('\r') != std::string_view::npos) {
        throw std::invalid_argument("FASTA description must be a single line");
    }
    if (width == 0) {
        throw std::invalid_argument("FASTA wrap width must be positive");
    }
    std::string out;
    out.reserve(doc.pbs.size() + doc.pbs.size() / width + description.size() + 4);
    out.push_back('>');
    out.append(description);
    out.push_back('\n');
    for (size_t i = 0; i < doc.pbs.size(); i += width) {
        out.append(doc.pbs, i, width);
        out.push_back('\n');
    }
    return out;
}

FastaRecord parse_fasta(std::string_view text) {
    if (text.empty() || text[0] != '>') {
        throw ValidationError("FASTA: missing '>' header line");
    }
    size_t eol = text.find('\n');
    FastaRecord rec;
    std::string_view header = (eol == std::string_view::npos) ? text.substr(1) : text.substr(1, eol - 1);
    if (!header.empty() && header.back() == '\r') {
        header.remove_suffix(1);
    }
    rec.description = std::string(header);

    size_t pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '\n' || c == '\r' || c == ' ' || c == '\t') {
            continue;
        }
        if (c == '>') {
            throw ValidationError("FASTA: expected a single record");
        }
        rec.sequence.push_back(c);
    }
    return rec;
}

namespace {

uint64_t parse_u64_field(std::string_view field, const char* what) {
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ValidationError(std::string("offset map: bad ") + what);
    }
    return value;
}

} // namespace

std::string write_offset_map(const OffsetMap& map) {
    std::string out;
    if (!map.source_sha256_hex.empty()) {
        out += "#sha256\t" + map.source_sha256_hex + "\n";
    }
    if (!map.stripped_lines.empty()) {
        out += "#stripped\t";
        for (size_t i = 0; i < map.stripped_lines.size(); ++i) {
            if (i) {
                out.push_back(',');
            }
            out += std::to_string(map.stripped_lines[i]);
        }
        out.push_back('\n');
    }
    for (const Token& t : map.rows) {
        out += std::to_string(t.word_index);
        out.push_back('\t');
        out += std::to_string(t.byte_start);
        out.push_back('\t');
        out += std::to_string(t.byte_end);
        out.push_back('\n');
    }
    return out;
}

OffsetMap parse_offset_map(std::string_view text) {
    OffsetMap map;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, (eol == std::string_view::npos ? text.size() : eol) - pos);
        pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (line[0] == '#') {
            size_t tab = line.find('\t');
            std::string_view key = line.substr(1, tab == std::string_view::npos ? line.size() - 1 : tab - 1);
            std::string_view value = tab == std::string_view::npos ? std::string_view{} : line.substr(tab + 1);
            if (key == "sha256") {
                map.source_sha256_hex = std::string(value);
            } else if (key == "stripped") {
                size_t p = 0;
                while (p < value.size()) {
                    size_t comma = value.find(',', p);
                    std::string_view item =
                        value.substr(p, (comma == std::string_view::npos ? value.size() : comma) - p);
                    map.stripped_lines.push_back(parse_u64_field(item, "stripped line index"));
                    p = (comma == std::string_view::npos) ? value.size() : comma + 1;
                }
            }
            continue;
        }
        size_t t1 = line.find('\t');
        size_t t2 = (t1 == std::string_view::npos) ? std::string_view::npos : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos) {
            throw ValidationError("offset map: expected three tab-separated fields");
        }
        Token tok;
        tok.word_index = parse_u64_field(line.substr(0, t1), "word index");
        tok.byte_start = parse_u64_field(line.substr(t1 + 1, t2 - t1 - 1), "byte start");
        tok.byte_end = parse_u64_field(line.substr(t2 + 1), "byte end");
        if (tok.word_index != map.rows.size() || tok.byte_start >= tok.byte_end) {
            throw ValidationError("offset map: rows out of order or empty span");
        }
        map.rows.push_back(tok);
    }
    return map;
}

} // namespace pbsearch
