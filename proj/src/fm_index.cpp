#include "pbsearch/fm_index.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <span>

#include "pbsearch/errors.hpp"
#include "pbsearch/io_util.hpp"
#include "pbsearch/suffix_array.hpp"

namespace pbsearch {

using io::CrcReader;
using io::CrcWriter;

namespace {

constexpr char kMagic[4] = {'P', 'B', 'F', 'M'};
constexpr uint32_t kVersion = 1;
constexpr char kSentinel = '$';

uint64_t blocks_for(uint64_t rows, uint32_t occ_rate) {
    return rows / occ_rate + 1;
}

} // namespace

FmIndex FmIndex::build(std::string_view text, const Alphabet& alphabet) {
    return build(text, alphabet, Config{});
}

FmIndex FmIndex::build(std::string_view text, const Alphabet& alphabet, Config config) {
    if (config.occ_rate == 0 || config.sa_rate == 0)
        throw std::invalid_argument("fm-index rates must be positive");
    if (text.size() > std::numeric_limits<uint32_t>::max() - 2)
        throw std::length_error("text too large for this index layout");

    FmIndex idx;
    idx.alphabet_ = alphabet;
    idx.config_ = config;
    idx.n_ = text.size();

    const int a = alphabet.size();
    const uint64_t rows = idx.n_ + 1;

    // Dense-code copy with the unique smallest sentinel appended.
    std::vector<uint8_t> codes(rows);
    for (uint64_t i = 0; i < idx.n_; ++i) {
        int code = alphabet.code_of(text[i]);
        if (code < 0)
            throw ValidationError("text contains character outside the alphabet: '" +
                                  std::string(1, text[i]) + "'");
        codes[i] = static_cast<uint8_t>(code + 1);
    }
    codes[idx.n_] = 0;

    std::vector<int32_t> sa = build_suffix_array(std::span<const uint8_t>(codes), a + 1);

    idx.bwt_.resize(rows);
    for (uint64_t r = 0; r < rows; ++r) {
        int32_t pos = sa[r];
        // Row 0 of the text wraps around to the sentinel.
        idx.bwt_[r] = pos == 0 ? codes[idx.n_] : codes[pos - 1];
    }

    // C table: c_table_[code] = first F-column row of that code.
    std::vector<uint64_t> counts(a + 1, 0);
    for (uint8_t c : idx.bwt_) ++counts[c];
    idx.c_table_.assign(a + 2, 0);
    for (int c = 0; c <= a; ++c) idx.c_table_[c + 1] = idx.c_table_[c] + counts[c];

    // Occ checkpoints: counts of each code strictly before each block start.
    const uint64_t blocks = blocks_for(rows, config.occ_rate);
    idx.occ_checkpoints_.assign(blocks * (a + 1), 0);
    std::vector<uint32_t> running(a + 1, 0);
    for (uint64_t r = 0; r <= rows; ++r) {
        // rank(c, rows) is a legal query, so when rows lands on a block
        // boundary the final checkpoint must exist too.
        if (r % config.occ_rate == 0 && r / config.occ_rate < blocks)
            std::copy(running.begin(), running.end(),
                      idx.occ_checkpoints_.begin() + (r / config.occ_rate) * (a + 1));
        if (r < rows) ++running[idx.bwt_[r]];
    }

    // Suffix position samples at text positions divisible by sa_rate.
    idx.sa_mark_words_.assign((rows + 63) / 64, 0);
    for (uint64_t r = 0; r < rows; ++r) {
        if (static_cast<uint64_t>(sa[r]) % config.sa_rate == 0) {
            idx.sa_mark_words_[r >> 6] |= uint64_t{1} << (r & 63);
            idx.sa_samples_.push_back(static_cast<uint64_t>(sa[r]));
        }
    }
    idx.rebuild_mark_rank();
    return idx;
}

uint64_t FmIndex::rank_code(uint8_t code, uint64_t pos) const {
    const int width = alphabet_.size() + 1;
    const uint64_t block = pos / config_.occ_rate;
    uint64_t count = occ_checkpoints_[block * width + code];
    for (uint64_t r = block * config_.occ_rate; r < pos; ++r)
        count += bwt_[r] == code;
    return count;
}

char FmIndex::bwt_char(uint64_t row) const {
    uint8_t code = bwt_.at(row);
    return code == 0 ? kSentinel : alphabet_.at(code - 1);
}

uint64_t FmIndex::rank(char c, uint64_t pos) const {
    if (pos > row_count()) throw std::out_of_range("rank position past end of bwt");
    if (c == kSentinel) return rank_code(0, pos);
    int code = alphabet_.code_of(c);
    if (code < 0) throw std::invalid_argument("rank of character outside the alphabet");
    return rank_code(static_cast<uint8_t>(code + 1), pos);
}

uint64_t FmIndex::c_start(char c) const {
    if (c == kSentinel) return c_table_[0];
    int code = alphabet_.code_of(c);
    if (code < 0) throw std::invalid_argument("c_start of character outside the alphabet");
    return c_table_[code + 1];
}

uint64_t FmIndex::lf(uint64_t row) const {
    uint8_t code = bwt_.at(row);
    return c_table_[code] + rank_code(code, row);
}

SaRange FmIndex::backward_search(std::string_view pattern) const {
    SaRange range{0, row_count()};
    for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
        int code = alphabet_.code_of(*it);
        if (code < 0) return SaRange{0, 0};
        uint8_t dense = static_cast<uint8_t>(code + 1);
        range.lo = c_table_[dense] + rank_code(dense, range.lo);
        range.hi = c_table_[dense] + rank_code(dense, range.hi);
        if (range.empty()) return SaRange{0, 0};
    }
    return range;
}

std::vector<uint64_t> FmIndex::locate(const SaRange& range) const {
    std::vector<uint64_t> out;
    out.reserve(range.empty() ? 0 : range.count());
    for (uint64_t row = range.lo; row < range.hi; ++row) {
        uint64_t r = row;
        uint64_t steps = 0;
        while (!(sa_mark_words_[r >> 6] >> (r & 63) & 1)) {
            r = lf(r);
            ++steps;
        }
        uint64_t marked_before = sa_mark_rank_[r >> 6] +
            std::popcount(sa_mark_words_[r >> 6] & ((uint64_t{1} << (r & 63)) - 1));
        out.push_back(sa_samples_[marked_before] + steps);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string FmIndex::extract_text() const {
    // Row 0 is the sentinel suffix; LF from it visits the text back to front.
    std::string text(n_, '\0');
    uint64_t row = 0;
    for (uint64_t i = n_; i-- > 0;) {
        text[i] = bwt_char(row);
        row = lf(row);
    }
    return text;
}

void FmIndex::rebuild_mark_rank() {
    sa_mark_rank_.assign(sa_mark_words_.size(), 0);
    uint32_t total = 0;
    for (size_t w = 0; w < sa_mark_words_.size(); ++w) {
        sa_mark_rank_[w] = total;
        total += static_cast<uint32_t>(std::popcount(sa_mark_words_[w]));
    }
}

void FmIndex::save(std::ostream& out) const {
    CrcWriter w(out);
    w.write_bytes(kMagic, sizeof kMagic);
    w.write_u32(kVersion);
    w.write_u8(static_cast<uint8_t>(alphabet_.size()));
    w.write_u32(config_.occ_rate);
    w.write_u32(config_.sa_rate);
    w.write_u64(n_);
    // BWT stored as characters so the file is inspectable with xxd.
    std::string bwt_chars(bwt_.size(), '\0');
    for (size_t i = 0; i < bwt_.size(); ++i)
        bwt_chars[i] = bwt_[i] == 0 ? kSentinel : alphabet_.at(bwt_[i] - 1);
    w.write_bytes(bwt_chars.data(), bwt_chars.size());
    for (int c = 0; c <= alphabet_.size(); ++c) w.write_u64(c_table_[c + 1]);
    for (uint32_t v : occ_checkpoints_) w.write_u32(v);
    w.write_u64(sa_samples_.size());
    for (uint64_t word : sa_mark_words_) w.write_u64(word);
    for (uint64_t v : sa_samples_) w.write_u64(v);
    w.write_crc_trailer();
    if (!out) throw Error("failed writing index stream");
}

void FmIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    save(out);
}

FmIndex FmIndex::load(std::istream& in) {
    CrcReader r(in);
    char magic[4];
    r.read_bytes(magic, sizeof magic);
    if (!std::equal(magic, magic + 4, kMagic))
        throw LoadError(LoadError::Kind::BadMagic, "not an index file (bad magic)");
    uint32_t version = r.read_u32();
    if (version != kVersion)
        throw LoadError(LoadError::Kind::BadVersion,
                        "unsupported index version " + std::to_string(version));

    FmIndex idx;
    uint8_t a = r.read_u8();
    if (a < 1 || a > 26)
        throw LoadError(LoadError::Kind::BadSection, "alphabet size out of range");
    idx.alphabet_ = Alphabet(a);
    idx.config_.occ_rate = r.read_u32();
    idx.config_.sa_rate = r.read_u32();
    if (idx.config_.occ_rate == 0 || idx.config_.sa_rate == 0)
        throw LoadError(LoadError::Kind::BadSection, "invalid sampling rates");
    idx.n_ = r.read_u64();
    if (idx.n_ > std::numeric_limits<uint32_t>::max() - 2)
        throw LoadError(LoadError::Kind::BadSection, "text length out of range");

    const uint64_t rows = idx.n_ + 1;
    std::string bwt_chars(rows, '\0');
    r.read_bytes(bwt_chars.data(), rows);
    idx.bwt_.resize(rows);
    for (uint64_t i = 0; i < rows; ++i) {
        char c = bwt_chars[i];
        if (c == kSentinel) {
            idx.bwt_[i] = 0;
            continue;
        }
        int code = idx.alphabet_.code_of(c);
        if (code < 0)
            throw LoadError(LoadError::Kind::BadSection, "bwt contains illegal character");
        idx.bwt_[i] = static_cast<uint8_t>(code + 1);
    }

    idx.c_table_.assign(a + 2, 0);
    for (int c = 0; c <= a; ++c) idx.c_table_[c + 1] = r.read_u64();

    const uint64_t blocks = blocks_for(rows, idx.config_.occ_rate);
    idx.occ_checkpoints_.resize(blocks * (a + 1));
    for (auto& v : idx.occ_checkpoints_) v = r.read_u32();

    uint64_t sample_count = r.read_u64();
    if (sample_count > rows)
        throw LoadError(LoadError::Kind::BadSection, "sample count exceeds row count");
    idx.sa_mark_words_.resize((rows + 63) / 64);
    for (auto& w : idx.sa_mark_words_) w = r.read_u64();
    idx.sa_samples_.resize(sample_count);
    for (auto& v : idx.sa_samples_) v = r.read_u64();

    r.check_crc_trailer();
    idx.rebuild_mark_rank();
    idx.validate_loaded();
    return idx;
}

FmIndex FmIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + path.string());
    return load(in);
}

void FmIndex::validate_loaded() const {
    const int a = alphabet_.size();
    // The C table is redundant with the BWT; recompute and compare so a
    // corrupted-but-CRC-valid file (or hand-edited one) is still rejected.
    std::vector<uint64_t> counts(a + 1, 0);
    uint64_t sentinels = 0;
    for (uint8_t c : bwt_) {
        ++counts[c];
        sentinels += c == 0;
    }
    if (sentinels != 1)
        throw LoadError(LoadError::Kind::BadSection, "bwt must contain exactly one sentinel");
    uint64_t start = 0;
    for (int c = 0; c <= a; ++c) {
        if (c_table_[c] != start)
            throw LoadError(LoadError::Kind::BadSection, "c table inconsistent with bwt");
        start += counts[c];
    }
    if (c_table_[a + 1] != start)
        throw LoadError(LoadError::Kind::BadSection, "c table inconsistent with bwt");

    uint64_t marked = 0;
    for (uint64_t w : sa_mark_words_) marked += std::popcount(w);
    if (marked != sa_samples_.size())
        throw LoadError(LoadError::Kind::BadSection, "sample bitmap disagrees with sample list");
    // Rows past the end must not be marked.
    const uint64_t rows = row_count();
    for (uint64_t r = rows; r < sa_mark_words_.size() * 64; ++r)
        if (sa_mark_words_[r >> 6] >> (r & 63) & 1)
            throw LoadError(LoadError::Kind::BadSection, "sample bitmap marks rows past end");
    for (uint64_t v : sa_samples_)
        if (v > n_ || v % config_.sa_rate != 0)
            throw LoadError(LoadError::Kind::BadSection, "sampled suffix position invalid");
    uint64_t expected_samples = n_ / config_.sa_rate + 1;
    if (sa_samples_.size() != expected_samples)
        throw LoadError(LoadError::Kind::BadSection, "sample count inconsistent with text length");
}

} // namespace pbsearch
