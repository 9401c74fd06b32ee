#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pbsearch/alphabet.hpp"

namespace pbsearch {

/// Half-open row interval in the sorted suffix table. hi - lo is the number
/// of occurrences of the searched pattern.
struct SaRange {
    uint64_t lo = 0;
    uint64_t hi = 0;

    uint64_t count() const { return hi - lo; }
    bool empty() const { return hi <= lo; }
    bool operator==(const SaRange&) const = default;
};

/// BWT-based full-text index over a PBS. Immutable once built or loaded;
/// queries are read-only and safe under concurrent readers.
///
/// Internally characters are mapped to dense codes: 0 is the '$' sentinel,
/// 1..a the alphabet characters in ascending order. The occurrence table is
/// checkpointed every occ_rate positions and the suffix array is sampled at
/// text positions divisible by sa_rate, so locate() walks at most
/// sa_rate - 1 LF steps.
class FmIndex {
  public:
    struct Config {
        uint32_t occ_rate = 128;
        uint32_t sa_rate = 32;
    };

    FmIndex() = default;

    /// Indexes `text` (alphabet characters only, no '$'). Throws
    /// ValidationError on illegal characters.
    static FmIndex build(std::string_view text, const Alphabet& alphabet,
                         Config config);
    static FmIndex build(std::string_view text, const Alphabet& alphabet);

    /// Exact backward search; O(pattern length) checkpointed rank steps.
    /// Characters outside the alphabet yield the empty range.
    SaRange backward_search(std::string_view pattern) const;

    /// Text start offsets of every suffix row in `range`, sorted ascending.
    std::vector<uint64_t> locate(const SaRange& range) const;

    uint64_t text_length() const { return n_; }
    uint64_t row_count() const { return n_ + 1; }
    const Alphabet& alphabet() const { return alphabet_; }
    const Config& config() const { return config_; }

    /// BWT character of a row ('$' or an alphabet character).
    char bwt_char(uint64_t row) const;
    /// Occurrences of `c` in bwt[0, pos).
    uint64_t rank(char c, uint64_t pos) const;
    /// First row of `c` in the F column ('$' allowed).
    uint64_t c_start(char c) const;
    /// Last-to-first mapping: the row of the suffix starting one position
    /// earlier in the text.
    uint64_t lf(uint64_t row) const;
    /// Reconstructs the indexed text by LF-walking from the sentinel row.
    std::string extract_text() const;

    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static FmIndex load(std::istream& in);
    static FmIndex load(const std::filesystem::path& path);

  private:
    uint64_t rank_code(uint8_t code, uint64_t pos) const;
    void rebuild_mark_rank();
    void validate_loaded() const;

    Alphabet alphabet_{12};
    Config config_{};
    uint64_t n_ = 0;
    std::vector<uint8_t> bwt_;              // dense codes, length n_ + 1
    std::vector<uint64_t> c_table_;         // size a + 2; start row per code, last entry = n + 1
    std::vector<uint32_t> occ_checkpoints_; // per block: a + 1 counts before the block start
    std::vector<uint64_t> sa_mark_words_;   // bit per row: suffix position sampled
    std::vector<uint64_t> sa_samples_;      // sampled suffix positions, in row order
    std::vector<uint32_t> sa_mark_rank_;    // marked rows before each mark word (derived)
};

} // namespace pbsearch
