#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pbsearch/alphabet.hpp"

namespace pbsearch::eval {

/// Collision census for one (k, a) cell: how many unique k-word strings
/// share their encoded form with a different unique string.
struct FpReport {
    uint32_t k = 0;
    uint32_t a = 0;
    uint64_t unique_strings = 0;
    uint64_t colliding_strings = 0;

    double fp_rate() const {
        return unique_strings == 0
                   ? 0.0
                   : static_cast<double>(colliding_strings) / static_cast<double>(unique_strings);
    }
};

/// Exact false-positive census over every k-word window (stride 1, windows
/// never cross document boundaries). Uniqueness is exact word-tuple
/// equality, no case folding. Throws UsageError when no document yields a
/// single window.
FpReport fp_rate(const std::vector<std::string_view>& documents, uint32_t k, uint32_t a);

/// fp_rate over the full parameter grid, one report per (k, a).
std::vector<FpReport> sweep(const std::vector<std::string_view>& documents,
                            const std::vector<uint32_t>& ks = {8, 10, 12, 14, 16},
                            const std::vector<uint32_t>& as = {8, 12, 14, 16});

/// TSV rendering of a sweep: header plus k, a, unique, colliding, fp_rate.
std::string sweep_tsv(const std::vector<FpReport>& reports);

/// Size accounting behind the compression ratios: raw bytes vs encoded
/// characters vs serialized-database bytes.
struct CompressionReport {
    uint64_t raw_bytes = 0;
    uint64_t pbs_chars = 0;
    uint64_t db_bytes = 0;

    double raw_to_pbs() const {
        return pbs_chars == 0 ? 0.0
                              : static_cast<double>(raw_bytes) / static_cast<double>(pbs_chars);
    }
    double raw_to_db() const {
        return db_bytes == 0 ? 0.0
                             : static_cast<double>(raw_bytes) / static_cast<double>(db_bytes);
    }
    double db_to_pbs() const {
        return pbs_chars == 0 ? 0.0
                              : static_cast<double>(db_bytes) / static_cast<double>(pbs_chars);
    }
};

/// Encodes the documents, builds an in-memory database, and measures all
/// three sizes. Throws UsageError on an empty corpus.
CompressionReport compression_ratio(const std::vector<std::string_view>& documents,
                                    const Alphabet& alphabet);

} // namespace pbsearch::eval
