#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pbsearch/corpus_db.hpp"
#include "pbsearch/encoder.hpp"

namespace pbsearch {

/// One exact k-mer occurrence: query word offset vs global corpus position.
struct SeedHit {
    uint64_t query_start = 0;
    uint64_t ref_start = 0; // global word index in the corpus
    uint32_t length = 0;    // == seed k
    bool operator==(const SeedHit&) const = default;
};

/// A run of differing words inside a merged match, relative to query_start.
struct GapSpan {
    uint64_t offset = 0;
    uint32_t length = 0;
    bool operator==(const GapSpan&) const = default;
};

/// A merged, reportable duplication between the query and one reference
/// document. Word ranges are half-open; ref range is document-local. Gaps
/// are strictly interior (a record never starts or ends on a mismatch) and
/// the two ranges have equal length.
struct MatchRecord {
    uint64_t query_start = 0;
    uint64_t query_end = 0;
    uint32_t ref_doc_id = 0;
    uint64_t ref_start = 0;
    uint64_t ref_end = 0;
    uint64_t matched_words = 0;
    std::vector<GapSpan> gaps;

    uint64_t span() const { return query_end - query_start; }
    /// Longest run of consecutive matched words (the CCW contribution).
    uint64_t longest_run() const;
    bool operator==(const MatchRecord&) const = default;
};

/// Whole-query verdict: every reportable match plus the two headline
/// numbers, longest CCW and copy coverage.
struct PlagiarismReport {
    std::string query_id;
    uint64_t query_word_count = 0;
    uint64_t longest_ccw = 0;
    double coverage_percent = 0.0;
    std::vector<MatchRecord> matches;
};

struct DetectorOptions {
    uint32_t seed_k = 8;
    uint32_t max_gap = 3;     // longest mergeable mismatch run, in words
    uint32_t min_report = 12; // shorter merged spans are dropped
};

/// Overlapping k-mers at stride 1; empty when the input is shorter than k.
/// Views point into `pbs`. Throws std::invalid_argument when k == 0.
std::vector<std::pair<uint64_t, std::string_view>> split_kmers(std::string_view pbs, uint32_t k);

/// Finds every exact occurrence of every query k-mer. Hits spanning a
/// document boundary are discarded; with `self_doc` set, hits resolving to
/// that document at the identical position are too (pairwise self-matches).
/// Result is sorted by (query_start, ref_start).
std::vector<SeedHit> seed_search(const CorpusDb& db, std::string_view pbs, uint32_t k,
                                 std::optional<uint32_t> self_doc = std::nullopt);

/// Chains co-diagonal hits within one document when their query intervals
/// overlap, abut, or are separated by at most max_gap words; drops chains
/// shorter than min_report; then recomputes the gap structure by direct
/// character comparison so matched_words and gaps reflect the actual texts.
std::vector<MatchRecord> merge_hits(const CorpusDb& db, std::string_view query_pbs,
                                    std::vector<SeedHit> hits, const DetectorOptions& opts = {});

/// Aggregates records into the final report (longest CCW, coverage).
PlagiarismReport score(std::string query_id, uint64_t query_word_count,
                       std::vector<MatchRecord> records);

/// Full pipeline for one query PBS against a reference database.
PlagiarismReport search_pbs(const CorpusDb& db, std::string_view query_id, std::string_view pbs,
                            const DetectorOptions& opts = {});
PlagiarismReport search_document(const CorpusDb& db, const PbsDocument& doc,
                                 const DetectorOptions& opts = {});

/// Mutual comparison of uploaded documents: builds a temporary index over
/// all of them, queries each against it with same-position self-matches
/// excluded, and returns one report per document in input order. Throws
/// UsageError with fewer than two documents.
std::vector<PlagiarismReport> pairwise(const std::vector<PbsDocument>& docs,
                                       const Alphabet& alphabet, const DetectorOptions& opts = {});

} // namespace pbsearch
