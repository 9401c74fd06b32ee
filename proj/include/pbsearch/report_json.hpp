#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbsearch/corpus_db.hpp"
#include "pbsearch/detector.hpp"

namespace pbsearch {

/// One match as it appears in the downloadable metadata: word indices plus
/// the reference document's public identity. Never any plaintext of the
/// query.
struct MatchMeta {
    uint64_t query_start = 0;
    uint64_t query_end = 0;
    uint32_t ref_doc_id = 0;
    std::string ref_title;
    std::string ref_url;
    uint64_t ref_start = 0;
    uint64_t ref_end = 0;
    std::vector<uint32_t> mismatch_gaps; // gap lengths, in words
    std::vector<uint64_t> gap_offsets;   // parallel: offsets from query_start
    bool operator==(const MatchMeta&) const = default;
};

/// The whole result document for one query.
struct ReportMeta {
    std::string query_id;
    uint64_t query_word_count = 0;
    uint64_t longest_ccw = 0;
    double coverage_percent = 0.0;
    std::vector<MatchMeta> matches;
    bool operator==(const ReportMeta&) const = default;
};

/// Joins detector output with the registry's titles and URLs.
ReportMeta to_meta(const PlagiarismReport& report, const CorpusDb& db);

/// Pairwise flavor: reference identities are the uploaded documents
/// themselves (title = document id, no URL).
ReportMeta to_meta(const PlagiarismReport& report, const std::vector<PbsDocument>& docs);

/// JSON text of one result document (schema keys: queryId, queryWordCount,
/// longestCcw, coveragePercent, matches[{queryStart, queryEnd, refDocId,
/// refTitle, refUrl, refStart, refEnd, mismatchGaps, gapOffsets}]).
std::string meta_to_json(const ReportMeta& meta, int indent = 2);

/// JSON array over several result documents (pairwise response body).
std::string meta_list_to_json(const std::vector<ReportMeta>& metas, int indent = 2);

/// Parses and validates one result document. Throws ValidationError on
/// malformed JSON or schema violations.
ReportMeta meta_from_json(const std::string& text);
std::vector<ReportMeta> meta_list_from_json(const std::string& text);

} // namespace pbsearch
