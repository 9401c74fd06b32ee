#include "pbsearch/detector.hpp"

#include <algorithm>

#include "pbsearch/errors.hpp"

namespace pbsearch {

uint64_t MatchRecord::longest_run() const {
    uint64_t best = 0;
    uint64_t run_start = 0; // relative to query_start
    for (const GapSpan& g : gaps) {
        best = std::max(best, g.offset - run_start);
        run_start = g.offset + g.length;
    }
    return std::max(best, span() - run_start);
}

std::vector<std::pair<uint64_t, std::string_view>> split_kmers(std::string_view pbs, uint32_t k) {
    if (k == 0) throw std::invalid_argument("seed length must be at least 1");
    std::vector<std::pair<uint64_t, std::string_view>> kmers;
    if (pbs.size() < k) return kmers;
    kmers.reserve(pbs.size() - k + 1);
    for (size_t off = 0; off + k <= pbs.size(); ++off)
        kmers.emplace_back(off, pbs.substr(off, k));
    return kmers;
}

std::vector<SeedHit> seed_search(const CorpusDb& db, std::string_view pbs, uint32_t k,
                                 std::optional<uint32_t> self_doc) {
    std::vector<SeedHit> hits;
    for (const auto& [offset, kmer] : split_kmers(pbs, k)) {
        SaRange range = db.index().backward_search(kmer);
        if (range.empty()) continue;
        for (uint64_t pos : db.index().locate(range)) {
            CorpusDb::Location loc = db.resolve(pos);
            // The whole seed must sit inside one document; the concatenated
            // text has no separators, so junction-straddling k-mers match
            // spuriously and are dropped here.
            if (loc.local_pos + k > db.doc(loc.doc_id).word_count) continue;
            if (self_doc && *self_doc == loc.doc_id && loc.local_pos == offset) continue;
            hits.push_back({offset, pos, k});
        }
    }
    return hits; // locate() sorts positions, so this is (query_start, ref_start)-ordered
}

namespace {

struct AnnotatedHit {
    uint32_t doc_id;
    int64_t diagonal; // doc-local ref start minus query start
    uint64_t query_start;
};

// Builds one record for a closed chain, re-deriving the mismatch structure
// from the texts themselves: interval chaining only proves the gap regions
// are short, not that every word in them differs.
MatchRecord finalize_chain(const CorpusDb& db, std::string_view query_pbs, uint32_t doc_id,
                           int64_t diagonal, uint64_t q_start, uint64_t q_end, uint32_t max_gap) {
    MatchRecord rec;
    rec.query_start = q_start;
    rec.query_end = q_end;
    rec.ref_doc_id = doc_id;
    rec.ref_start = static_cast<uint64_t>(static_cast<int64_t>(q_start) + diagonal);
    rec.ref_end = rec.ref_start + (q_end - q_start);

    std::string_view ref = db.text();
    const uint64_t ref_global = db.doc(doc_id).word_offset + rec.ref_start;
    uint64_t mismatch_start = 0;
    bool in_mismatch = false;
    for (uint64_t i = 0; i < rec.span(); ++i) {
        bool same = query_pbs[q_start + i] == ref[ref_global + i];
        if (!same && !in_mismatch) {
            in_mismatch = true;
            mismatch_start = i;
        } else if (same && in_mismatch) {
            in_mismatch = false;
            rec.gaps.push_back({mismatch_start, static_cast<uint32_t>(i - mismatch_start)});
        }
    }
    if (in_mismatch)
        throw Error("internal: merged match ends on a mismatch");
    uint64_t gap_words = 0;
    for (const GapSpan& g : rec.gaps) {
        if (g.length > max_gap) throw Error("internal: merged match contains an oversize gap");
        gap_words += g.length;
    }
    rec.matched_words = rec.span() - gap_words;
    return rec;
}

} // namespace

std::vector<MatchRecord> merge_hits(const CorpusDb& db, std::string_view query_pbs,
                                    std::vector<SeedHit> hits, const DetectorOptions& opts) {
    std::vector<AnnotatedHit> ann;
    ann.reserve(hits.size());
    for (const SeedHit& h : hits) {
        CorpusDb::Location loc = db.resolve(h.ref_start);
        ann.push_back({loc.doc_id,
                       static_cast<int64_t>(loc.local_pos) - static_cast<int64_t>(h.query_start),
                       h.query_start});
    }
    std::sort(ann.begin(), ann.end(), [](const AnnotatedHit& a, const AnnotatedHit& b) {
        return std::tie(a.doc_id, a.diagonal, a.query_start) <
               std::tie(b.doc_id, b.diagonal, b.query_start);
    });

    std::vector<MatchRecord> records;
    size_t i = 0;
    while (i < ann.size()) {
        const uint32_t doc = ann[i].doc_id;
        const int64_t diag = ann[i].diagonal;
        uint64_t q_start = ann[i].query_start;
        uint64_t q_end = q_start + opts.seed_k;
        ++i;
        while (i < ann.size() && ann[i].doc_id == doc && ann[i].diagonal == diag &&
               ann[i].query_start <= q_end + opts.max_gap) {
            q_end = std::max(q_end, ann[i].query_start + opts.seed_k);
            ++i;
        }
        if (q_end - q_start >= opts.min_report)
            records.push_back(
                finalize_chain(db, query_pbs, doc, diag, q_start, q_end, opts.max_gap));
    }
    return records;
}

PlagiarismReport score(std::string query_id, uint64_t query_word_count,
                       std::vector<MatchRecord> records) {
    PlagiarismReport report;
    report.query_id = std::move(query_id);
    report.query_word_count = query_word_count;

    std::vector<std::pair<uint64_t, uint64_t>> intervals;
    intervals.reserve(records.size());
    for (const MatchRecord& rec : records) {
        report.longest_ccw = std::max(report.longest_ccw, rec.longest_run());
        intervals.emplace_back(rec.query_start, rec.query_end);
    }
    std::sort(intervals.begin(), intervals.end());
    uint64_t covered = 0;
    uint64_t cur_start = 0, cur_end = 0;
    bool open = false;
    for (const auto& [s, e] : intervals) {
        if (open && s <= cur_end) {
            cur_end = std::max(cur_end, e);
        } else {
            if (open) covered += cur_end - cur_start;
            cur_start = s;
            cur_end = e;
            open = true;
        }
    }
    if (open) covered += cur_end - cur_start;
    report.coverage_percent =
        query_word_count == 0 ? 0.0 : 100.0 * static_cast<double>(covered) /
                                          static_cast<double>(query_word_count);
    report.matches = std::move(records);
    return report;
}

PlagiarismReport search_pbs(const CorpusDb& db, std::string_view query_id, std::string_view pbs,
                            const DetectorOptions& opts) {
    std::vector<SeedHit> hits = seed_search(db, pbs, opts.seed_k);
    std::vector<MatchRecord> records = merge_hits(db, pbs, std::move(hits), opts);
    return score(std::string(query_id), pbs.size(), std::move(records));
}

PlagiarismReport search_document(const CorpusDb& db, const PbsDocument& doc,
                                 const DetectorOptions& opts) {
    return search_pbs(db, doc.id, doc.pbs, opts);
}

std::vector<PlagiarismReport> pairwise(const std::vector<PbsDocument>& docs,
                                       const Alphabet& alphabet, const DetectorOptions& opts) {
    if (docs.size() < 2)
        throw UsageError("pairwise comparison needs at least two documents");

    std::vector<DocumentInput> inputs;
    inputs.reserve(docs.size());
    for (const PbsDocument& doc : docs) inputs.push_back({doc.id, "", doc.pbs, ""});
    CorpusDb db = CorpusDb::from_encoded(inputs, alphabet);

    std::vector<PlagiarismReport> reports;
    reports.reserve(docs.size());
    for (uint32_t i = 0; i < docs.size(); ++i) {
        std::vector<SeedHit> hits = seed_search(db, docs[i].pbs, opts.seed_k, i);
        std::vector<MatchRecord> records = merge_hits(db, docs[i].pbs, std::move(hits), opts);
        reports.push_back(score(docs[i].id, docs[i].pbs.size(), std::move(records)));
    }
    return reports;
}

} // namespace pbsearch
