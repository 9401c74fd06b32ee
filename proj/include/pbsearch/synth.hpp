#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pbsearch::synth {

/// Deterministic English-like prose: sentences of common words, comma
/// clauses, paragraphs, lines wrapped near 80 columns. At least `min_bytes`
/// long; same (min_bytes, seed) → same text.
std::string english_corpus(size_t min_bytes, uint64_t seed);

/// Deterministic Chinese-like text: CJK characters interleaved with
/// half-width ASCII fragments and full-width punctuation, newline-broken.
std::string chinese_corpus(size_t min_bytes, uint64_t seed);

/// One labeled document for the reference-filter corpus: text plus a
/// per-line flag marking bibliography lines (lines as split on LF).
struct LabeledDoc {
    std::string text;
    std::vector<bool> line_is_ref;
};

/// Labeled classifier corpus: `doc_count` documents, half containing a
/// citation block (mostly trailing, some mid-document), half pure prose.
std::vector<LabeledDoc> labeled_ref_corpus(size_t doc_count, uint64_t seed);

/// Area under the ROC curve by rank statistic (ties get averaged ranks).
/// Throws std::invalid_argument unless both classes are present.
double roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels);

} // namespace pbsearch::synth
