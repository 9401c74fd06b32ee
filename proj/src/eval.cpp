#include "pbsearch/eval.hpp"

#include <algorithm>
#include <span>
#include <sstream>
#include <unordered_map>

#include "pbsearch/corpus_db.hpp"
#include "pbsearch/encoder.hpp"
#include "pbsearch/errors.hpp"
#include "pbsearch/tokenizer.hpp"

namespace pbsearch::eval {

namespace {

// The corpus reduced to word ids: identical words (exact bytes) share an id,
// so window equality is id-sequence equality. Sums feed the encoding.
struct InternedCorpus {
    std::vector<std::vector<uint32_t>> docs; // word ids per document
    std::vector<uint64_t> word_sums;         // code-point sum per id
};

InternedCorpus intern(const std::vector<std::string_view>& documents) {
    InternedCorpus corpus;
    std::unordered_map<std::string_view, uint32_t> ids;
    for (std::string_view text : documents) {
        std::vector<uint32_t>& doc = corpus.docs.emplace_back();
        for (const Token& tok : tokenize(text)) {
            std::string_view word = text.substr(tok.byte_start, tok.byte_end - tok.byte_start);
            auto [it, fresh] = ids.try_emplace(word, static_cast<uint32_t>(ids.size()));
            if (fresh) corpus.word_sums.push_back(codepoint_sum(word));
            doc.push_back(it->second);
        }
    }
    return corpus;
}

// Exactly deduplicated k-word windows: 64-bit hash buckets, ties broken by
// comparing the id sequences themselves, so a hash collision can never merge
// two different strings.
struct UniqueWindows {
    std::vector<std::pair<uint32_t, uint32_t>> reps; // (doc, word offset)
};

UniqueWindows unique_windows(const InternedCorpus& corpus, uint32_t k) {
    UniqueWindows out;
    std::unordered_map<uint64_t, std::vector<uint32_t>> buckets; // hash -> rep indices
    auto window = [&](uint32_t rep) {
        const auto& [d, off] = out.reps[rep];
        return std::span<const uint32_t>(corpus.docs[d].data() + off, k);
    };
    for (uint32_t d = 0; d < corpus.docs.size(); ++d) {
        const std::vector<uint32_t>& doc = corpus.docs[d];
        if (doc.size() < k) continue;
        for (uint32_t off = 0; off + k <= doc.size(); ++off) {
            uint64_t h = 1469598103934665603ULL;
            for (uint32_t i = 0; i < k; ++i) {
                h ^= doc[off + i];
                h *= 1099511628211ULL;
            }
            std::vector<uint32_t>& bucket = buckets[h];
            out.reps.emplace_back(d, off);
            const uint32_t candidate = static_cast<uint32_t>(out.reps.size() - 1);
            bool duplicate = false;
            for (uint32_t rep : bucket) {
                if (std::ranges::equal(window(rep), window(candidate))) {
                    duplicate = true;
                    break;
                }
            }
            if (duplicate)
                out.reps.pop_back();
            else
                bucket.push_back(candidate);
        }
    }
    return out;
}

FpReport census(const InternedCorpus& corpus, const UniqueWindows& windows, uint32_t k,
                uint32_t a) {
    const Alphabet alphabet(static_cast<int>(a));
    std::unordered_map<std::string, uint32_t> pbs_buckets;
    pbs_buckets.reserve(windows.reps.size() * 2);
    std::string pbs(k, '\0');
    for (const auto& [d, off] : windows.reps) {
        for (uint32_t i = 0; i < k; ++i)
            pbs[i] = alphabet.at(
                static_cast<int>(corpus.word_sums[corpus.docs[d][off + i]] % a));
        ++pbs_buckets[pbs];
    }
    FpReport report;
    report.k = k;
    report.a = a;
    report.unique_strings = windows.reps.size();
    for (const auto& [_, count] : pbs_buckets)
        if (count >= 2) report.colliding_strings += count;
    return report;
}

} // namespace

FpReport fp_rate(const std::vector<std::string_view>& documents, uint32_t k, uint32_t a) {
    if (k == 0) throw std::invalid_argument("window length must be at least 1");
    const InternedCorpus corpus = intern(documents);
    const UniqueWindows windows = unique_windows(corpus, k);
    if (windows.reps.empty())
        throw UsageError("corpus has no window of " + std::to_string(k) + " words");
    return census(corpus, windows, k, a);
}

std::vector<FpReport> sweep(const std::vector<std::string_view>& documents,
                            const std::vector<uint32_t>& ks, const std::vector<uint32_t>& as) {
    const InternedCorpus corpus = intern(documents);
    std::vector<FpReport> reports;
    reports.reserve(ks.size() * as.size());
    for (uint32_t k : ks) {
        if (k == 0) throw std::invalid_argument("window length must be at least 1");
        const UniqueWindows windows = unique_windows(corpus, k);
        if (windows.reps.empty())
            throw UsageError("corpus has no window of " + std::to_string(k) + " words");
        for (uint32_t a : as) reports.push_back(census(corpus, windows, k, a));
    }
    return reports;
}

std::string sweep_tsv(const std::vector<FpReport>& reports) {
    std::ostringstream out;
    out << "k\ta\tunique\tcolliding\tfp_rate\n";
    for (const FpReport& r : reports) {
        out << r.k << '\t' << r.a << '\t' << r.unique_strings << '\t' << r.colliding_strings
            << '\t';
        out.precision(10);
        out << r.fp_rate() << '\n';
    }
    return out.str();
}

CompressionReport compression_ratio(const std::vector<std::string_view>& documents,
                                    const Alphabet& alphabet) {
    if (documents.empty()) throw UsageError("compression measurement needs documents");
    CompressionReport report;
    std::vector<DocumentInput> inputs;
    inputs.reserve(documents.size());
    for (size_t i = 0; i < documents.size(); ++i) {
        report.raw_bytes += documents[i].size();
        PbsDocument doc =
            encode_document("doc" + std::to_string(i), documents[i], alphabet);
        report.pbs_chars += doc.pbs.size();
        inputs.push_back({"doc" + std::to_string(i), "", std::move(doc.pbs), ""});
    }
    CorpusDb db = CorpusDb::from_encoded(inputs, alphabet);
    std::ostringstream sink(std::ios::binary);
    db.save(sink);
    report.db_bytes = static_cast<uint64_t>(sink.tellp());
    return report;
}

} // namespace pbsearch::eval
