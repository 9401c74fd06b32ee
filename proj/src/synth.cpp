#include "pbsearch/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace pbsearch::synth {

namespace {

// All draws go through explicit modulo so the streams depend only on
// mt19937_64, not on a library's distribution implementation.
struct Rng {
    std::mt19937_64 engine;
    explicit Rng(uint64_t seed) : engine(seed) {}
    uint64_t next(uint64_t bound) { return engine() % bound; }
    uint64_t between(uint64_t lo, uint64_t hi) { return lo + next(hi - lo + 1); } // inclusive
    bool chance(uint32_t percent) { return next(100) < percent; }
};

const char* const kWords[] = {
    "the", "of", "and", "a", "to", "in", "is", "was", "it", "for", "with", "as", "his",
    "on", "be", "at", "by", "had", "not", "are", "but", "from", "or", "have", "an", "they",
    "which", "one", "you", "were", "her", "all", "she", "there", "would", "their", "we",
    "him", "been", "has", "when", "who", "will", "more", "no", "if", "out", "so", "said",
    "what", "up", "its", "about", "into", "than", "them", "can", "only", "other", "new",
    "some", "could", "time", "these", "two", "may", "then", "do", "first", "any", "my",
    "now", "such", "like", "our", "over", "man", "me", "even", "most", "made", "after",
    "also", "did", "many", "before", "must", "through", "back", "years", "where", "much",
    "your", "way", "well", "down", "should", "because", "each", "just", "those", "people",
    "how", "too", "little", "state", "good", "very", "make", "world", "still", "own",
    "see", "men", "work", "long", "get", "here", "between", "both", "life", "being",
    "under", "never", "day", "same", "another", "know", "while", "last", "might", "us",
    "great", "old", "year", "off", "come", "since", "against", "go", "came", "right",
    "used", "take", "three", "states", "himself", "few", "house", "use", "during",
    "without", "again", "place", "around", "however", "home", "small", "found", "thought",
    "went", "say", "part", "once", "general", "high", "upon", "school", "every", "does",
    "got", "united", "left", "number", "course", "war", "until", "always", "away",
    "something", "fact", "though", "water", "less", "public", "put", "think", "almost",
    "hand", "enough", "far", "took", "head", "yet", "government", "system", "better",
    "set", "told", "nothing", "night", "end", "why", "called", "didn", "eyes", "find",
    "going", "look", "asked", "later", "knew", "point", "next", "program", "city",
    "business", "give", "group", "toward", "young", "days", "let", "room", "within",
    "children", "side", "social", "given", "order", "often", "among", "important",
    "early", "possible", "became", "case", "large", "need", "big", "four", "felt",
    "along", "best", "rather", "several", "national", "second", "area", "ever",
    "word", "thing", "read", "result", "study", "method", "section", "process",
    "analysis", "research", "present", "different", "example", "information",
};
constexpr size_t kWordCount = sizeof(kWords) / sizeof(kWords[0]);

// A fixed pool of common CJK characters; coverage does not matter, only that
// each occupies three UTF-8 bytes and is not a delimiter.
std::vector<std::string> cjk_pool() {
    std::vector<std::string> pool;
    pool.reserve(512);
    for (char32_t cp = 0x4E00; cp < 0x4E00 + 512; ++cp) {
        std::string utf8;
        utf8 += static_cast<char>(0xE0 | (cp >> 12));
        utf8 += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        utf8 += static_cast<char>(0x80 | (cp & 0x3F));
        pool.push_back(std::move(utf8));
    }
    return pool;
}

void append_sentence(std::string& out, Rng& rng, size_t& line_len) {
    const size_t words = rng.between(8, 18);
    const size_t comma_at = words > 9 && rng.chance(55) ? rng.between(3, words - 3) : 0;
    for (size_t w = 0; w < words; ++w) {
        std::string word = kWords[rng.next(kWordCount)];
        if (w == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
        if (w > 0) {
            if (line_len + word.size() > 78) {
                out += '\n';
                line_len = 0;
            } else {
                out += ' ';
                ++line_len;
            }
        }
        out += word;
        line_len += word.size();
        if (comma_at != 0 && w == comma_at) {
            out += ',';
            ++line_len;
        }
    }
    out += '.';
    ++line_len;
}

std::string prose_paragraph(Rng& rng, size_t sentences) {
    std::string out;
    size_t line_len = 0;
    for (size_t s = 0; s < sentences; ++s) {
        if (s > 0) {
            if (line_len + 1 > 78) {
                out += '\n';
                line_len = 0;
            } else {
                out += ' ';
                ++line_len;
            }
        }
        append_sentence(out, rng, line_len);
    }
    return out;
}

const char* const kSurnames[] = {
    "Chang", "Lee", "Smith", "Jones", "Wang", "Garcia", "Kumar", "Brown", "Chen",
    "Davis", "Miller", "Wilson", "Moore", "Taylor", "Thomas", "White", "Harris",
    "Martin", "Lewis", "Clark", "Young", "Hall", "Allen", "King", "Wright",
};
constexpr size_t kSurnameCount = sizeof(kSurnames) / sizeof(kSurnames[0]);

const char* const kJournals[] = {
    "Nucleic Acids Res", "J Mol Biol", "Bioinformatics", "Genome Biol", "Nature",
    "Science", "Cell", "PLoS One", "BMC Genomics", "Brief Bioinform",
};
constexpr size_t kJournalCount = sizeof(kJournals) / sizeof(kJournals[0]);

std::string citation_line(Rng& rng, size_t index) {
    std::string line = std::to_string(index) + ". ";
    const size_t authors = rng.between(1, 3);
    for (size_t a = 0; a < authors; ++a) {
        line += static_cast<char>('A' + rng.next(26));
        line += ". ";
        if (rng.chance(50)) {
            line += static_cast<char>('A' + rng.next(26));
            line += ". ";
        }
        line += kSurnames[rng.next(kSurnameCount)];
        line += a + 1 < authors ? ", " : "";
    }
    if (rng.chance(40)) line += ", et al.";
    line += "; ";
    const size_t title_words = rng.between(3, 7);
    for (size_t w = 0; w < title_words; ++w) {
        std::string word = kWords[rng.next(kWordCount)];
        if (w == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
        line += word;
        line += w + 1 < title_words ? " " : ". ";
    }
    line += kJournals[rng.next(kJournalCount)];
    if (rng.chance(15)) line += " & Methods";
    line += ' ';
    line += std::to_string(rng.between(1, 99));
    if (rng.chance(60)) {
        line += ": ";
    } else {
        line += ", ";
    }
    const uint64_t page = rng.between(1, 1800);
    line += std::to_string(page) + "-" + std::to_string(page + rng.between(2, 40));
    line += " (" + std::to_string(rng.between(1988, 2023)) + ")";
    if (rng.chance(30))
        line += "; doi 10." + std::to_string(rng.between(1000, 9999)) + "/x" +
                std::to_string(rng.between(100, 999));
    line += rng.chance(25) ? ";" : ".";
    if (rng.chance(10)) line += " *";
    return line;
}

} // namespace

std::string english_corpus(size_t min_bytes, uint64_t seed) {
    Rng rng(seed);
    std::string out;
    out.reserve(min_bytes + 1024);
    while (out.size() < min_bytes) {
        if (!out.empty()) out += "\n\n";
        out += prose_paragraph(rng, rng.between(3, 7));
    }
    out += '\n';
    return out;
}

std::string chinese_corpus(size_t min_bytes, uint64_t seed) {
    Rng rng(seed);
    const std::vector<std::string> pool = cjk_pool();
    // Full-width punctuation: ideographic comma, full stop, comma, colon.
    const char* const fullwidth[] = {"\xE3\x80\x81", "\xE3\x80\x82", "\xEF\xBC\x8C",
                                     "\xEF\xBC\x9A"};
    std::string out;
    out.reserve(min_bytes + 1024);
    size_t tokens_on_line = 0;
    bool last_was_halfwidth = false;
    while (out.size() < min_bytes) {
        const uint64_t kind = rng.next(100);
        if (kind < 70) {
            out += pool[rng.next(pool.size())];
            last_was_halfwidth = false;
        } else if (kind < 95) {
            // Half-width fragment: a digit, letter, or punctuation mark that
            // stands as its own one-to-two-byte token between CJK characters.
            if (last_was_halfwidth) out += ' ';
            const char* const frag[] = {"1", "9", "x", "p", ",", ")", "(", "3", "a", "%"};
            out += frag[rng.next(10)];
            if (rng.chance(20)) out += static_cast<char>('0' + rng.next(10));
            last_was_halfwidth = true;
        } else {
            out += fullwidth[rng.next(4)];
            last_was_halfwidth = false;
        }
        if (++tokens_on_line >= 40 && rng.chance(30)) {
            out += '\n';
            tokens_on_line = 0;
            last_was_halfwidth = false;
        }
    }
    out += '\n';
    return out;
}

std::vector<LabeledDoc> labeled_ref_corpus(size_t doc_count, uint64_t seed) {
    Rng rng(seed);
    std::vector<LabeledDoc> docs;
    docs.reserve(doc_count);
    for (size_t d = 0; d < doc_count; ++d) {
        std::vector<std::string> lines;
        std::vector<bool> labels;
        const size_t paragraphs = rng.between(2, 4);
        for (size_t p = 0; p < paragraphs; ++p) {
            std::string para = prose_paragraph(rng, rng.between(3, 6));
            size_t start = 0;
            while (start <= para.size()) {
                size_t nl = para.find('\n', start);
                if (nl == std::string::npos) {
                    if (start < para.size()) {
                        lines.push_back(para.substr(start));
                        labels.push_back(false);
                    }
                    break;
                }
                lines.push_back(para.substr(start, nl - start));
                labels.push_back(false);
                start = nl + 1;
            }
        }
        const bool has_refs = d % 2 == 0; // exactly half the corpus
        if (has_refs) {
            const size_t block = rng.between(5, 14);
            std::vector<std::string> cite_lines;
            for (size_t i = 0; i < block; ++i) cite_lines.push_back(citation_line(rng, i + 1));
            // Mostly a trailing bibliography, sometimes mid-document.
            size_t at = rng.chance(70) || lines.size() < 5 ? lines.size()
                                                           : rng.between(2, lines.size() - 2);
            lines.insert(lines.begin() + at, cite_lines.begin(), cite_lines.end());
            labels.insert(labels.begin() + at, block, true);
        }
        LabeledDoc doc;
        for (size_t i = 0; i < lines.size(); ++i) {
            if (i > 0) doc.text += '\n';
            doc.text += lines[i];
        }
        doc.line_is_ref = std::move(labels);
        docs.push_back(std::move(doc));
    }
    return docs;
}

double roc_auc(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("scores and labels differ in length");
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    size_t positives = 0;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
        for (size_t k = i; k < j; ++k) {
            if (labels[order[k]]) {
                positive_rank_sum += avg_rank;
                ++positives;
            }
        }
        i = j;
    }
    const size_t negatives = scores.size() - positives;
    if (positives == 0 || negatives == 0)
        throw std::invalid_argument("roc_auc needs both classes present");
    const double n_pos = static_cast<double>(positives);
    return (positive_rank_sum - n_pos * (n_pos + 1.0) / 2.0) /
           (n_pos * static_cast<double>(negatives));
}

} // namespace pbsearch::synth
