#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

namespace pbsearch {

/// One scored feature of the line classifier.
struct RefPattern {
    std::string name;
    std::string regex_text;
    double weight = 0.0;
    boost::regex compiled;
};

/// Lines of `text` split on LF, as (byte offset, content) pairs. Content
/// excludes the LF but keeps a trailing CR if present, so offsets and
/// lengths always refer to original bytes.
struct LineSpan {
    uint64_t byte_offset = 0;
    std::string_view content;
};
std::vector<LineSpan> split_lines(std::string_view text);

/// Logistic per-line classifier flagging bibliography/reference lines.
/// Feature j of a line is the non-overlapping match count of pattern j
/// divided by the line's character count; rows are averaged over a
/// 3-line window before scoring sigmoid(row · weights + intercept).
class RefModel {
  public:
    struct StripResult {
        std::string body;                    // kept lines joined with '\n'
        std::vector<uint64_t> ref_lines;     // 0-based indices of removed lines
        std::vector<double> probabilities;   // per input line
    };

    /// The stock model: the 19 built-in patterns with their trained weights
    /// and an intercept calibrated on the bundled synthetic corpus.
    static RefModel builtin();

    /// Parses the TSV model format: `name<TAB>regex<TAB>weight` rows with a
    /// final `INTERCEPT<TAB>-<TAB>value` row. Throws ValidationError on
    /// malformed rows or regexes that do not compile.
    static RefModel parse(std::string_view tsv);
    static RefModel load(const std::filesystem::path& path);
    std::string to_tsv() const;

    size_t pattern_count() const { return patterns_.size(); }
    const std::vector<RefPattern>& patterns() const { return patterns_; }
    double intercept() const { return intercept_; }
    void set_intercept(double c) { intercept_ = c; }
    double threshold() const { return threshold_; }
    void set_threshold(double t);

    /// Per-pattern density vector for one line (no smoothing).
    std::vector<double> pattern_density(std::string_view line) const;

    /// Windowed moving average across rows, truncated at the edges.
    /// `window` must be odd and >= 1.
    static std::vector<std::vector<double>> smooth(const std::vector<std::vector<double>>& rows,
                                                   int window = 3);

    /// sigmoid(row · W + c) for one smoothed row.
    double classify(const std::vector<double>& smoothed_row) const;

    /// Probability per line of `text` (density → smooth → classify).
    std::vector<double> line_probabilities(std::string_view text) const;

    /// Removes every line with probability >= threshold.
    StripResult strip_references(std::string_view text) const;

  private:
    std::vector<RefPattern> patterns_;
    double intercept_ = 0.0;
    double threshold_ = 0.5;
};

} // namespace pbsearch
