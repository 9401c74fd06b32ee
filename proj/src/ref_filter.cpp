#include "pbsearch/ref_filter.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pbsearch/errors.hpp"

namespace pbsearch {

namespace {

// Calibrated on the bundled synthetic labeled corpus: the value maximizing
// line accuracy at threshold 0.5 (the trained intercept was never published
// alongside the weights). tools/calibrate_ref_model reproduces it: 99.9%
// line accuracy over 1089 labeled lines at the default seed.
constexpr double kDefaultIntercept = -0.302263;

struct BuiltinRow {
    const char* name;
    const char* regex;
    double weight;
};

// Feature battery of the line classifier. Ordering is part of the model:
// weight j belongs to pattern j.
const BuiltinRow kBuiltinRows[] = {
    {"semicolon", ";", 15.78814},
    {"initial-dot-comma", R"([A-Z]\.,)", 12.57611},
    {"asterisk", R"(\*)", 11.6191},
    {"ampersand", "&", 11.45578},
    {"bracketed-year", R"(\(\d{4}\))", 10.6957},
    {"lone-initial", R"((?<=\s)[A-Z]\.(?=\s))", 9.418422},
    {"volume-colon-pages", R"(\d{0,1}:\s*\d+[-]\d+)", 9.050281},
    {"year", R"((?<=\s)\d{4}[,\.])", 7.692744},
    {"leading-index", R"(^\s*\d{1,3}[.)\]\s])", 6.614513},
    {"dot-pages", R"([\.]\s*\d+[-]\d+)", 6.412431},
    {"space-initial-comma", R"(\s[A-Z],)", 5.971774},
    {"double-initial", R"((?<=\s)[A-Z]\.[A-Z]\.(?=\s))", 5.59754},
    {"doi", R"((?<!\w)(doi|DOI)(?!\w))", 5.075362},
    {"et-al", "et al", 2.745097},
    {"capitalized-word", R"((?<=\s)[A-Z]\w+(?=\s))", -0.35329},
    {"comma", ",", -0.71845},
    {"capital-letter", "[A-Z]", -0.81583},
    {"surname-comma", R"(\s[A-Z][a-z]+,)", -0.82969},
    {"dot-asterisk", R"(\.[*])", -1.9572},
};

boost::regex compile(const std::string& name, const std::string& text) {
    try {
        return boost::regex(text);
    } catch (const boost::regex_error& e) {
        throw ValidationError("pattern '" + name + "' does not compile: " + e.what());
    }
}

// Code points in a byte string; counts lead bytes so that malformed input
// still yields a sane positive length instead of an exception.
size_t lenient_codepoint_count(std::string_view s) {
    size_t count = 0;
    for (unsigned char b : s) count += (b & 0xC0) != 0x80;
    return count;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

} // namespace

std::vector<LineSpan> split_lines(std::string_view text) {
    std::vector<LineSpan> lines;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            // No final newline: the remainder is the last line. A text that
            // ends in '\n' contributes no extra empty line.
            if (start < text.size()) lines.push_back({start, text.substr(start)});
            break;
        }
        lines.push_back({start, text.substr(start, nl - start)});
        start = nl + 1;
    }
    return lines;
}

RefModel RefModel::builtin() {
    RefModel model;
    model.intercept_ = kDefaultIntercept;
    for (const BuiltinRow& row : kBuiltinRows) {
        RefPattern p;
        p.name = row.name;
        p.regex_text = row.regex;
        p.weight = row.weight;
        p.compiled = compile(p.name, p.regex_text);
        model.patterns_.push_back(std::move(p));
    }
    return model;
}

RefModel RefModel::parse(std::string_view tsv) {
    RefModel model;
    bool saw_intercept = false;
    size_t line_no = 0;
    for (const LineSpan& line : split_lines(tsv)) {
        ++line_no;
        std::string_view content = line.content;
        if (!content.empty() && content.back() == '\r') content.remove_suffix(1);
        if (content.empty() || content[0] == '#') continue;
        if (saw_intercept)
            throw ValidationError("model line " + std::to_string(line_no) +
                                  ": records after INTERCEPT");

        size_t tab1 = content.find('\t');
        size_t tab2 = tab1 == std::string_view::npos ? tab1 : content.find('\t', tab1 + 1);
        if (tab2 == std::string_view::npos)
            throw ValidationError("model line " + std::to_string(line_no) +
                                  ": expected name<TAB>regex<TAB>weight");
        std::string name(content.substr(0, tab1));
        std::string regex_text(content.substr(tab1 + 1, tab2 - tab1 - 1));
        std::string_view value = content.substr(tab2 + 1);

        double number = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), number);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw ValidationError("model line " + std::to_string(line_no) +
                                  ": bad numeric value '" + std::string(value) + "'");

        if (name == "INTERCEPT") {
            model.intercept_ = number;
            saw_intercept = true;
            continue;
        }
        RefPattern p;
        p.name = std::move(name);
        p.regex_text = std::move(regex_text);
        p.weight = number;
        p.compiled = compile(p.name, p.regex_text);
        model.patterns_.push_back(std::move(p));
    }
    if (model.patterns_.empty())
        throw ValidationError("model file defines no patterns");
    if (!saw_intercept)
        throw ValidationError("model file is missing the INTERCEPT record");
    return model;
}

RefModel RefModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string RefModel::to_tsv() const {
    std::ostringstream out;
    out.precision(17);
    for (const RefPattern& p : patterns_)
        out << p.name << '\t' << p.regex_text << '\t' << p.weight << '\n';
    out << "INTERCEPT\t-\t" << intercept_ << '\n';
    return out.str();
}

void RefModel::set_threshold(double t) {
    if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("threshold must lie strictly between 0 and 1");
    threshold_ = t;
}

std::vector<double> RefModel::pattern_density(std::string_view line) const {
    std::vector<double> row(patterns_.size(), 0.0);
    if (line.empty()) return row;
    const double chars = static_cast<double>(lenient_codepoint_count(line));
    for (size_t j = 0; j < patterns_.size(); ++j) {
        boost::cregex_iterator it(line.data(), line.data() + line.size(), patterns_[j].compiled);
        boost::cregex_iterator end;
        size_t count = 0;
        for (; it != end; ++it) ++count;
        row[j] = static_cast<double>(count) / chars;
    }
    return row;
}

std::vector<std::vector<double>> RefModel::smooth(const std::vector<std::vector<double>>& rows,
                                                  int window) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("smoothing window must be odd and positive");
    const int n = static_cast<int>(rows.size());
    const int half = window / 2;
    std::vector<std::vector<double>> out(rows.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        std::vector<double> acc(rows[i].size(), 0.0);
        for (int r = lo; r <= hi; ++r)
            for (size_t j = 0; j < acc.size(); ++j) acc[j] += rows[r][j];
        for (double& v : acc) v /= hi - lo + 1;
        out[i] = std::move(acc);
    }
    return out;
}

double RefModel::classify(const std::vector<double>& smoothed_row) const {
    if (smoothed_row.size() != patterns_.size())
        throw std::invalid_argument("feature row length disagrees with pattern count");
    double z = intercept_;
    for (size_t j = 0; j < patterns_.size(); ++j) z += smoothed_row[j] * patterns_[j].weight;
    return sigmoid(z);
}

std::vector<double> RefModel::line_probabilities(std::string_view text) const {
    std::vector<std::vector<double>> density;
    for (const LineSpan& line : split_lines(text)) {
        std::string_view content = line.content;
        if (!content.empty() && content.back() == '\r') content.remove_suffix(1);
        density.push_back(pattern_density(content));
    }
    std::vector<double> probabilities;
    probabilities.reserve(density.size());
    for (const std::vector<double>& row : smooth(density))
        probabilities.push_back(classify(row));
    return probabilities;
}

RefModel::StripResult RefModel::strip_references(std::string_view text) const {
    StripResult result;
    result.probabilities = line_probabilities(text);
    const std::vector<LineSpan> lines = split_lines(text);

    bool first_kept = true;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (result.probabilities[i] >= threshold_) {
            result.ref_lines.push_back(i);
            continue;
        }
        if (!first_kept) result.body += '\n';
        result.body.append(lines[i].content);
        first_kept = false;
    }
    return result;
}

} // namespace pbsearch
