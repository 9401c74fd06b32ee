#include "pbsearch/html_report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "pbsearch/errors.hpp"

namespace pbsearch {

std::string html_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

namespace {

struct ByteRange {
    size_t begin = 0;
    size_t end = 0;
    size_t match = 0; // index into meta.matches
    bool gap = false;
};

std::string format_percent(double value) {
    std::ostringstream out;
    out.precision(1);
    out << std::fixed << value;
    return out.str();
}

const char kStyle[] = R"(
:root { color-scheme: light; }
body { margin: 0; font: 15px/1.55 Georgia, 'Times New Roman', serif; color: #1d2129; background: #f6f4ef; }
header { background: #243447; color: #f2f5f8; padding: 18px 28px; }
header h1 { margin: 0 0 6px; font-size: 20px; font-weight: 600; }
header .stats { font: 13px/1.4 'Helvetica Neue', Arial, sans-serif; color: #b9c6d4; }
header .stats b { color: #fff; font-size: 15px; }
main { display: flex; gap: 0; align-items: flex-start; }
#text { flex: 3; padding: 24px 28px; white-space: pre-wrap; overflow-wrap: anywhere; background: #fffdf8; border-right: 1px solid #ddd6c8; min-height: 70vh; }
#matches { flex: 2; padding: 18px 20px; font-family: 'Helvetica Neue', Arial, sans-serif; position: sticky; top: 0; max-height: 100vh; overflow-y: auto; box-sizing: border-box; }
.seg { border-radius: 2px; }
.seg.m { background: #ffe08a; box-shadow: 0 1px 0 #e0b94f; cursor: pointer; }
.seg.g { background: #f3e9d2; border-bottom: 2px dotted #b59a55; cursor: pointer; }
.seg.active { background: #ffb347; box-shadow: 0 1px 0 #d18616; }
.seg.g.active { background: #f5d9a8; }
.card { border: 1px solid #d5cdbc; border-left: 4px solid #e0b94f; border-radius: 4px; background: #fff; padding: 10px 12px; margin-bottom: 10px; font-size: 13px; cursor: pointer; }
.card.active { border-left-color: #d18616; background: #fff7e6; }
.card h3 { margin: 0 0 4px; font-size: 14px; }
.card a { color: #1a5d9e; word-break: break-all; }
.card .range { color: #555; }
.card .gaps { color: #8a6d1f; }
.empty { color: #666; font-style: italic; }
footer { padding: 10px 28px 26px; font: 12px 'Helvetica Neue', Arial, sans-serif; color: #777; background: #f6f4ef; }
)";

const char kScript[] = R"(
function ids(el) { return (el.dataset.m || '').split(',').filter(Boolean); }
function setActive(list, on) {
  document.querySelectorAll('[data-m]').forEach(function (el) {
    if (ids(el).some(function (id) { return list.indexOf(id) >= 0; }))
      el.classList.toggle('active', on);
  });
}
document.querySelectorAll('[data-m]').forEach(function (el) {
  el.addEventListener('mouseenter', function () { setActive(ids(el), true); });
  el.addEventListener('mouseleave', function () { setActive(ids(el), false); });
});
)";

} // namespace

std::string render_html_report(std::string_view source_text, const OffsetMap& map,
                               const ReportMeta& meta) {
    // Every word index in the metadata must resolve through the local map.
    for (const MatchMeta& m : meta.matches) {
        if (m.query_end > map.rows.size() || m.query_start >= m.query_end)
            throw ValidationError("match word range does not fit the local offset map");
        for (size_t g = 0; g < m.gap_offsets.size(); ++g)
            if (m.gap_offsets[g] + m.mismatch_gaps[g] > m.query_end - m.query_start)
                throw ValidationError("gap range does not fit its match");
    }

    // Byte ranges for matches and their interior gaps, then a segmentation
    // of the text at every range boundary.
    std::vector<ByteRange> ranges;
    for (size_t i = 0; i < meta.matches.size(); ++i) {
        const MatchMeta& m = meta.matches[i];
        ranges.push_back({map.rows[m.query_start].byte_start,
                          map.rows[m.query_end - 1].byte_end, i, false});
        for (size_t g = 0; g < m.gap_offsets.size(); ++g) {
            const uint64_t from = m.query_start + m.gap_offsets[g];
            const uint64_t to = from + m.mismatch_gaps[g];
            ranges.push_back(
                {map.rows[from].byte_start, map.rows[to - 1].byte_end, i, true});
        }
    }

    std::set<size_t> cuts{0, source_text.size()};
    for (const ByteRange& r : ranges) {
        cuts.insert(std::min(r.begin, source_text.size()));
        cuts.insert(std::min(r.end, source_text.size()));
    }

    std::string text_html;
    for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
        const size_t begin = *it;
        const size_t end = *std::next(it);
        std::string covering;
        bool any_match = false;
        bool all_gap = true;
        for (const ByteRange& r : ranges) {
            if (r.begin <= begin && end <= r.end && !r.gap) {
                if (!covering.empty()) covering += ',';
                covering += std::to_string(r.match);
                any_match = true;
            }
        }
        for (const ByteRange& r : ranges)
            if (r.begin <= begin && end <= r.end && !r.gap) {
                bool inside_gap = false;
                for (const ByteRange& g : ranges)
                    if (g.gap && g.match == r.match && g.begin <= begin && end <= g.end)
                        inside_gap = true;
                if (!inside_gap) all_gap = false;
            }
        const std::string escaped = html_escape(source_text.substr(begin, end - begin));
        if (!any_match) {
            text_html += escaped;
        } else {
            text_html += "<span class=\"seg ";
            text_html += all_gap ? "g" : "m";
            text_html += "\" data-m=\"" + covering + "\">" + escaped + "</span>";
        }
    }

    std::string cards;
    for (size_t i = 0; i < meta.matches.size(); ++i) {
        const MatchMeta& m = meta.matches[i];
        cards += "<div class=\"card\" data-m=\"" + std::to_string(i) + "\">";
        cards += "<h3>" + html_escape(m.ref_title.empty() ? "(untitled source)" : m.ref_title) +
                 "</h3>";
        if (!m.ref_url.empty())
            cards += "<div><a href=\"" + html_escape(m.ref_url) + "\">" + html_escape(m.ref_url) +
                     "</a></div>";
        cards += "<div class=\"range\">query words " + std::to_string(m.query_start) + "&ndash;" +
                 std::to_string(m.query_end) + " &middot; source words " +
                 std::to_string(m.ref_start) + "&ndash;" + std::to_string(m.ref_end) + "</div>";
        const uint64_t span = m.query_end - m.query_start;
        uint64_t gap_words = 0;
        for (uint32_t g : m.mismatch_gaps) gap_words += g;
        cards += "<div class=\"gaps\">" + std::to_string(span - gap_words) + " of " +
                 std::to_string(span) + " words identical";
        if (!m.mismatch_gaps.empty())
            cards += ", " + std::to_string(m.mismatch_gaps.size()) + " mismatch gap" +
                     (m.mismatch_gaps.size() == 1 ? "" : "s");
        cards += "</div></div>\n";
    }
    if (meta.matches.empty())
        cards = "<p class=\"empty\">No duplicated passages were reported.</p>";

    std::string title = html_escape(meta.query_id.empty() ? "document" : meta.query_id);
    std::ostringstream page;
    page << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
         << "<meta name=\"viewport\" content=\"width=device-width, initial-scale=1\">\n"
         << "<title>Similarity report &mdash; " << title << "</title>\n<style>" << kStyle
         << "</style>\n</head>\n<body>\n<header>\n<h1>Similarity report &mdash; " << title
         << "</h1>\n<div class=\"stats\">copy coverage <b>"
         << format_percent(meta.coverage_percent) << "%</b> &nbsp;&middot;&nbsp; longest run <b>"
         << meta.longest_ccw << "</b> words &nbsp;&middot;&nbsp; " << meta.query_word_count
         << " words scanned &nbsp;&middot;&nbsp; " << meta.matches.size() << " match"
         << (meta.matches.size() == 1 ? "" : "es");
    if (!map.stripped_lines.empty())
        page << " &nbsp;&middot;&nbsp; " << map.stripped_lines.size()
             << " reference lines excluded at encode time";
    page << "</div>\n</header>\n<main>\n<div id=\"text\">" << text_html
         << "</div>\n<div id=\"matches\">\n" << cards << "</div>\n</main>\n<footer>"
         << "Rendered locally from downloaded match positions; the document text above never "
            "left this machine.</footer>\n<script>"
         << kScript << "</script>\n</body>\n</html>\n";
    return page.str();
}

} // namespace pbsearch
