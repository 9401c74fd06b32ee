#pragma once

#include <string>
#include <string_view>

#include "pbsearch/encoder.hpp"
#include "pbsearch/report_json.hpp"

namespace pbsearch {

/// Renders the final report: the original plaintext with every matched word
/// range highlighted (mismatch gaps in a distinct style), a match list with
/// source titles/URLs, and the headline numbers. One self-contained HTML
/// file — inline styles and script, no network fetches. Hovering a match
/// card highlights its text range and vice versa.
///
/// `map` is the local offset sidecar produced at encode time; match word
/// indices are resolved through it and must fit within it (ValidationError
/// otherwise — the caller is expected to have checked already).
std::string render_html_report(std::string_view source_text, const OffsetMap& map,
                               const ReportMeta& meta);

std::string html_escape(std::string_view text);

} // namespace pbsearch
