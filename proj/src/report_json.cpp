#include "pbsearch/report_json.hpp"

#include <json.hpp>

#include "pbsearch/errors.hpp"

namespace pbsearch {

using nlohmann::json;

namespace {

ReportMeta base_meta(const PlagiarismReport& report) {
    ReportMeta meta;
    meta.query_id = report.query_id;
    meta.query_word_count = report.query_word_count;
    meta.longest_ccw = report.longest_ccw;
    meta.coverage_percent = report.coverage_percent;
    for (const MatchRecord& rec : report.matches) {
        MatchMeta m;
        m.query_start = rec.query_start;
        m.query_end = rec.query_end;
        m.ref_doc_id = rec.ref_doc_id;
        m.ref_start = rec.ref_start;
        m.ref_end = rec.ref_end;
        for (const GapSpan& g : rec.gaps) {
            m.mismatch_gaps.push_back(g.length);
            m.gap_offsets.push_back(g.offset);
        }
        meta.matches.push_back(std::move(m));
    }
    return meta;
}

json meta_to_value(const ReportMeta& meta) {
    json matches = json::array();
    for (const MatchMeta& m : meta.matches) {
        matches.push_back({{"queryStart", m.query_start},
                           {"queryEnd", m.query_end},
                           {"refDocId", m.ref_doc_id},
                           {"refTitle", m.ref_title},
                           {"refUrl", m.ref_url},
                           {"refStart", m.ref_start},
                           {"refEnd", m.ref_end},
                           {"mismatchGaps", m.mismatch_gaps},
                           {"gapOffsets", m.gap_offsets}});
    }
    return json{{"queryId", meta.query_id},
                {"queryWordCount", meta.query_word_count},
                {"longestCcw", meta.longest_ccw},
                {"coveragePercent", meta.coverage_percent},
                {"matches", std::move(matches)}};
}

template <typename T>
T require(const json& obj, const char* key) {
    if (!obj.contains(key))
        throw ValidationError(std::string("result metadata is missing '") + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("result metadata field '") + key +
                              "' has the wrong type");
    }
}

ReportMeta meta_from_value(const json& value) {
    if (!value.is_object()) throw ValidationError("result metadata must be a JSON object");
    ReportMeta meta;
    meta.query_id = require<std::string>(value, "queryId");
    meta.query_word_count = require<uint64_t>(value, "queryWordCount");
    meta.longest_ccw = require<uint64_t>(value, "longestCcw");
    meta.coverage_percent = require<double>(value, "coveragePercent");
    const json matches = require<json>(value, "matches");
    if (!matches.is_array()) throw ValidationError("'matches' must be an array");
    for (const json& entry : matches) {
        MatchMeta m;
        m.query_start = require<uint64_t>(entry, "queryStart");
        m.query_end = require<uint64_t>(entry, "queryEnd");
        m.ref_doc_id = require<uint32_t>(entry, "refDocId");
        m.ref_title = require<std::string>(entry, "refTitle");
        m.ref_url = require<std::string>(entry, "refUrl");
        m.ref_start = require<uint64_t>(entry, "refStart");
        m.ref_end = require<uint64_t>(entry, "refEnd");
        m.mismatch_gaps = require<std::vector<uint32_t>>(entry, "mismatchGaps");
        if (entry.contains("gapOffsets"))
            m.gap_offsets = require<std::vector<uint64_t>>(entry, "gapOffsets");
        if (m.query_end < m.query_start || m.ref_end < m.ref_start)
            throw ValidationError("result metadata contains an inverted word range");
        if (!m.gap_offsets.empty() && m.gap_offsets.size() != m.mismatch_gaps.size())
            throw ValidationError("gapOffsets and mismatchGaps lengths disagree");
        meta.matches.push_back(std::move(m));
    }
    return meta;
}

} // namespace

ReportMeta to_meta(const PlagiarismReport& report, const CorpusDb& db) {
    ReportMeta meta = base_meta(report);
    for (MatchMeta& m : meta.matches) {
        const DocRegistryEntry& entry = db.doc(m.ref_doc_id);
        m.ref_title = entry.title;
        m.ref_url = entry.url;
    }
    return meta;
}

ReportMeta to_meta(const PlagiarismReport& report, const std::vector<PbsDocument>& docs) {
    ReportMeta meta = base_meta(report);
    for (MatchMeta& m : meta.matches) m.ref_title = docs.at(m.ref_doc_id).id;
    return meta;
}

std::string meta_to_json(const ReportMeta& meta, int indent) {
    return meta_to_value(meta).dump(indent);
}

std::string meta_list_to_json(const std::vector<ReportMeta>& metas, int indent) {
    json list = json::array();
    for (const ReportMeta& meta : metas) list.push_back(meta_to_value(meta));
    return list.dump(indent);
}

ReportMeta meta_from_json(const std::string& text) {
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) throw ValidationError("result metadata is not valid JSON");
    return meta_from_value(value);
}

std::vector<ReportMeta> meta_list_from_json(const std::string& text) {
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) throw ValidationError("result metadata is not valid JSON");
    if (!value.is_array()) throw ValidationError("pairwise metadata must be a JSON array");
    std::vector<ReportMeta> metas;
    for (const json& entry : value) metas.push_back(meta_from_value(entry));
    return metas;
}

} // namespace pbsearch
