#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pbsearch/corpus_db.hpp"
#include "pbsearch/detector.hpp"
#include "pbsearch/encoder.hpp"
#include "pbsearch/errors.hpp"
#include "pbsearch/eval.hpp"
#include "pbsearch/fm_index.hpp"
#include "pbsearch/html_report.hpp"
#include "pbsearch/io_util.hpp"
#include "pbsearch/ref_filter.hpp"
#include "pbsearch/report_json.hpp"
#include "pbsearch/service.hpp"
#include "pbsearch/synth.hpp"
#include "pbsearch/tokenizer.hpp"
#include "pbsearch/zipfile.hpp"

namespace py = pybind11;
using namespace pbsearch;

PYBIND11_MODULE(_core, m) {
    m.doc() = "privacy-preserving duplicate detection over irreversibly encoded text";

    auto base = py::register_exception<Error>(m, "PbsError");
    py::register_exception<EncodingError>(m, "EncodingError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<LoadError>(m, "LoadError", base.ptr());

    py::class_<Alphabet>(m, "Alphabet")
        .def(py::init<int>(), py::arg("size") = 12)
        .def_property_readonly("size", &Alphabet::size)
        .def_property_readonly("chars", [](const Alphabet& a) { return std::string(a.chars()); })
        .def("contains", &Alphabet::contains, py::arg("c"))
        .def("__len__", &Alphabet::size)
        .def("__repr__", [](const Alphabet& a) {
            return "Alphabet(" + std::to_string(a.size()) + ")";
        });

    py::class_<Token>(m, "Token")
        .def_readonly("word_index", &Token::word_index)
        .def_readonly("byte_start", &Token::byte_start)
        .def_readonly("byte_end", &Token::byte_end)
        .def_property_readonly("eastern",
                               [](const Token& t) { return t.kind == TokenKind::EasternChar; })
        .def("__repr__", [](const Token& t) {
            return "Token(" + std::to_string(t.word_index) + ", [" + std::to_string(t.byte_start) +
                   ", " + std::to_string(t.byte_end) + "))";
        });

    m.def("tokenize", &tokenize, py::arg("text"));
    m.def("codepoint_sum", &codepoint_sum, py::arg("word"));
    m.def("encode_word", &encode_word, py::arg("word"), py::arg("alphabet"));
    m.def("encode_document", &encode_document, py::arg("id"), py::arg("text"),
          py::arg("alphabet"));

    py::class_<PbsDocument>(m, "PbsDocument")
        .def_readonly("id", &PbsDocument::id)
        .def_readonly("pbs", &PbsDocument::pbs)
        .def_readonly("map", &PbsDocument::map);

    py::class_<FastaRecord>(m, "FastaRecord")
        .def_readonly("description", &FastaRecord::description)
        .def_readonly("sequence", &FastaRecord::sequence);

    m.def("write_fasta", &write_fasta, py::arg("doc"), py::arg("description"),
          py::arg("width") = 80);
    m.def("parse_fasta", &parse_fasta, py::arg("text"));

    py::class_<OffsetMap>(m, "OffsetMap")
        .def(py::init<>())
        .def_readwrite("source_sha256_hex", &OffsetMap::source_sha256_hex)
        .def_readwrite("stripped_lines", &OffsetMap::stripped_lines)
        .def_readwrite("rows", &OffsetMap::rows);

    m.def("write_offset_map", &write_offset_map, py::arg("map"));
    m.def("parse_offset_map", &parse_offset_map, py::arg("text"));
    m.def("sha256_hex", &io::sha256_hex, py::arg("data"));

    py::class_<FmIndex>(m, "FmIndex")
        .def_static(
            "build",
            [](std::string_view text, const Alphabet& alphabet) {
                return FmIndex::build(text, alphabet);
            },
            py::arg("text"), py::arg("alphabet") = Alphabet(12))
        .def("count",
             [](const FmIndex& f, std::string_view p) { return f.backward_search(p).count(); },
             py::arg("pattern"))
        .def("backward_search",
             [](const FmIndex& f, std::string_view p) {
                 SaRange r = f.backward_search(p);
                 return std::make_pair(r.lo, r.hi);
             },
             py::arg("pattern"))
        .def("locate",
             [](const FmIndex& f, std::string_view p) { return f.locate(f.backward_search(p)); },
             py::arg("pattern"))
        .def_property_readonly("text_length", &FmIndex::text_length)
        .def("extract_text", &FmIndex::extract_text)
        .def("save",
             [](const FmIndex& f, const std::filesystem::path& path) { f.save(path); },
             py::arg("path"))
        .def_static(
            "load", [](const std::filesystem::path& path) { return FmIndex::load(path); },
            py::arg("path"));

    py::class_<DocumentInput>(m, "DocumentInput")
        .def(py::init([](std::string title, std::string text, std::string url) {
                 DocumentInput d;
                 d.title = std::move(title);
                 d.text = std::move(text);
                 d.url = std::move(url);
                 return d;
             }),
             py::arg("title"), py::arg("text"), py::arg("url") = "")
        .def_readwrite("title", &DocumentInput::title)
        .def_readwrite("url", &DocumentInput::url)
        .def_readwrite("text", &DocumentInput::text);

    py::class_<DocRegistryEntry>(m, "DocRegistryEntry")
        .def_readonly("title", &DocRegistryEntry::title)
        .def_readonly("url", &DocRegistryEntry::url)
        .def_readonly("word_offset", &DocRegistryEntry::word_offset)
        .def_readonly("word_count", &DocRegistryEntry::word_count);

    py::class_<CorpusDb>(m, "CorpusDb")
        .def_static(
            "ingest",
            [](const std::vector<DocumentInput>& docs, const Alphabet& alphabet) {
                return CorpusDb::ingest(docs, alphabet);
            },
            py::arg("documents"), py::arg("alphabet") = Alphabet(12))
        .def_static(
            "from_encoded",
            [](const std::vector<DocumentInput>& docs, const Alphabet& alphabet) {
                return CorpusDb::from_encoded(docs, alphabet);
            },
            py::arg("documents"), py::arg("alphabet") = Alphabet(12))
        .def_property_readonly("doc_count", &CorpusDb::doc_count)
        .def_property_readonly("total_words", &CorpusDb::total_words)
        .def_property_readonly("alphabet", &CorpusDb::alphabet)
        .def("doc", &CorpusDb::doc, py::arg("doc_id"))
        .def("save",
             [](const CorpusDb& db, const std::filesystem::path& path) { db.save(path); },
             py::arg("path"))
        .def_static(
            "load", [](const std::filesystem::path& path) { return CorpusDb::load(path); },
            py::arg("path"));

    py::class_<DetectorOptions>(m, "DetectorOptions")
        .def(py::init([](uint32_t seed_k, uint32_t max_gap, uint32_t min_report) {
                 return DetectorOptions{seed_k, max_gap, min_report};
             }),
             py::arg("seed_k") = 8, py::arg("max_gap") = 3, py::arg("min_report") = 12)
        .def_readwrite("seed_k", &DetectorOptions::seed_k)
        .def_readwrite("max_gap", &DetectorOptions::max_gap)
        .def_readwrite("min_report", &DetectorOptions::min_report);

    py::class_<GapSpan>(m, "GapSpan")
        .def_readonly("offset", &GapSpan::offset)
        .def_readonly("length", &GapSpan::length);

    py::class_<MatchRecord>(m, "MatchRecord")
        .def_readonly("query_start", &MatchRecord::query_start)
        .def_readonly("query_end", &MatchRecord::query_end)
        .def_readonly("ref_doc_id", &MatchRecord::ref_doc_id)
        .def_readonly("ref_start", &MatchRecord::ref_start)
        .def_readonly("ref_end", &MatchRecord::ref_end)
        .def_readonly("matched_words", &MatchRecord::matched_words)
        .def_readonly("gaps", &MatchRecord::gaps)
        .def_property_readonly("span", &MatchRecord::span)
        .def_property_readonly("longest_run", &MatchRecord::longest_run);

    py::class_<PlagiarismReport>(m, "PlagiarismReport")
        .def_readonly("query_id", &PlagiarismReport::query_id)
        .def_readonly("query_word_count", &PlagiarismReport::query_word_count)
        .def_readonly("longest_ccw", &PlagiarismReport::longest_ccw)
        .def_readonly("coverage_percent", &PlagiarismReport::coverage_percent)
        .def_readonly("matches", &PlagiarismReport::matches);

    m.def(
        "search_pbs",
        [](const CorpusDb& db, std::string_view id, std::string_view pbs,
           const DetectorOptions& opts) { return search_pbs(db, id, pbs, opts); },
        py::arg("db"), py::arg("query_id"), py::arg("pbs"),
        py::arg("options") = DetectorOptions{});
    m.def(
        "search_document",
        [](const CorpusDb& db, const PbsDocument& doc, const DetectorOptions& opts) {
            return search_document(db, doc, opts);
        },
        py::arg("db"), py::arg("doc"), py::arg("options") = DetectorOptions{});
    m.def(
        "pairwise",
        [](const std::vector<PbsDocument>& docs, const Alphabet& alphabet,
           const DetectorOptions& opts) { return pairwise(docs, alphabet, opts); },
        py::arg("docs"), py::arg("alphabet") = Alphabet(12),
        py::arg("options") = DetectorOptions{});

    py::class_<MatchMeta>(m, "MatchMeta")
        .def_readonly("query_start", &MatchMeta::query_start)
        .def_readonly("query_end", &MatchMeta::query_end)
        .def_readonly("ref_doc_id", &MatchMeta::ref_doc_id)
        .def_readonly("ref_title", &MatchMeta::ref_title)
        .def_readonly("ref_url", &MatchMeta::ref_url)
        .def_readonly("ref_start", &MatchMeta::ref_start)
        .def_readonly("ref_end", &MatchMeta::ref_end)
        .def_readonly("mismatch_gaps", &MatchMeta::mismatch_gaps)
        .def_readonly("gap_offsets", &MatchMeta::gap_offsets);

    py::class_<ReportMeta>(m, "ReportMeta")
        .def_readonly("query_id", &ReportMeta::query_id)
        .def_readonly("query_word_count", &ReportMeta::query_word_count)
        .def_readonly("longest_ccw", &ReportMeta::longest_ccw)
        .def_readonly("coverage_percent", &ReportMeta::coverage_percent)
        .def_readonly("matches", &ReportMeta::matches);

    m.def("to_meta",
          [](const PlagiarismReport& r, const CorpusDb& db) { return to_meta(r, db); },
          py::arg("report"), py::arg("db"));
    m.def("to_meta",
          [](const PlagiarismReport& r, const std::vector<PbsDocument>& docs) {
              return to_meta(r, docs);
          },
          py::arg("report"), py::arg("docs"));
    m.def("meta_to_json", &meta_to_json, py::arg("meta"), py::arg("indent") = 2);
    m.def("meta_list_to_json", &meta_list_to_json, py::arg("metas"), py::arg("indent") = 2);
    m.def("meta_from_json", &meta_from_json, py::arg("text"));
    m.def("meta_list_from_json", &meta_list_from_json, py::arg("text"));
    m.def("render_html_report", &render_html_report, py::arg("source_text"), py::arg("map"),
          py::arg("meta"));

    py::class_<RefModel::StripResult>(m, "StripResult")
        .def_readonly("body", &RefModel::StripResult::body)
        .def_readonly("ref_lines", &RefModel::StripResult::ref_lines)
        .def_readonly("probabilities", &RefModel::StripResult::probabilities);

    py::class_<RefModel>(m, "RefModel")
        .def_static("builtin", &RefModel::builtin)
        .def_static("parse", &RefModel::parse, py::arg("tsv"))
        .def_static(
            "load", [](const std::filesystem::path& path) { return RefModel::load(path); },
            py::arg("path"))
        .def("to_tsv", &RefModel::to_tsv)
        .def_property_readonly("pattern_count", &RefModel::pattern_count)
        .def_property("intercept", &RefModel::intercept, &RefModel::set_intercept)
        .def_property("threshold", &RefModel::threshold, &RefModel::set_threshold)
        .def("line_probabilities", &RefModel::line_probabilities, py::arg("text"))
        .def("strip_references", &RefModel::strip_references, py::arg("text"));

    py::class_<ZipEntry>(m, "ZipEntry")
        .def(py::init([](std::string name, py::bytes data) {
                 return ZipEntry{std::move(name), std::string(data)};
             }),
             py::arg("name"), py::arg("data"))
        .def_readonly("name", &ZipEntry::name)
        .def_property_readonly("data",
                               [](const ZipEntry& e) { return py::bytes(e.data); });

    m.def("write_zip",
          [](const std::vector<ZipEntry>& entries) { return py::bytes(write_zip(entries)); },
          py::arg("entries"));
    m.def("read_zip",
          [](const py::bytes& archive) {
              std::string buf = archive;
              return read_zip(buf);
          },
          py::arg("archive"));

    py::class_<SearchService>(m, "SearchService")
        .def(py::init([](int alphabet_size, const DetectorOptions& opts) {
                 SearchService::Config cfg;
                 cfg.alphabet_size = alphabet_size;
                 cfg.detector = opts;
                 return new SearchService(cfg);
             }),
             py::arg("alphabet_size") = 12, py::arg("options") = DetectorOptions{})
        .def("set_db", [](SearchService& s, const CorpusDb& db) { s.set_db(db); }, py::arg("db"))
        .def_property_readonly("has_db", &SearchService::has_db)
        .def("handle_search",
             [](const SearchService& s, const std::string& body) {
                 SearchService::Outcome o = s.handle_search(body);
                 return std::make_pair(o.status, o.body);
             },
             py::arg("body"))
        .def("handle_pairwise",
             [](const SearchService& s, const py::bytes& body) {
                 SearchService::Outcome o = s.handle_pairwise(std::string(body));
                 return std::make_pair(o.status, o.body);
             },
             py::arg("body"))
        .def("handle_info", [](const SearchService& s) {
            SearchService::Outcome o = s.handle_info();
            return std::make_pair(o.status, o.body);
        });

    py::class_<synth::LabeledDoc>(m, "LabeledDoc")
        .def_readonly("text", &synth::LabeledDoc::text)
        .def_readonly("line_is_ref", &synth::LabeledDoc::line_is_ref);

    m.def("english_corpus", &synth::english_corpus, py::arg("min_bytes"), py::arg("seed"));
    m.def("chinese_corpus", &synth::chinese_corpus, py::arg("min_bytes"), py::arg("seed"));
    m.def("labeled_ref_corpus", &synth::labeled_ref_corpus, py::arg("doc_count"),
          py::arg("seed"));
    m.def("roc_auc", &synth::roc_auc, py::arg("scores"), py::arg("labels"));

    py::class_<eval::FpReport>(m, "FpReport")
        .def_readonly("k", &eval::FpReport::k)
        .def_readonly("a", &eval::FpReport::a)
        .def_readonly("unique_strings", &eval::FpReport::unique_strings)
        .def_readonly("colliding_strings", &eval::FpReport::colliding_strings)
        .def_property_readonly("fp_rate", &eval::FpReport::fp_rate);

    m.def("fp_rate", &eval::fp_rate, py::arg("documents"), py::arg("k"), py::arg("a"));
    m.def("sweep", &eval::sweep, py::arg("documents"),
          py::arg("ks") = std::vector<uint32_t>{8, 10, 12, 14, 16},
          py::arg("as_") = std::vector<uint32_t>{8, 12, 14, 16});
    m.def("sweep_tsv", &eval::sweep_tsv, py::arg("reports"));

    py::class_<eval::CompressionReport>(m, "CompressionReport")
        .def_readonly("raw_bytes", &eval::CompressionReport::raw_bytes)
        .def_readonly("pbs_chars", &eval::CompressionReport::pbs_chars)
        .def_readonly("db_bytes", &eval::CompressionReport::db_bytes)
        .def_property_readonly("raw_to_pbs", &eval::CompressionReport::raw_to_pbs)
        .def_property_readonly("raw_to_db", &eval::CompressionReport::raw_to_db)
        .def_property_readonly("db_to_pbs", &eval::CompressionReport::db_to_pbs);

    m.def("compression_ratio", &eval::compression_ratio, py::arg("documents"),
          py::arg("alphabet") = Alphabet(12));
}
