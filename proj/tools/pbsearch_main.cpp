// pbsearch: encode documents locally, search them remotely, resolve the
// results locally. The server only ever sees encoded sequences.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "pbsearch/corpus_db.hpp"
#include "pbsearch/detector.hpp"
#include "pbsearch/encoder.hpp"
#include "pbsearch/errors.hpp"
#include "pbsearch/eval.hpp"
#include "pbsearch/html_report.hpp"
#include "pbsearch/io_util.hpp"
#include "pbsearch/ref_filter.hpp"
#include "pbsearch/report_json.hpp"
#include "pbsearch/service.hpp"
#include "pbsearch/tokenizer.hpp"
#include "pbsearch/zipfile.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pbsearch;

namespace {

// Exit codes: 1 unreadable file, 2 encoding failure, 3 network trouble,
// 4 server-reported error, 5 metadata/map mismatch, 6 source changed since
// encode, 7 bad manifest or database.
struct Bail {
    int code;
    std::string message;
};

[[noreturn]] void bail(int code, std::string message) { throw Bail{code, std::move(message)}; }

std::string must_read(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) bail(1, "cannot read " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) bail(1, "cannot read " + path.string());
    return data;
}

void must_write(const fs::path& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) bail(1, "cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.close();
    if (!out) bail(1, "cannot write " + path.string());
}

std::string percent(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", value);
    return buf;
}

// ---- encode ----------------------------------------------------------

// The offset map must point into the *original* file even though the
// encoder only saw the kept lines. Tokens never span lines (LF and CR are
// delimiters), so tokenizing each kept line and shifting by its offset
// reproduces the encoder's token stream exactly.
std::vector<Token> rebase_rows(std::string_view original, const std::vector<uint64_t>& dropped_lines) {
    std::unordered_set<uint64_t> dropped(dropped_lines.begin(), dropped_lines.end());
    std::vector<LineSpan> lines = split_lines(original);
    std::vector<Token> rows;
    uint64_t word = 0;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (dropped.contains(i)) continue;
        for (Token t : tokenize(lines[i].content)) {
            t.word_index = word++;
            t.byte_start += lines[i].byte_offset;
            t.byte_end += lines[i].byte_offset;
            rows.push_back(t);
        }
    }
    return rows;
}

void cmd_encode(const std::vector<std::string>& inputs, const std::string& out_dir_arg, int a,
                bool keep_refs, const std::string& model_path) {
    Alphabet alphabet(a);
    RefModel model;
    if (!keep_refs) {
        try {
            model = model_path.empty() ? RefModel::builtin() : RefModel::load(model_path);
        } catch (const ValidationError& e) {
            bail(2, model_path + ": " + e.what());
        } catch (const Error& e) {
            bail(1, e.what());
        }
    }

    fs::path out_dir(out_dir_arg);
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    std::vector<ZipEntry> bundle;
    std::unordered_set<std::string> seen;
    for (const std::string& input : inputs) {
        fs::path in_path(input);
        std::string text = must_read(in_path);
        std::string doc_id = in_path.filename().string(); // never the full path
        std::string base = in_path.stem().string();
        if (!seen.insert(base).second)
            bail(2, "two inputs would both produce " + base + ".fasta; rename one");

        PbsDocument doc;
        OffsetMap map;
        map.source_sha256_hex = io::sha256_hex(text);
        try {
            if (keep_refs) {
                doc = encode_document(doc_id, text, alphabet);
                map.rows = doc.map;
            } else {
                RefModel::StripResult strip = model.strip_references(text);
                doc = encode_document(doc_id, strip.body, alphabet);
                map.stripped_lines = strip.ref_lines;
                map.rows = rebase_rows(text, strip.ref_lines);
                if (map.rows.size() != doc.pbs.size())
                    bail(2, input + ": offset map and sequence length disagree (bug)");
            }
        } catch (const Error& e) {
            bail(2, input + ": " + e.what());
        }

        std::string fasta = write_fasta(doc, doc_id);
        fs::path fasta_path = out_dir / (base + ".fasta");
        fs::path map_path = out_dir / (base + ".map");
        must_write(fasta_path, fasta);
        must_write(map_path, write_offset_map(map));
        std::cout << input << " -> " << fasta_path.string() << " (" << doc.pbs.size()
                  << " words), " << map_path.string() << "\n";
        if (!map.stripped_lines.empty()) {
            std::cout << "  stripped " << map.stripped_lines.size() << " reference line"
                      << (map.stripped_lines.size() == 1 ? "" : "s") << " (1-based):";
            for (uint64_t line : map.stripped_lines) std::cout << ' ' << line + 1;
            std::cout << "\n";
        }
        bundle.push_back({base + ".fasta", std::move(fasta)});
    }

    if (inputs.size() > 1) {
        fs::path zip_path = out_dir / "bundle.zip";
        must_write(zip_path, write_zip(bundle));
        std::cout << zip_path.string() << " (" << bundle.size() << " documents)\n";
    }
}

// ---- submit ----------------------------------------------------------

std::string server_error(const std::string& body) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_object() && parsed.contains("error") && parsed["error"].is_string())
        return parsed["error"].get<std::string>();
    return body.size() > 200 ? body.substr(0, 200) + "..." : body;
}

std::string wait_for_job(httplib::Client& client, const std::string& accepted_body,
                         double timeout_s) {
    std::string job_id;
    try {
        job_id = json::parse(accepted_body).at("jobId").get<std::string>();
    } catch (const json::exception& e) {
        bail(4, std::string("malformed 202 response: ") + e.what());
    }
    std::cout << "queued as " << job_id << "\n";
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(timeout_s));
    for (;;) {
        auto res = client.Get("/api/v1/jobs/" + job_id);
        if (!res) bail(3, "lost the server while polling: " + httplib::to_string(res.error()));
        if (res->status != 200)
            bail(4, "job lookup failed: HTTP " + std::to_string(res->status) + ": " +
                        server_error(res->body));
        json status = json::parse(res->body, nullptr, false);
        if (status.is_discarded()) bail(4, "malformed job status: " + res->body);
        std::string state = status.value("state", "");
        if (state == "done") return status.at("result").dump(2);
        if (state == "failed")
            bail(4, "job failed: HTTP " + std::to_string(status.value("status", 0)) + ": " +
                        status.value("error", ""));
        if (std::chrono::steady_clock::now() > deadline)
            bail(3, "timed out waiting for " + job_id);
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
    }
}

void summarize_metadata(const std::string& metadata) {
    json parsed = json::parse(metadata, nullptr, false);
    if (parsed.is_discarded()) return;
    auto one = [](const json& doc) {
        if (!doc.is_object()) return;
        size_t matches = doc.contains("matches") && doc["matches"].is_array()
                             ? doc["matches"].size()
                             : 0;
        std::cout << "  " << doc.value("queryId", "?") << ": " << matches << " match"
                  << (matches == 1 ? "" : "es") << ", longest run "
                  << doc.value("longestCcw", uint64_t{0}) << " words, coverage "
                  << percent(doc.value("coveragePercent", 0.0)) << "\n";
    };
    if (parsed.is_array())
        for (const json& doc : parsed) one(doc);
    else
        one(parsed);
}

void cmd_submit(const std::string& input, const std::string& server, const std::string& out,
                bool force_pairwise, double timeout_s) {
    std::string body = must_read(input);
    bool zip = force_pairwise || body.rfind("PK\x03\x04", 0) == 0;
    const char* path = zip ? "/api/v1/pairwise" : "/api/v1/search";
    const char* content_type = zip ? "application/zip" : "text/plain";

    httplib::Client client(server);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(600, 0);

    auto res = client.Post(path, body, content_type);
    if (!res) bail(3, "cannot reach " + server + ": " + httplib::to_string(res.error()));

    std::string metadata;
    if (res->status == 202)
        metadata = wait_for_job(client, res->body, timeout_s);
    else if (res->status == 200)
        metadata = res->body;
    else
        bail(4, "server returned " + std::to_string(res->status) + ": " + server_error(res->body));

    fs::path out_path = out.empty() ? fs::path(input).replace_extension(".meta.json")
                                    : fs::path(out);
    must_write(out_path, metadata);
    std::cout << "wrote " << out_path.string() << "\n";
    summarize_metadata(metadata);
}

// ---- report ----------------------------------------------------------

ReportMeta select_meta(const std::string& text, const std::string& requested_id,
                       const std::string& source_path, const std::string& meta_path) {
    size_t first = text.find_first_not_of(" \t\r\n");
    bool is_array = first != std::string::npos && text[first] == '[';
    try {
        if (!is_array) {
            ReportMeta single = meta_from_json(text);
            if (!requested_id.empty() && single.query_id != requested_id)
                bail(5, meta_path + " holds results for '" + single.query_id + "', not '" +
                            requested_id + "'");
            return single;
        }
        std::vector<ReportMeta> all = meta_list_from_json(text);
        std::string want =
            requested_id.empty() ? fs::path(source_path).filename().string() : requested_id;
        std::string ids;
        for (ReportMeta& m : all) {
            if (m.query_id == want) return std::move(m);
            ids += " '" + m.query_id + "'";
        }
        bail(5, "no result for '" + want + "' in " + meta_path + " (contains:" + ids +
                    "); pick one with --query-id");
    } catch (const Error& e) {
        bail(5, meta_path + ": " + e.what());
    }
}

fs::path default_report_path(const fs::path& meta) {
    std::string name = meta.filename().string();
    constexpr std::string_view suffix = ".meta.json";
    if (name.size() > suffix.size() && name.ends_with(suffix))
        name.erase(name.size() - suffix.size());
    else
        name = meta.stem().string();
    return meta.parent_path() / (name + ".html");
}

void cmd_report(const std::string& meta_path, const std::string& source_path,
                const std::string& map_path, const std::string& out,
                const std::string& query_id) {
    std::string meta_text = must_read(meta_path);
    std::string source = must_read(source_path);
    std::string map_text = must_read(map_path);

    OffsetMap map;
    try {
        map = parse_offset_map(map_text);
    } catch (const Error& e) {
        bail(5, map_path + ": " + e.what());
    }

    ReportMeta meta = select_meta(meta_text, query_id, source_path, meta_path);

    if (!map.source_sha256_hex.empty() && io::sha256_hex(source) != map.source_sha256_hex)
        bail(6, source_path + " has changed since it was encoded; run encode again");

    std::string html;
    try {
        html = render_html_report(source, map, meta);
    } catch (const Error& e) {
        bail(5, std::string("metadata does not fit the offset map: ") + e.what());
    }

    fs::path out_path = out.empty() ? default_report_path(meta_path) : fs::path(out);
    must_write(out_path, html);
    std::cout << "wrote " << out_path.string() << ": " << meta.matches.size() << " match"
              << (meta.matches.size() == 1 ? "" : "es") << ", coverage "
              << percent(meta.coverage_percent) << "\n";
}

// ---- db --------------------------------------------------------------

void cmd_db_build(const std::string& manifest, const std::string& out, int a) {
    std::vector<DocumentInput> docs;
    try {
        docs = load_manifest(manifest);
    } catch (const Error& e) {
        bail(7, e.what());
    }
    CorpusDb db;
    try {
        db = CorpusDb::ingest(docs, Alphabet(a));
    } catch (const Error& e) {
        bail(7, e.what());
    }
    try {
        db.save(fs::path(out));
    } catch (const std::exception& e) {
        bail(7, "cannot write " + out + ": " + e.what());
    }
    std::cout << "wrote " << out << ": " << db.doc_count() << " documents, " << db.total_words()
              << " words, alphabet " << db.alphabet().size() << "\n";
}

void cmd_db_info(const std::string& path) {
    CorpusDb db;
    try {
        db = CorpusDb::load(fs::path(path));
    } catch (const Error& e) {
        bail(7, path + ": " + e.what());
    }
    const FmIndex::Config& cfg = db.index().config();
    std::cout << "documents     " << db.doc_count() << "\n"
              << "total words   " << db.total_words() << "\n"
              << "alphabet      " << db.alphabet().size() << " (" << db.alphabet().chars() << ")\n"
              << "occ rate      " << cfg.occ_rate << "\n"
              << "sa rate       " << cfg.sa_rate << "\n";
    for (uint32_t i = 0; i < db.doc_count(); ++i) {
        const DocRegistryEntry& doc = db.doc(i);
        std::cout << "  [" << i << "] " << doc.title << " (" << doc.word_count << " words)";
        if (!doc.url.empty()) std::cout << " " << doc.url;
        std::cout << "\n";
    }
}

// ---- eval ------------------------------------------------------------

std::vector<std::string> read_corpus_dir(const std::string& dir_arg) {
    fs::path dir(dir_arg);
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) bail(1, dir_arg + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) bail(1, "no files in " + dir_arg);
    std::vector<std::string> texts;
    texts.reserve(files.size());
    for (const fs::path& f : files) texts.push_back(must_read(f));
    return texts;
}

void cmd_eval_fp(const std::string& corpus_dir, const std::vector<uint32_t>& ks,
                 const std::vector<uint32_t>& as, const std::string& out) {
    std::vector<std::string> texts = read_corpus_dir(corpus_dir);
    std::vector<std::string_view> views(texts.begin(), texts.end());
    std::vector<eval::FpReport> reports;
    try {
        reports = eval::sweep(views, ks, as);
    } catch (const Error& e) {
        bail(2, e.what());
    }
    std::string tsv = eval::sweep_tsv(reports);
    if (out.empty()) {
        std::cout << tsv;
    } else {
        must_write(out, tsv);
        std::cout << "wrote " << out << "\n";
    }
}

void cmd_eval_compress(const std::string& corpus_dir, int a) {
    std::vector<std::string> texts = read_corpus_dir(corpus_dir);
    std::vector<std::string_view> views(texts.begin(), texts.end());
    eval::CompressionReport r;
    try {
        r = eval::compression_ratio(views, Alphabet(a));
    } catch (const Error& e) {
        bail(2, e.what());
    }
    char line[160];
    std::snprintf(line, sizeof line,
                  "raw %llu bytes  encoded %llu chars  database %llu bytes\n"
                  "raw/encoded %.2f  raw/database %.2f  database/encoded %.3f\n",
                  (unsigned long long)r.raw_bytes, (unsigned long long)r.pbs_chars,
                  (unsigned long long)r.db_bytes, r.raw_to_pbs(), r.raw_to_db(), r.db_to_pbs());
    std::cout << line;
}

// ---- serve -----------------------------------------------------------

void cmd_serve(const std::string& db_path, const std::string& host, int port, int a,
               uint32_t seed_k, uint32_t max_gap, uint32_t min_report, size_t max_body,
               size_t max_zip, bool async_mode, const std::string& log_path) {
    SearchService::Config cfg;
    cfg.alphabet_size = a;
    cfg.detector.seed_k = seed_k;
    cfg.detector.max_gap = max_gap;
    cfg.detector.min_report = min_report;
    cfg.max_search_body = max_body;
    cfg.max_zip_body = max_zip;
    cfg.async = async_mode;

    std::ofstream log_file;
    if (!log_path.empty()) {
        log_file.open(log_path, std::ios::app);
        if (!log_file) bail(1, "cannot open log file " + log_path);
        cfg.log = &log_file;
    } else {
        cfg.log = &std::clog;
    }

    SearchService service(cfg);
    if (!db_path.empty()) {
        CorpusDb db;
        try {
            db = CorpusDb::load(fs::path(db_path));
        } catch (const Error& e) {
            bail(7, db_path + ": " + e.what());
        }
        std::cout << "database: " << db.doc_count() << " documents, " << db.total_words()
                  << " words, alphabet " << db.alphabet().size() << "\n";
        service.set_db(std::move(db));
    } else {
        std::cout << "no database loaded; only pairwise comparison will answer\n";
    }

    if (port == 0) {
        int bound = service.bind_any_port(host);
        if (bound <= 0) bail(3, "cannot bind to " + host);
        std::cout << "listening on http://" << host << ":" << bound << std::endl;
        service.listen_after_bind();
    } else {
        std::cout << "listening on http://" << host << ":" << port << std::endl;
        if (!service.listen(host, port))
            bail(3, "cannot bind " + host + ":" + std::to_string(port));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"privacy-preserving duplicate search: documents are encoded on this machine,"
                 " only the irreversible sequences travel"};
    app.require_subcommand(1);

    int a = 12;
    uint32_t seed_k = 8;
    uint32_t min_report = 12;
    std::string server = "http://127.0.0.1:8080";
    app.add_option("--a", a, "alphabet size")->check(CLI::Range(1, 26));
    app.add_option("--seed-k", seed_k, "exact seed length, in words");
    app.add_option("--min-report", min_report, "shortest reportable duplication, in words");
    app.add_option("--server", server, "service base URL");

    auto* enc = app.add_subcommand("encode", "encode text files into uploadable sequences");
    enc->fallthrough();
    std::vector<std::string> enc_inputs;
    std::string enc_out_dir = ".";
    std::string enc_model;
    bool keep_refs = false;
    enc->add_option("files", enc_inputs, "UTF-8 text files")->required();
    enc->add_option("-o,--out-dir", enc_out_dir, "where the .fasta/.map sidecars go");
    enc->add_flag("--keep-refs", keep_refs, "skip the reference-line filter");
    enc->add_option("--model", enc_model, "alternative line-classifier model (TSV)");
    enc->callback([&] { cmd_encode(enc_inputs, enc_out_dir, a, keep_refs, enc_model); });

    auto* sub = app.add_subcommand("submit", "upload an encoded file, save the result metadata");
    sub->fallthrough();
    std::string sub_input, sub_out;
    double sub_timeout = 600.0;
    sub->add_option("file", sub_input, ".fasta or .zip produced by encode")->required();
    sub->add_option("-o,--out", sub_out, "metadata path (default: input with .meta.json)");
    sub->add_option("--timeout", sub_timeout, "seconds to wait for a queued job");
    sub->callback([&] { cmd_submit(sub_input, server, sub_out, false, sub_timeout); });

    auto* psub = app.add_subcommand("pairwise-submit", "upload a zip for mutual comparison");
    psub->fallthrough();
    std::string psub_input, psub_out;
    double psub_timeout = 600.0;
    psub->add_option("file", psub_input, "zip of encoded documents")->required();
    psub->add_option("-o,--out", psub_out, "metadata path (default: input with .meta.json)");
    psub->add_option("--timeout", psub_timeout, "seconds to wait for a queued job");
    psub->callback([&] { cmd_submit(psub_input, server, psub_out, true, psub_timeout); });

    auto* rep = app.add_subcommand("report", "render result metadata into a static HTML page");
    rep->fallthrough();
    std::string rep_meta, rep_source, rep_map, rep_out, rep_query;
    rep->add_option("metadata", rep_meta, "result metadata JSON")->required();
    rep->add_option("--source", rep_source, "the original text file")->required();
    rep->add_option("--map", rep_map, "offset map written by encode")->required();
    rep->add_option("-o,--out", rep_out, "HTML path (default: metadata name with .html)");
    rep->add_option("--query-id", rep_query, "which entry of a pairwise result to render");
    rep->callback([&] { cmd_report(rep_meta, rep_source, rep_map, rep_out, rep_query); });

    auto* db = app.add_subcommand("db", "build or inspect a reference database");
    db->require_subcommand(1);
    db->fallthrough();
    auto* dbb = db->add_subcommand("build", "encode a manifest of documents into a database");
    dbb->fallthrough();
    std::string dbb_manifest, dbb_out = "corpus.db";
    dbb->add_option("manifest", dbb_manifest, "TSV rows: path<TAB>title<TAB>url")->required();
    dbb->add_option("-o,--out", dbb_out, "database path");
    dbb->callback([&] { cmd_db_build(dbb_manifest, dbb_out, a); });
    auto* dbi = db->add_subcommand("info", "print database statistics");
    dbi->fallthrough();
    std::string dbi_path;
    dbi->add_option("db", dbi_path, "database file")->required();
    dbi->callback([&] { cmd_db_info(dbi_path); });

    auto* ev = app.add_subcommand("eval", "collision and compression measurements");
    ev->require_subcommand(1);
    ev->fallthrough();
    auto* evf = ev->add_subcommand("fp", "collision census over a k/a grid");
    evf->fallthrough();
    std::string evf_dir, evf_out;
    std::vector<uint32_t> evf_ks = {8, 10, 12, 14, 16};
    std::vector<uint32_t> evf_as = {8, 12, 14, 16};
    evf->add_option("--corpus", evf_dir, "directory of text files")->required();
    evf->add_option("--k", evf_ks, "window lengths, in words")->delimiter(',');
    evf->add_option("--a", evf_as, "alphabet sizes")->delimiter(',');
    evf->add_option("-o,--out", evf_out, "write the TSV here instead of stdout");
    evf->callback([&] { cmd_eval_fp(evf_dir, evf_ks, evf_as, evf_out); });
    auto* evc = ev->add_subcommand("compress", "raw vs encoded vs database sizes");
    evc->fallthrough();
    std::string evc_dir;
    evc->add_option("--corpus", evc_dir, "directory of text files")->required();
    evc->callback([&] { cmd_eval_compress(evc_dir, a); });

    auto* srv = app.add_subcommand("serve", "run the search service");
    srv->fallthrough();
    std::string srv_db, srv_host = "0.0.0.0", srv_log;
    int srv_port = 8080;
    uint32_t srv_max_gap = 3;
    size_t srv_max_body = 16ull << 20;
    size_t srv_max_zip = 128ull << 20;
    bool srv_async = false;
    srv->add_option("--db", srv_db, "reference database (search answers 503 without one)");
    srv->add_option("--host", srv_host, "bind address");
    srv->add_option("--port", srv_port, "TCP port; 0 picks a free one")->check(CLI::Range(0, 65535));
    srv->add_option("--max-gap", srv_max_gap, "longest mergeable mismatch run, in words");
    srv->add_option("--max-body", srv_max_body, "search body limit, bytes");
    srv->add_option("--max-zip", srv_max_zip, "pairwise upload limit, bytes");
    srv->add_option("--log", srv_log, "append method/path/status lines here (default stderr)");
    srv->add_flag("--async", srv_async, "answer uploads with 202 and a job id");
    srv->callback([&] {
        cmd_serve(srv_db, srv_host, srv_port, a, seed_k, srv_max_gap, min_report, srv_max_body,
                  srv_max_zip, srv_async, srv_log);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Bail& b) {
        std::cerr << "error: " << b.message << "\n";
        return b.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
