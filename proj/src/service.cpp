#include "pbsearch/service.hpp"

#include <httplib.h>
#include <json.hpp>

#include "pbsearch/encoder.hpp"
#include "pbsearch/errors.hpp"
#include "pbsearch/report_json.hpp"
#include "pbsearch/zipfile.hpp"

namespace pbsearch {

using nlohmann::json;

namespace {

std::string error_body(const std::string& message) {
    return json{{"error", message}}.dump();
}

constexpr const char* kJsonType = "application/json; charset=utf-8";

} // namespace

const char* to_string(JobRecord::State state) {
    switch (state) {
        case JobRecord::State::Queued: return "queued";
        case JobRecord::State::Running: return "running";
        case JobRecord::State::Done: return "done";
        case JobRecord::State::Failed: return "failed";
    }
    return "unknown";
}

SearchService::SearchService() : SearchService(Config{}) {}

SearchService::SearchService(Config config)
    : config_(config), server_(std::make_unique<httplib::Server>()) {
    install_routes();
    if (config_.async) worker_ = std::thread([this] { worker_loop(); });
}

SearchService::~SearchService() {
    stop();
    {
        std::lock_guard lock(jobs_mutex_);
        shutting_down_ = true;
    }
    jobs_cv_.notify_all();
    if (worker_.joinable()) worker_.join();
}

void SearchService::set_db(CorpusDb db) { db_ = std::make_unique<CorpusDb>(std::move(db)); }

bool SearchService::listen(const std::string& host, int port) {
    return server_->listen(host, port);
}

int SearchService::bind_any_port(const std::string& host) {
    return server_->bind_to_any_port(host);
}

bool SearchService::listen_after_bind() { return server_->listen_after_bind(); }

void SearchService::stop() {
    if (server_) server_->stop();
}

bool SearchService::is_running() const { return server_ && server_->is_running(); }

SearchService::Outcome SearchService::handle_search(const std::string& body) const {
    if (body.size() > config_.max_search_body)
        return {413, error_body("request body exceeds the configured limit")};
    if (!db_) return {503, error_body("no reference database is loaded")};

    FastaRecord record;
    try {
        record = parse_fasta(body);
    } catch (const std::exception& e) {
        return {400, error_body(std::string("malformed FASTA: ") + e.what())};
    }
    const Alphabet& alphabet = db_->alphabet();
    for (char c : record.sequence)
        if (!alphabet.contains(c))
            return {400, error_body(std::string("illegal character '") + c +
                                    "' for alphabet size " + std::to_string(alphabet.size()))};

    PlagiarismReport report =
        search_pbs(*db_, record.description, record.sequence, config_.detector);
    return {200, meta_to_json(to_meta(report, *db_))};
}

SearchService::Outcome SearchService::handle_pairwise(const std::string& body) const {
    if (body.size() > config_.max_zip_body)
        return {413, error_body("request body exceeds the configured limit")};

    std::vector<ZipEntry> entries;
    try {
        entries = read_zip(body);
    } catch (const std::exception& e) {
        return {400, error_body(e.what())};
    }
    if (entries.size() < 2)
        return {400, error_body("pairwise comparison needs at least two documents, got " +
                                std::to_string(entries.size()))};

    const Alphabet alphabet(db_ ? db_->alphabet().size() : config_.alphabet_size);
    std::vector<PbsDocument> docs;
    docs.reserve(entries.size());
    for (const ZipEntry& entry : entries) {
        FastaRecord record;
        try {
            record = parse_fasta(entry.data);
        } catch (const std::exception& e) {
            return {400,
                    error_body("entry '" + entry.name + "' is not valid FASTA: " + e.what())};
        }
        for (char c : record.sequence)
            if (!alphabet.contains(c))
                return {400, error_body("entry '" + entry.name + "' contains illegal character '" +
                                        c + "'")};
        PbsDocument doc;
        doc.id = record.description.empty() ? entry.name : record.description;
        doc.pbs = std::move(record.sequence);
        docs.push_back(std::move(doc));
    }

    std::vector<PlagiarismReport> reports = pairwise(docs, alphabet, config_.detector);
    std::vector<ReportMeta> metas;
    metas.reserve(reports.size());
    for (const PlagiarismReport& report : reports) metas.push_back(to_meta(report, docs));
    return {200, meta_list_to_json(metas)};
}

SearchService::Outcome SearchService::handle_info() const {
    if (!db_) return {503, error_body("no reference database is loaded")};
    json info{{"documentCount", db_->doc_count()},
              {"totalWords", db_->total_words()},
              {"alphabetSize", db_->alphabet().size()},
              {"seedK", config_.detector.seed_k},
              {"minReport", config_.detector.min_report}};
    return {200, info.dump()};
}

std::string SearchService::enqueue(JobRecord::Kind kind, std::string body) {
    std::lock_guard lock(jobs_mutex_);
    std::string id = "job-" + std::to_string(next_job_++);
    JobRecord record;
    record.id = id;
    record.kind = kind;
    jobs_.emplace(id, std::move(record));
    // The body lives in the queue, not the record: job status responses must
    // never be able to echo request contents.
    job_queue_.push_back(id + "\n" + std::move(body));
    jobs_cv_.notify_one();
    return id;
}

void SearchService::worker_loop() {
    for (;;) {
        std::string work;
        {
            std::unique_lock lock(jobs_mutex_);
            jobs_cv_.wait(lock, [this] { return shutting_down_ || !job_queue_.empty(); });
            if (shutting_down_) return;
            work = std::move(job_queue_.front());
            job_queue_.pop_front();
        }
        const size_t nl = work.find('\n');
        const std::string id = work.substr(0, nl);
        const std::string body = work.substr(nl + 1);

        JobRecord::Kind kind;
        {
            std::lock_guard lock(jobs_mutex_);
            JobRecord& record = jobs_.at(id);
            record.state = JobRecord::State::Running;
            kind = record.kind;
        }
        Outcome outcome;
        try {
            outcome = kind == JobRecord::Kind::Search ? handle_search(body)
                                                      : handle_pairwise(body);
        } catch (const std::exception& e) {
            outcome = {500, error_body(e.what())};
        }
        {
            std::lock_guard lock(jobs_mutex_);
            JobRecord& record = jobs_.at(id);
            record.http_status = outcome.status;
            if (outcome.status == 200) {
                record.state = JobRecord::State::Done;
                record.result_json = std::move(outcome.body);
            } else {
                record.state = JobRecord::State::Failed;
                record.error = std::move(outcome.body);
            }
        }
    }
}

SearchService::Outcome SearchService::job_status(const std::string& id) const {
    std::lock_guard lock(jobs_mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) return {404, error_body("no such job: " + id)};
    const JobRecord& record = it->second;
    json status{{"jobId", record.id}, {"state", to_string(record.state)}};
    if (record.state == JobRecord::State::Done)
        status["result"] = json::parse(record.result_json);
    if (record.state == JobRecord::State::Failed) {
        status["status"] = record.http_status;
        status["error"] = json::parse(record.error).value("error", "");
    }
    return {200, status.dump()};
}

void SearchService::install_routes() {
    server_->set_payload_max_length(config_.max_zip_body);

    if (config_.log) {
        server_->set_logger([this](const httplib::Request& req, const httplib::Response& res) {
            // Method, path, status — never query strings, headers, or bodies.
            *config_.log << req.method << ' ' << req.path << ' ' << res.status << '\n';
            config_.log->flush();
        });
    }

    server_->Post("/api/v1/search", [this](const httplib::Request& req, httplib::Response& res) {
        if (config_.async && req.body.size() <= config_.max_search_body && db_) {
            res.status = 202;
            res.set_content(json{{"jobId", enqueue(JobRecord::Kind::Search, req.body)}}.dump(),
                            kJsonType);
            return;
        }
        Outcome outcome = handle_search(req.body);
        res.status = outcome.status;
        res.set_content(outcome.body, kJsonType);
    });

    server_->Post("/api/v1/pairwise",
                  [this](const httplib::Request& req, httplib::Response& res) {
                      if (config_.async && req.body.size() <= config_.max_zip_body) {
                          res.status = 202;
                          res.set_content(
                              json{{"jobId", enqueue(JobRecord::Kind::Pairwise, req.body)}}.dump(),
                              kJsonType);
                          return;
                      }
                      Outcome outcome = handle_pairwise(req.body);
                      res.status = outcome.status;
                      res.set_content(outcome.body, kJsonType);
                  });

    server_->Get("/api/v1/info", [this](const httplib::Request&, httplib::Response& res) {
        Outcome outcome = handle_info();
        res.status = outcome.status;
        res.set_content(outcome.body, kJsonType);
    });

    server_->Get(R"(/api/v1/jobs/([^/]+))",
                 [this](const httplib::Request& req, httplib::Response& res) {
                     Outcome outcome = job_status(req.matches[1]);
                     res.status = outcome.status;
                     res.set_content(outcome.body, kJsonType);
                 });
}

} // namespace pbsearch
