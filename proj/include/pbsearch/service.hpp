#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "pbsearch/corpus_db.hpp"
#include "pbsearch/detector.hpp"

namespace httplib {
class Server;
} // namespace httplib

namespace pbsearch {

/// State of one queued comparison when the service runs in async mode.
/// Transitions only ever move forward: queued -> running -> done | failed.
struct JobRecord {
    enum class Kind { Search, Pairwise };
    enum class State { Queued, Running, Done, Failed };

    std::string id;
    Kind kind = Kind::Search;
    State state = State::Queued;
    int http_status = 0;      // result status once done/failed
    std::string result_json;  // immutable once done
    std::string error;        // set when failed
};

const char* to_string(JobRecord::State state);

/// The search service: holds one immutable reference database, accepts
/// encoded queries only, and never logs or stores request bodies — the log
/// stream receives method, path, and status, nothing else.
///
/// Endpoints: POST /api/v1/search (FASTA body), POST /api/v1/pairwise
/// (zip of FASTA files), GET /api/v1/info, and GET /api/v1/jobs/{id} plus
/// 202-with-jobId POST responses when async mode is on.
class SearchService {
  public:
    struct Config {
        int alphabet_size = 12; // used by pairwise when no DB is loaded
        DetectorOptions detector{};
        size_t max_search_body = 16ull << 20;
        size_t max_zip_body = 128ull << 20;
        bool async = false;
        std::ostream* log = nullptr;
    };

    SearchService();
    explicit SearchService(Config config);
    ~SearchService();

    SearchService(const SearchService&) = delete;
    SearchService& operator=(const SearchService&) = delete;

    /// Installs the reference database; before this, search and info answer
    /// 503. Must not be called while listening.
    void set_db(CorpusDb db);
    bool has_db() const { return db_ != nullptr; }

    /// Blocking listen on host:port; false when binding fails.
    bool listen(const std::string& host, int port);
    /// Test hook: bind an ephemeral port (returned), then listen on a
    /// background caller-owned thread via listen_after_bind().
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();
    bool is_running() const;

    /// Request pipelines, exposed for direct testing: status + JSON body.
    struct Outcome {
        int status = 0;
        std::string body;
    };
    Outcome handle_search(const std::string& body) const;
    Outcome handle_pairwise(const std::string& body) const;
    Outcome handle_info() const;

  private:
    void install_routes();
    std::string enqueue(JobRecord::Kind kind, std::string body);
    void worker_loop();
    Outcome job_status(const std::string& id) const;

    Config config_;
    std::unique_ptr<CorpusDb> db_;
    std::unique_ptr<httplib::Server> server_;

    mutable std::mutex jobs_mutex_;
    std::condition_variable jobs_cv_;
    std::deque<std::string> job_queue_;
    std::map<std::string, JobRecord> jobs_;
    uint64_t next_job_ = 1;
    bool shutting_down_ = false;
    std::thread worker_;
};

} // namespace pbsearch
