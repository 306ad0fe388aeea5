#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "badger/config.hpp"
#include "badger/cpg.hpp"
#include "badger/json.hpp"

namespace badger {

enum class SessionStatus { Building, Ready, Failed };
enum class JobState { Queued, Running, Done, Failed };

const char* job_state_name(JobState state);

// Analysis sessions keyed by source hash, the on-disk CPG cache, and the
// asynchronous job queue. Safe to use from concurrent request handlers; the
// cache serializes builders per hash so racing creates build at most once.
class SessionManager {
 public:
  explicit SessionManager(Config config);
  ~SessionManager();

  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  const Config& config() const { return config_; }

  // create_cpg_session: loads the tree, hashes it, and either loads the CPG
  // from cache or builds and stores it. Returns the session descriptor.
  Json create_session(const std::string& source_root, const std::string& language);

  // Async variant: registers a building session and returns (session_id,
  // job_id); the job's result is the same descriptor create_session returns.
  std::pair<std::string, std::string> create_session_async(const std::string& source_root,
                                                           const std::string& language);

  Json close_session(const std::string& session_id);

  // Resolves a ready session's CPG; bumps the idle timer.
  std::shared_ptr<const Cpg> cpg_for(const std::string& session_id);

  // Runs `work` on the worker pool; the job result must match the
  // synchronous call byte for byte.
  std::string submit_job(const std::string& session_id, const std::string& tool,
                         std::function<Json()> work);
  Json poll_job(const std::string& job_id);

  // Builds (or cache-loads) a CPG without a session: the CLI path.
  std::shared_ptr<const Cpg> ephemeral_cpg(const std::string& source_root,
                                           const std::string& language);

  uint64_t cache_hits() const { return cache_hits_; }
  uint64_t cache_misses() const { return cache_misses_; }

 private:
  struct Session {
    std::string id;
    std::string source_root;
    std::string source_hash;
    std::string language;
    SessionStatus status = SessionStatus::Building;
    std::shared_ptr<const Cpg> cpg;
    Json descriptor;  // create_session result once ready
    Json error;       // failure payload
    std::chrono::steady_clock::time_point created_at;
    std::chrono::steady_clock::time_point last_used;
  };

  struct Job {
    std::string id;
    std::string session_id;
    std::string tool;
    JobState state = JobState::Queued;
    std::function<Json()> work;
    Json result;
    Json error;
    std::chrono::steady_clock::time_point created_at;
    std::chrono::steady_clock::time_point finished_at;
  };

  struct CacheOutcome {
    std::shared_ptr<const Cpg> cpg;
    std::string source_hash;
    bool hit = false;
  };

  CacheOutcome load_or_build(const std::string& source_root, const std::string& language);
  Json session_descriptor(const Session& s, bool cache_hit) const;
  std::string resolve_root(const std::string& source_root);
  void worker_loop();
  void purge_expired_jobs_locked();
  void expire_idle_sessions_locked();
  std::string fresh_id(const char* prefix);

  Config config_;
  mutable std::mutex mutex_;
  std::map<std::string, Session> sessions_;
  std::map<std::string, Job> jobs_;
  std::deque<std::string> job_queue_;
  std::condition_variable queue_cv_;
  std::vector<std::thread> workers_;
  bool stopping_ = false;
  uint64_t next_id_ = 0;
  uint64_t run_token_ = 0;
  std::atomic<uint64_t> cache_hits_{0};
  std::atomic<uint64_t> cache_misses_{0};

  // One builder at a time per source hash.
  std::map<std::string, std::shared_ptr<std::mutex>> hash_locks_;
  std::mutex hash_locks_mutex_;
};

// Content digest over (path, content) pairs in lexicographic path order plus
// the language tag; independent of enumeration order and mtimes.
std::string source_tree_hash(const std::vector<SourceFile>& files, const std::string& language);

}  // namespace badger
