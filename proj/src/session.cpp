#include "badger/session.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "badger/cpg_builder.hpp"
#include "badger/serialize.hpp"
#include "badger/util.hpp"

namespace fs = std::filesystem;

namespace badger {

const char* job_state_name(JobState state) {
  switch (state) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
  }
  return "?";
}

std::string source_tree_hash(const std::vector<SourceFile>& files, const std::string& language) {
  std::ostringstream blob;
  blob << "lang:" << language << '\n';
  for (const auto& f : files)
    blob << f.path() << '\n' << f.content().size() << '\n' << f.content();
  return sha256_hex(blob.str());
}

SessionManager::SessionManager(Config config) : config_(std::move(config)) {
  std::random_device rd;
  run_token_ = (static_cast<uint64_t>(rd()) << 32) ^ rd();
  int workers = std::max(1, config_.worker_count);
  for (int i = 0; i < workers; ++i) workers_.emplace_back([this] { worker_loop(); });
}

SessionManager::~SessionManager() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  for (auto& w : workers_) w.join();
}

std::string SessionManager::fresh_id(const char* prefix) {
  std::ostringstream out;
  out << prefix << '-' << std::hex << run_token_ << '-' << std::dec << ++next_id_;
  return out.str();
}

std::string SessionManager::resolve_root(const std::string& source_root) {
  bool looks_like_git = source_root.rfind("http://", 0) == 0 ||
                        source_root.rfind("https://", 0) == 0 ||
                        source_root.rfind("git@", 0) == 0;
  if (!looks_like_git) return source_root;
  if (!config_.allow_git)
    throw ToolError(ErrorCode::ConfigError,
                    "git ingestion is disabled (set allow_git: true to enable)");
  fs::path dir = fs::path(config_.cache_root) / "git" / sha256_hex(source_root).substr(0, 16);
  if (!fs::exists(dir)) {
    fs::create_directories(dir.parent_path());
    std::string cmd = "git clone --depth 1 " + source_root + " " + dir.string() + " >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0)
      throw ToolError(ErrorCode::IoError, "git clone failed for " + source_root);
  }
  return dir.string();
}

SessionManager::CacheOutcome SessionManager::load_or_build(const std::string& source_root,
                                                           const std::string& language) {
  std::string root = resolve_root(source_root);
  auto files = load_source_tree(root, config_.source_glob);
  std::string hash = source_tree_hash(files, language);

  // Serialize builders per hash.
  std::shared_ptr<std::mutex> lock;
  {
    std::lock_guard<std::mutex> guard(hash_locks_mutex_);
    auto& slot = hash_locks_[hash];
    if (!slot) slot = std::make_shared<std::mutex>();
    lock = slot;
  }
  std::lock_guard<std::mutex> guard(*lock);

  fs::path cache_file = fs::path(config_.cache_root) / (hash + "-" + language + ".cpg");
  std::error_code ec;
  if (fs::exists(cache_file, ec)) {
    std::ifstream in(cache_file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      auto cpg = cpg_from_cache(buf.str());
      fs::last_write_time(cache_file, fs::file_time_type::clock::now(), ec);
      ++cache_hits_;
      return {cpg, hash, true};
    } catch (const ToolError&) {
      fs::remove(cache_file, ec);  // corrupt entry: rebuild below
    }
  }

  BuildOptions options;
  options.threads = config_.build_threads;
  options.language = language;
  auto cpg = build_cpg(std::move(files), options);
  ++cache_misses_;

  fs::create_directories(config_.cache_root, ec);
  {
    std::ofstream out(cache_file, std::ios::binary | std::ios::trunc);
    out << cpg_to_cache(*cpg, hash);
  }

  // LRU eviction by entry count, oldest mtime first.
  std::vector<std::pair<fs::file_time_type, fs::path>> entries;
  for (auto& e : fs::directory_iterator(config_.cache_root, ec))
    if (e.is_regular_file() && e.path().extension() == ".cpg")
      entries.push_back({fs::last_write_time(e.path(), ec), e.path()});
  if (entries.size() > static_cast<size_t>(std::max(1, config_.cache_entries))) {
    std::sort(entries.begin(), entries.end());
    size_t excess = entries.size() - config_.cache_entries;
    for (size_t i = 0; i < excess; ++i) fs::remove(entries[i].second, ec);
  }
  return {cpg, hash, false};
}

Json SessionManager::session_descriptor(const Session& s, bool cache_hit) const {
  Json j;
  j["session_id"] = s.id;
  j["status"] = s.status == SessionStatus::Ready      ? "ready"
                : s.status == SessionStatus::Building ? "building"
                                                      : "failed";
  j["source_hash"] = s.source_hash;
  j["language"] = s.language;
  j["cache"] = cache_hit ? "hit" : "miss";
  if (s.cpg) {
    j["files"] = s.cpg->files().size();
    j["methods"] = s.cpg->by_kind(NodeKind::Method).size();
    Json errors = Json::array();
    for (const auto& e : s.cpg->report().parse_errors)
      errors.push_back(Json{{"file", e.file}, {"line", e.line}, {"col", e.col},
                            {"message", e.message}});
    j["parse_errors"] = std::move(errors);
    Json warnings = Json::array();
    for (const auto& w : s.cpg->report().warnings)
      warnings.push_back(Json{{"file", w.file}, {"line", w.line}, {"message", w.message}});
    j["warnings"] = std::move(warnings);
  }
  return j;
}

Json SessionManager::create_session(const std::string& source_root, const std::string& language) {
  CacheOutcome outcome = load_or_build(source_root, language);

  const auto& report = outcome.cpg->report();
  size_t file_count = outcome.cpg->files().size();
  if (!report.parse_errors.empty() && report.parse_errors.size() >= file_count) {
    Json detail = Json::array();
    for (const auto& e : report.parse_errors)
      detail.push_back(Json{{"file", e.file}, {"line", e.line}, {"col", e.col},
                            {"message", e.message}});
    throw ToolError(ErrorCode::BuildFailed, "no file in the codebase parsed successfully",
                    detail.dump());
  }

  std::lock_guard<std::mutex> lock(mutex_);
  Session s;
  s.id = fresh_id("sess");
  s.source_root = source_root;
  s.source_hash = outcome.source_hash;
  s.language = language;
  s.status = SessionStatus::Ready;
  s.cpg = outcome.cpg;
  s.created_at = s.last_used = std::chrono::steady_clock::now();
  s.descriptor = session_descriptor(s, outcome.hit);
  Json descriptor = s.descriptor;
  sessions_[s.id] = std::move(s);
  return descriptor;
}

std::pair<std::string, std::string> SessionManager::create_session_async(
    const std::string& source_root, const std::string& language) {
  std::string session_id;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    Session s;
    s.id = fresh_id("sess");
    s.source_root = source_root;
    s.language = language;
    s.status = SessionStatus::Building;
    s.created_at = s.last_used = std::chrono::steady_clock::now();
    session_id = s.id;
    sessions_[s.id] = std::move(s);
  }

  std::string job_id = submit_job(session_id, "create_cpg_session", [this, session_id,
                                                                     source_root, language] {
    try {
      CacheOutcome outcome = load_or_build(source_root, language);
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = sessions_.find(session_id);
      if (it == sessions_.end())
        throw ToolError(ErrorCode::UnknownSession, "session closed while building");
      Session& s = it->second;
      const auto& report = outcome.cpg->report();
      if (!report.parse_errors.empty() &&
          report.parse_errors.size() >= outcome.cpg->files().size()) {
        s.status = SessionStatus::Failed;
        Json detail = Json::array();
        for (const auto& e : report.parse_errors)
          detail.push_back(Json{{"file", e.file}, {"line", e.line}, {"col", e.col},
                                {"message", e.message}});
        s.error = Json{{"code", "build_failed"},
                       {"message", "no file in the codebase parsed successfully"},
                       {"detail", detail.dump()}};
        throw ToolError(ErrorCode::BuildFailed, "no file in the codebase parsed successfully",
                        detail.dump());
      }
      s.source_hash = outcome.source_hash;
      s.status = SessionStatus::Ready;
      s.cpg = outcome.cpg;
      s.descriptor = session_descriptor(s, outcome.hit);
      return s.descriptor;
    } catch (const ToolError&) {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = sessions_.find(session_id);
      if (it != sessions_.end() && it->second.status == SessionStatus::Building)
        it->second.status = SessionStatus::Failed;
      throw;
    }
  });
  return {session_id, job_id};
}

Json SessionManager::close_session(const std::string& session_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end())
    throw ToolError(ErrorCode::UnknownSession, "unknown session: " + session_id);
  sessions_.erase(it);
  return Json{{"closed", true}};
}

std::shared_ptr<const Cpg> SessionManager::cpg_for(const std::string& session_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  expire_idle_sessions_locked();
  auto it = sessions_.find(session_id);
  if (it == sessions_.end())
    throw ToolError(ErrorCode::UnknownSession, "unknown session: " + session_id);
  Session& s = it->second;
  s.last_used = std::chrono::steady_clock::now();
  if (s.status == SessionStatus::Building)
    throw ToolError(ErrorCode::SessionNotReady, "session is still building: " + session_id);
  if (s.status == SessionStatus::Failed)
    throw ToolError(ErrorCode::BuildFailed, "session build failed: " + session_id,
                    s.error.is_null() ? "" : s.error.dump());
  return s.cpg;
}

void SessionManager::expire_idle_sessions_locked() {
  if (config_.session_ttl_seconds <= 0) return;
  auto now = std::chrono::steady_clock::now();
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    auto idle = std::chrono::duration_cast<std::chrono::seconds>(now - it->second.last_used);
    if (idle.count() > config_.session_ttl_seconds && it->second.status != SessionStatus::Building)
      it = sessions_.erase(it);
    else
      ++it;
  }
}

std::string SessionManager::submit_job(const std::string& session_id, const std::string& tool,
                                       std::function<Json()> work) {
  std::lock_guard<std::mutex> lock(mutex_);
  purge_expired_jobs_locked();

  if (tool != "create_cpg_session") {
    auto it = sessions_.find(session_id);
    if (it == sessions_.end())
      throw ToolError(ErrorCode::UnknownSession, "unknown session: " + session_id);
    if (it->second.status == SessionStatus::Building)
      throw ToolError(ErrorCode::SessionNotReady,
                      "session is still building: " + session_id);
  }

  Job job;
  job.id = fresh_id("job");
  job.session_id = session_id;
  job.tool = tool;
  job.work = std::move(work);
  job.created_at = std::chrono::steady_clock::now();
  std::string id = job.id;
  jobs_[id] = std::move(job);
  job_queue_.push_back(id);
  queue_cv_.notify_one();
  return id;
}

Json SessionManager::poll_job(const std::string& job_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  purge_expired_jobs_locked();
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw ToolError(ErrorCode::UnknownJob, "unknown job: " + job_id);
  const Job& job = it->second;
  Json j;
  j["job_id"] = job.id;
  j["tool"] = job.tool;
  j["state"] = job_state_name(job.state);
  if (job.state == JobState::Done) j["result"] = job.result;
  if (job.state == JobState::Failed) j["error"] = job.error;
  return j;
}

void SessionManager::purge_expired_jobs_locked() {
  if (config_.job_ttl_seconds <= 0) return;
  auto now = std::chrono::steady_clock::now();
  for (auto it = jobs_.begin(); it != jobs_.end();) {
    const Job& job = it->second;
    bool finished = job.state == JobState::Done || job.state == JobState::Failed;
    auto age = std::chrono::duration_cast<std::chrono::seconds>(now - job.finished_at);
    if (finished && age.count() > config_.job_ttl_seconds)
      it = jobs_.erase(it);
    else
      ++it;
  }
}

void SessionManager::worker_loop() {
  while (true) {
    std::string job_id;
    std::function<Json()> work;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      queue_cv_.wait(lock, [this] { return stopping_ || !job_queue_.empty(); });
      if (stopping_ && job_queue_.empty()) return;
      job_id = job_queue_.front();
      job_queue_.pop_front();
      auto it = jobs_.find(job_id);
      if (it == jobs_.end()) continue;
      it->second.state = JobState::Running;
      work = it->second.work;
    }

    Json result, error;
    bool failed = false;
    try {
      result = work();
    } catch (const ToolError& e) {
      failed = true;
      error = Json{{"code", error_code_name(e.code())}, {"message", e.what()}};
      if (!e.detail().empty()) error["detail"] = e.detail();
    } catch (const std::exception& e) {
      failed = true;
      error = Json{{"code", "internal"}, {"message", e.what()}};
    }

    std::lock_guard<std::mutex> lock(mutex_);
    auto it = jobs_.find(job_id);
    if (it == jobs_.end()) continue;
    it->second.state = failed ? JobState::Failed : JobState::Done;
    it->second.result = std::move(result);
    it->second.error = std::move(error);
    it->second.finished_at = std::chrono::steady_clock::now();
    it->second.work = nullptr;
  }
}

std::shared_ptr<const Cpg> SessionManager::ephemeral_cpg(const std::string& source_root,
                                                         const std::string& language) {
  return load_or_build(source_root, language).cpg;
}

}  // namespace badger
