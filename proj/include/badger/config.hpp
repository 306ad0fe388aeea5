#pragma once

#include <optional>
#include <string>

#include "badger/analyses.hpp"

namespace badger {

// Server/CLI configuration, loaded from a line-oriented `key: value` file.
// `#` starts a comment; lists are comma-separated; sink_args entries look
// like `memcpy=1|2`.
struct Config {
  std::string host = "127.0.0.1";
  int port = 8717;
  std::string cache_root = ".codebadger-cache";
  int cache_entries = 64;
  int worker_count = 4;
  int job_ttl_seconds = 600;
  int session_ttl_seconds = 3600;
  bool allow_git = false;
  std::string source_glob = "*.c";
  std::string language = "minic";
  int build_threads = 0;  // 0 = one kernel thread per core
  int max_response_bytes = 1048576;
  int query_limit = 200;
  SourceSinkConfig taint;
};

Config parse_config(const std::string& text, const std::string& origin);
Config load_config_file(const std::string& path);

// Resolution order: --config flag, then $CODEBADGER_CONFIG, then defaults.
Config resolve_config(const std::optional<std::string>& flag_path);

}  // namespace badger
