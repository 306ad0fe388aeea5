#include "badger/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "badger/util.hpp"

namespace badger {

namespace {

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ToolError(ErrorCode::ConfigError, "config key '" + key + "' expects an integer, got '" +
                                                value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw ToolError(ErrorCode::ConfigError,
                  "config key '" + key + "' expects a boolean, got '" + value + "'");
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  for (const auto& raw : split(value, ',')) {
    std::string item = trim(raw);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

Config parse_config(const std::string& text, const std::string& origin) {
  Config config;
  int line_no = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    size_t colon = trimmed.find(':');
    if (colon == std::string::npos)
      throw ToolError(ErrorCode::ConfigError,
                      origin + ":" + std::to_string(line_no) + ": expected 'key: value'");
    std::string key = trim(trimmed.substr(0, colon));
    std::string value = trim(trimmed.substr(colon + 1));

    if (key == "host") config.host = value;
    else if (key == "port") config.port = parse_int(key, value);
    else if (key == "cache_root") config.cache_root = value;
    else if (key == "cache_entries") config.cache_entries = parse_int(key, value);
    else if (key == "worker_count") config.worker_count = parse_int(key, value);
    else if (key == "job_ttl_seconds") config.job_ttl_seconds = parse_int(key, value);
    else if (key == "session_ttl_seconds") config.session_ttl_seconds = parse_int(key, value);
    else if (key == "allow_git") config.allow_git = parse_bool(key, value);
    else if (key == "source_glob") config.source_glob = value;
    else if (key == "language") config.language = value;
    else if (key == "build_threads") config.build_threads = parse_int(key, value);
    else if (key == "max_response_bytes") config.max_response_bytes = parse_int(key, value);
    else if (key == "query_limit") config.query_limit = parse_int(key, value);
    else if (key == "sources") config.taint.sources = parse_list(value);
    else if (key == "sinks") config.taint.sinks = parse_list(value);
    else if (key == "sink_args") {
      config.taint.sink_args.clear();
      for (const auto& entry : parse_list(value)) {
        size_t eq = entry.find('=');
        if (eq == std::string::npos)
          throw ToolError(ErrorCode::ConfigError,
                          origin + ":" + std::to_string(line_no) +
                              ": sink_args entries look like name=0|2, got '" + entry + "'");
        std::string name = trim(entry.substr(0, eq));
        std::vector<int> positions;
        for (const auto& pos : split(entry.substr(eq + 1), '|'))
          positions.push_back(parse_int("sink_args", trim(pos)));
        config.taint.sink_args[name] = positions;
      }
    } else {
      throw ToolError(ErrorCode::ConfigError, origin + ":" + std::to_string(line_no) +
                                                  ": unknown config key '" + key + "'");
    }
  }
  if (config.taint.sources.empty())
    throw ToolError(ErrorCode::ConfigError, origin + ": 'sources' list must not be empty");
  if (config.taint.sinks.empty())
    throw ToolError(ErrorCode::ConfigError, origin + ": 'sinks' list must not be empty");
  if (config.worker_count < 1)
    throw ToolError(ErrorCode::ConfigError, origin + ": worker_count must be >= 1");
  return config;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ToolError(ErrorCode::ConfigError, "cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

Config resolve_config(const std::optional<std::string>& flag_path) {
  if (flag_path) return load_config_file(*flag_path);
  if (const char* env = std::getenv("CODEBADGER_CONFIG")) return load_config_file(env);
  return Config{};
}

}  // namespace badger
