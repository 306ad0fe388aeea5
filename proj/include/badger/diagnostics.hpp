#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace badger {

struct SourceLoc {
  std::string file;
  int line = 0;  // 1-based
  int col = 0;   // 1-based

  std::string to_string() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(col);
  }
};

// Stable error codes shared by the tool dispatcher, the server, and the CLI.
enum class ErrorCode {
  LexError,
  ParseError,
  ConfigError,
  IoError,
  BuildFailed,
  UnknownSession,
  SessionNotReady,
  UnknownJob,
  UnknownMethod,
  AmbiguousMethod,
  UnresolvedPoint,
  NotABoundsContext,
  RangeError,
  QueryError,
  UnknownTool,
  ValidationError,
  Internal,
};

const char* error_code_name(ErrorCode code);

// Thrown by analysis and session operations; the dispatcher maps it onto the
// wire-level error object.
class ToolError : public std::runtime_error {
 public:
  ToolError(ErrorCode code, std::string message, std::string detail = "")
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

struct FileError {
  std::string file;
  int line = 0;
  int col = 0;
  std::string message;
};

struct AnalysisWarning {
  std::string file;
  int line = 0;
  std::string message;
};

// Per-codebase build outcome: which files failed to parse and which
// bind-time warnings the dataflow pass produced.
struct BuildReport {
  std::vector<FileError> parse_errors;
  std::vector<AnalysisWarning> warnings;

  bool has_errors() const { return !parse_errors.empty(); }
};

}  // namespace badger
