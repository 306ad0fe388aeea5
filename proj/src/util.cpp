#include "badger/util.hpp"

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <stdexcept>

#include "badger/diagnostics.hpp"

namespace badger {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::LexError: return "parse_error";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::ConfigError: return "config_error";
    case ErrorCode::IoError: return "io_error";
    case ErrorCode::BuildFailed: return "build_failed";
    case ErrorCode::UnknownSession: return "unknown_session";
    case ErrorCode::SessionNotReady: return "session_not_ready";
    case ErrorCode::UnknownJob: return "unknown_job";
    case ErrorCode::UnknownMethod: return "unknown_method";
    case ErrorCode::AmbiguousMethod: return "ambiguous_method";
    case ErrorCode::UnresolvedPoint: return "unresolved_point";
    case ErrorCode::NotABoundsContext: return "not_a_bounds_context";
    case ErrorCode::RangeError: return "range_error";
    case ErrorCode::QueryError: return "query_error";
    case ErrorCode::UnknownTool: return "unknown_tool";
    case ErrorCode::ValidationError: return "validation_error";
    case ErrorCode::Internal: return "internal";
  }
  return "internal";
}

bool glob_match(std::string_view pattern, std::string_view text) {
  // Iterative wildcard match with backtracking over the last '*'.
  size_t p = 0, t = 0;
  size_t star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string trim(std::string_view text) {
  size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest.data(), &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace badger
