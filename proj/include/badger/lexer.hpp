#pragma once

#include <string>
#include <vector>

#include "badger/diagnostics.hpp"
#include "badger/source.hpp"

namespace badger {

enum class TokenKind {
  Keyword,
  Identifier,
  IntLit,
  StringLit,
  Op,
  Punct,
  EndOfFile,
};

struct Token {
  TokenKind kind = TokenKind::EndOfFile;
  std::string text;     // verbatim source text (strings keep their quotes)
  std::string value;    // decoded value for string literals, else == text
  int line = 1;
  int col = 1;
  size_t offset = 0;    // byte offset of the first character
  size_t end_offset = 0;  // byte offset one past the last character
};

class LexError : public std::runtime_error {
 public:
  LexError(SourceLoc loc, std::string message)
      : std::runtime_error(loc.to_string() + ": " + message), loc_(std::move(loc)) {}
  const SourceLoc& loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

// Tokenizes a whole file. `//` and `/* */` comments and whitespace are
// skipped; the trailing token is always EndOfFile.
std::vector<Token> tokenize(const SourceFile& file);

}  // namespace badger
