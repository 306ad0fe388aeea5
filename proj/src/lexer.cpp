#include "badger/lexer.hpp"

#include <cctype>
#include <unordered_set>

namespace badger {

namespace {

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {"int", "char", "if", "else", "while",
                                                     "return"};
  return kw;
}

struct Cursor {
  const SourceFile& file;
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Cursor(const SourceFile& f) : file(f), text(f.content()) {}

  bool done() const { return pos >= text.size(); }
  char peek(size_t ahead = 0) const {
    return pos + ahead < text.size() ? text[pos + ahead] : '\0';
  }
  void advance() {
    if (done()) return;
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  SourceLoc loc() const { return SourceLoc{file.path(), line, col}; }
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(const SourceFile& file) {
  std::vector<Token> tokens;
  Cursor cur(file);

  auto make_token = [&](TokenKind kind, const Cursor& start, std::string value = "") {
    Token t;
    t.kind = kind;
    t.text = cur.text.substr(start.pos, cur.pos - start.pos);
    t.value = value.empty() ? t.text : std::move(value);
    t.line = start.line;
    t.col = start.col;
    t.offset = start.pos;
    t.end_offset = cur.pos;
    tokens.push_back(std::move(t));
  };

  while (!cur.done()) {
    char c = cur.peek();
    if (std::isspace(static_cast<unsigned char>(c))) {
      cur.advance();
      continue;
    }
    if (c == '/' && cur.peek(1) == '/') {
      while (!cur.done() && cur.peek() != '\n') cur.advance();
      continue;
    }
    if (c == '/' && cur.peek(1) == '*') {
      SourceLoc open = cur.loc();
      cur.advance();
      cur.advance();
      bool closed = false;
      while (!cur.done()) {
        if (cur.peek() == '*' && cur.peek(1) == '/') {
          cur.advance();
          cur.advance();
          closed = true;
          break;
        }
        cur.advance();
      }
      if (!closed) throw LexError(open, "unterminated block comment");
      continue;
    }

    Cursor start = cur;
    if (is_ident_start(c)) {
      while (!cur.done() && is_ident_char(cur.peek())) cur.advance();
      std::string word = cur.text.substr(start.pos, cur.pos - start.pos);
      make_token(keywords().count(word) ? TokenKind::Keyword : TokenKind::Identifier, start);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek()))) cur.advance();
      if (!cur.done() && is_ident_start(cur.peek()))
        throw LexError(cur.loc(), "identifier cannot start with a digit");
      make_token(TokenKind::IntLit, start);
      continue;
    }
    if (c == '"') {
      SourceLoc open = cur.loc();
      cur.advance();
      std::string decoded;
      while (true) {
        if (cur.done() || cur.peek() == '\n') throw LexError(open, "unterminated string literal");
        char ch = cur.peek();
        if (ch == '"') {
          cur.advance();
          break;
        }
        if (ch == '\\') {
          cur.advance();
          char esc = cur.peek();
          switch (esc) {
            case 'n': decoded.push_back('\n'); break;
            case 't': decoded.push_back('\t'); break;
            case '\\': decoded.push_back('\\'); break;
            case '"': decoded.push_back('"'); break;
            default:
              throw LexError(cur.loc(), std::string("invalid escape sequence '\\") + esc + "'");
          }
          cur.advance();
          continue;
        }
        decoded.push_back(ch);
        cur.advance();
      }
      make_token(TokenKind::StringLit, start);
      tokens.back().value = decoded;
      continue;
    }

    // Operators, longest match first.
    auto two = cur.text.substr(cur.pos, 2);
    if (two == "==" || two == "!=" || two == "<=" || two == ">=" || two == "&&" || two == "||") {
      cur.advance();
      cur.advance();
      make_token(TokenKind::Op, start);
      continue;
    }
    if (std::string("+-*/%<>=!").find(c) != std::string::npos) {
      cur.advance();
      make_token(TokenKind::Op, start);
      continue;
    }
    if (std::string("(){}[];,").find(c) != std::string::npos) {
      cur.advance();
      make_token(TokenKind::Punct, start);
      continue;
    }
    throw LexError(cur.loc(), std::string("illegal character '") + c + "'");
  }

  Token eof;
  eof.kind = TokenKind::EndOfFile;
  eof.line = cur.line;
  eof.col = cur.col;
  eof.offset = cur.pos;
  eof.end_offset = cur.pos;
  tokens.push_back(std::move(eof));
  return tokens;
}

}  // namespace badger
