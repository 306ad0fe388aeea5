#pragma once

#include <memory>
#include <string>
#include <vector>

#include "badger/diagnostics.hpp"
#include "badger/source.hpp"

namespace badger {

enum class AstKind {
  TranslationUnit,
  FunctionDef,
  Param,
  VarDecl,
  Assign,
  BinaryOp,
  UnaryOp,
  Call,
  Identifier,
  IntLiteral,
  StringLiteral,
  ArrayIndex,
  If,
  While,
  Return,
  Block,
  ExprStmt,
};

const char* ast_kind_name(AstKind kind);

struct AstNode {
  int id = 0;
  AstKind kind = AstKind::TranslationUnit;
  std::vector<std::unique_ptr<AstNode>> children;

  std::string name;   // identifier/callee/function/param/decl name; operator text for ops
  std::string value;  // decoded literal value
  bool is_array = false;  // VarDecl/Param declared with []
  std::string type;       // "int" or "char" for decls, params, function defs

  // Exact source span; code == file.slice(span).
  std::string file;
  int start_line = 0, start_col = 0;
  int end_line = 0, end_col = 0;
  std::string code;

  AstNode* child(size_t i) const { return children[i].get(); }
  size_t child_count() const { return children.size(); }
};

// A parsed codebase: synthetic root over one TranslationUnit per file that
// parsed, plus the per-file parse errors for the ones that did not.
struct ParseResult {
  std::unique_ptr<AstNode> root;
  std::vector<FileError> errors;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, std::string expected, std::string found)
      : std::runtime_error(loc.to_string() + ": expected " + expected + ", found " + found),
        loc_(std::move(loc)),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const SourceLoc& loc() const { return loc_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourceLoc loc_;
  std::string expected_;
  std::string found_;
};

// Parses every file; parsing is all-or-nothing per file and ids are assigned
// in a fixed pre-order over files in their given (lexicographic) order.
ParseResult parse_files(const std::vector<SourceFile>& files);

// Single-file helper used by tests.
std::unique_ptr<AstNode> parse_file(const SourceFile& file);

}  // namespace badger
