#include "badger/ast.hpp"

#include "badger/lexer.hpp"

namespace badger {

const char* ast_kind_name(AstKind kind) {
  switch (kind) {
    case AstKind::TranslationUnit: return "TranslationUnit";
    case AstKind::FunctionDef: return "FunctionDef";
    case AstKind::Param: return "Param";
    case AstKind::VarDecl: return "VarDecl";
    case AstKind::Assign: return "Assign";
    case AstKind::BinaryOp: return "BinaryOp";
    case AstKind::UnaryOp: return "UnaryOp";
    case AstKind::Call: return "Call";
    case AstKind::Identifier: return "Identifier";
    case AstKind::IntLiteral: return "IntLiteral";
    case AstKind::StringLiteral: return "StringLiteral";
    case AstKind::ArrayIndex: return "ArrayIndex";
    case AstKind::If: return "If";
    case AstKind::While: return "While";
    case AstKind::Return: return "Return";
    case AstKind::Block: return "Block";
    case AstKind::ExprStmt: return "ExprStmt";
  }
  return "?";
}

namespace {

class Parser {
 public:
  Parser(const SourceFile& file, std::vector<Token> tokens)
      : file_(file), tokens_(std::move(tokens)) {}

  std::unique_ptr<AstNode> parse_translation_unit() {
    auto unit = begin_node(AstKind::TranslationUnit);
    while (!at(TokenKind::EndOfFile)) {
      unit->children.push_back(parse_function_def());
    }
    return finish(std::move(unit));
  }

 private:
  const SourceFile& file_;
  std::vector<Token> tokens_;
  size_t pos_ = 0;

  const Token& cur() const { return tokens_[pos_]; }
  const Token& prev() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1]; }
  bool at(TokenKind kind) const { return cur().kind == kind; }
  bool at_text(const char* text) const { return cur().text == text; }
  bool at_kw(const char* kw) const { return at(TokenKind::Keyword) && at_text(kw); }

  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = at(TokenKind::EndOfFile) ? "end of file" : "'" + cur().text + "'";
    throw ParseError(SourceLoc{file_.path(), cur().line, cur().col}, expected, found);
  }

  const Token& expect_text(const char* text, const char* what) {
    if (!at_text(text)) fail(what);
    return advance();
  }

  // Node span bookkeeping: nodes open at the current token and close at the
  // previous one once their children are parsed.
  std::unique_ptr<AstNode> begin_node(AstKind kind) {
    auto node = std::make_unique<AstNode>();
    node->kind = kind;
    node->file = file_.path();
    node->start_line = cur().line;
    node->start_col = cur().col;
    spans_.push_back(cur().offset);
    return node;
  }

  std::unique_ptr<AstNode> finish(std::unique_ptr<AstNode> node) {
    size_t begin = spans_.back();
    spans_.pop_back();
    node->end_line = prev().line;
    node->end_col = prev().col + static_cast<int>(prev().end_offset - prev().offset);
    node->code = file_.content().substr(begin, prev().end_offset - begin);
    return node;
  }

  std::vector<size_t> spans_;

  std::string parse_type() {
    if (!at_kw("int") && !at_kw("char")) fail("type ('int' or 'char')");
    return advance().text;
  }

  std::unique_ptr<AstNode> parse_function_def() {
    auto fn = begin_node(AstKind::FunctionDef);
    fn->type = parse_type();
    if (!at(TokenKind::Identifier)) fail("function name");
    fn->name = advance().text;
    expect_text("(", "'('");
    if (!at_text(")")) {
      while (true) {
        fn->children.push_back(parse_param());
        if (at_text(",")) {
          advance();
          continue;
        }
        break;
      }
    }
    if (!at_text(")")) fail("parameter or ')'");
    advance();
    if (!at_text("{")) fail("function body '{'");
    fn->children.push_back(parse_block());
    return finish(std::move(fn));
  }

  std::unique_ptr<AstNode> parse_param() {
    auto param = begin_node(AstKind::Param);
    param->type = parse_type();
    if (!at(TokenKind::Identifier)) fail("parameter name");
    param->name = advance().text;
    if (at_text("[")) {
      advance();
      if (at(TokenKind::IntLit)) advance();  // size is documentation only
      expect_text("]", "']'");
      param->is_array = true;
    }
    return finish(std::move(param));
  }

  std::unique_ptr<AstNode> parse_block() {
    auto block = begin_node(AstKind::Block);
    expect_text("{", "'{'");
    while (!at_text("}")) {
      if (at(TokenKind::EndOfFile)) fail("statement or '}'");
      block->children.push_back(parse_statement());
    }
    advance();
    return finish(std::move(block));
  }

  std::unique_ptr<AstNode> parse_statement() {
    if (at_kw("int") || at_kw("char")) return parse_var_decl();
    if (at_kw("if")) return parse_if();
    if (at_kw("while")) return parse_while();
    if (at_kw("return")) return parse_return();
    if (at_text("{")) return parse_block();
    return parse_expr_or_assign();
  }

  std::unique_ptr<AstNode> parse_var_decl() {
    auto decl = begin_node(AstKind::VarDecl);
    decl->type = parse_type();
    if (!at(TokenKind::Identifier)) fail("variable name");
    decl->name = advance().text;
    if (at_text("[")) {
      advance();
      if (!at(TokenKind::IntLit)) fail("constant array size");
      decl->children.push_back(parse_primary());  // the size literal
      expect_text("]", "']'");
      decl->is_array = true;
    }
    if (at_text("=")) {
      advance();
      decl->children.push_back(parse_expr());
    }
    expect_text(";", "';'");
    return finish(std::move(decl));
  }

  std::unique_ptr<AstNode> parse_if() {
    auto node = begin_node(AstKind::If);
    advance();  // 'if'
    expect_text("(", "'('");
    node->children.push_back(parse_expr());
    expect_text(")", "')'");
    node->children.push_back(parse_statement());
    if (at_kw("else")) {
      advance();
      node->children.push_back(parse_statement());
    }
    return finish(std::move(node));
  }

  std::unique_ptr<AstNode> parse_while() {
    auto node = begin_node(AstKind::While);
    advance();  // 'while'
    expect_text("(", "'('");
    node->children.push_back(parse_expr());
    expect_text(")", "')'");
    node->children.push_back(parse_statement());
    return finish(std::move(node));
  }

  std::unique_ptr<AstNode> parse_return() {
    auto node = begin_node(AstKind::Return);
    advance();  // 'return'
    if (!at_text(";")) node->children.push_back(parse_expr());
    expect_text(";", "';'");
    return finish(std::move(node));
  }

  std::unique_ptr<AstNode> parse_expr_or_assign() {
    auto stmt_begin = pos_;
    auto expr = parse_expr();
    if (at_text("=") &&
        (expr->kind == AstKind::Identifier || expr->kind == AstKind::ArrayIndex)) {
      // Rewind span bookkeeping: the Assign node spans the whole statement.
      auto assign = std::make_unique<AstNode>();
      assign->kind = AstKind::Assign;
      assign->file = file_.path();
      assign->start_line = tokens_[stmt_begin].line;
      assign->start_col = tokens_[stmt_begin].col;
      spans_.push_back(tokens_[stmt_begin].offset);
      assign->name = expr->kind == AstKind::Identifier ? expr->name : expr->child(0)->name;
      advance();  // '='
      assign->children.push_back(std::move(expr));
      assign->children.push_back(parse_expr());
      expect_text(";", "';'");
      return finish(std::move(assign));
    }
    if (at_text("=")) fail("assignable target before '='");

    auto stmt = std::make_unique<AstNode>();
    stmt->kind = AstKind::ExprStmt;
    stmt->file = file_.path();
    stmt->start_line = tokens_[stmt_begin].line;
    stmt->start_col = tokens_[stmt_begin].col;
    spans_.push_back(tokens_[stmt_begin].offset);
    stmt->children.push_back(std::move(expr));
    expect_text(";", "';'");
    return finish(std::move(stmt));
  }

  // Precedence climbing. Levels, loosest first: || &&, equality, relational,
  // additive, multiplicative.
  std::unique_ptr<AstNode> parse_expr() { return parse_binary(0); }

  static int binary_level(const std::string& op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return 0;
  }

  std::unique_ptr<AstNode> parse_binary(int min_level) {
    size_t begin_tok = pos_;
    auto lhs = parse_unary();
    while (at(TokenKind::Op)) {
      int level = binary_level(cur().text);
      if (level == 0 || level < min_level) break;
      auto op = std::make_unique<AstNode>();
      op->kind = AstKind::BinaryOp;
      op->file = file_.path();
      op->start_line = tokens_[begin_tok].line;
      op->start_col = tokens_[begin_tok].col;
      spans_.push_back(tokens_[begin_tok].offset);
      op->name = advance().text;
      op->children.push_back(std::move(lhs));
      op->children.push_back(parse_binary(level + 1));
      lhs = finish(std::move(op));
    }
    return lhs;
  }

  std::unique_ptr<AstNode> parse_unary() {
    if (at(TokenKind::Op) && (at_text("-") || at_text("!"))) {
      auto node = begin_node(AstKind::UnaryOp);
      node->name = advance().text;
      node->children.push_back(parse_unary());
      return finish(std::move(node));
    }
    return parse_postfix();
  }

  std::unique_ptr<AstNode> parse_postfix() {
    size_t begin_tok = pos_;
    auto base = parse_primary();
    while (true) {
      if (at_text("(")) {
        if (base->kind != AstKind::Identifier) fail("call on a function name");
        auto call = std::make_unique<AstNode>();
        call->kind = AstKind::Call;
        call->file = file_.path();
        call->start_line = tokens_[begin_tok].line;
        call->start_col = tokens_[begin_tok].col;
        spans_.push_back(tokens_[begin_tok].offset);
        call->name = base->name;
        advance();  // '('
        if (!at_text(")")) {
          while (true) {
            call->children.push_back(parse_expr());
            if (at_text(",")) {
              advance();
              continue;
            }
            break;
          }
        }
        expect_text(")", "argument or ')'");
        base = finish(std::move(call));
        continue;
      }
      if (at_text("[")) {
        if (base->kind != AstKind::Identifier) fail("array index on a variable name");
        auto idx = std::make_unique<AstNode>();
        idx->kind = AstKind::ArrayIndex;
        idx->file = file_.path();
        idx->start_line = tokens_[begin_tok].line;
        idx->start_col = tokens_[begin_tok].col;
        spans_.push_back(tokens_[begin_tok].offset);
        advance();  // '['
        idx->children.push_back(std::move(base));
        idx->children.push_back(parse_expr());
        expect_text("]", "']'");
        base = finish(std::move(idx));
        continue;
      }
      break;
    }
    return base;
  }

  std::unique_ptr<AstNode> parse_primary() {
    if (at(TokenKind::IntLit)) {
      auto node = begin_node(AstKind::IntLiteral);
      node->value = advance().text;
      return finish(std::move(node));
    }
    if (at(TokenKind::StringLit)) {
      auto node = begin_node(AstKind::StringLiteral);
      node->value = advance().value;
      return finish(std::move(node));
    }
    if (at(TokenKind::Identifier)) {
      auto node = begin_node(AstKind::Identifier);
      node->name = advance().text;
      return finish(std::move(node));
    }
    if (at_text("(")) {
      advance();
      auto inner = parse_expr();
      expect_text(")", "')'");
      return inner;
    }
    fail("expression");
  }
};

void number_preorder(AstNode* node, int& next_id) {
  node->id = next_id++;
  for (auto& child : node->children) number_preorder(child.get(), next_id);
}

}  // namespace

std::unique_ptr<AstNode> parse_file(const SourceFile& file) {
  Parser parser(file, tokenize(file));
  return parser.parse_translation_unit();
}

ParseResult parse_files(const std::vector<SourceFile>& files) {
  ParseResult result;
  result.root = std::make_unique<AstNode>();
  result.root->kind = AstKind::TranslationUnit;
  result.root->name = "<root>";

  for (const auto& file : files) {
    try {
      result.root->children.push_back(parse_file(file));
    } catch (const LexError& e) {
      result.errors.push_back({file.path(), e.loc().line, e.loc().col, e.what()});
    } catch (const ParseError& e) {
      result.errors.push_back({file.path(), e.loc().line, e.loc().col, e.what()});
    }
  }
  int next_id = 0;
  number_preorder(result.root.get(), next_id);
  return result;
}

}  // namespace badger
