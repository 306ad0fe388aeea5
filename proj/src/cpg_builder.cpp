#include "badger/cpg_builder.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace badger {

// Friend of Cpg: the only mutation path into the otherwise immutable graph.
class CpgBuilder {
 public:
  static std::vector<SourceFile>& files(Cpg& c) { return c.files_; }
  static std::vector<CpgNode>& nodes(Cpg& c) { return c.nodes_; }
  static std::vector<CpgEdge>& edges(Cpg& c) { return c.edges_; }
  static BuildReport& report(Cpg& c) { return c.report_; }
  static std::string& language(Cpg& c) { return c.language_; }
  static void finalize_structure(Cpg& c) {
    c.rebuild_indexes();
    c.compute_method_cfgs();
  }
  static void refresh_indexes(Cpg& c) { c.rebuild_indexes(); }
};

namespace {

std::atomic<uint64_t> g_build_count{0};

bool is_relational(const std::string& op) {
  return op == "<" || op == "<=" || op == ">" || op == ">=" || op == "==" || op == "!=";
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct VarInfo {
  std::string type;
  bool is_array = false;
};
using Scope = std::unordered_map<std::string, VarInfo>;

// ---------------------------------------------------------------------------
// Phase A: node and structural-edge construction (serial, deterministic).
// ---------------------------------------------------------------------------

class Construction {
 public:
  Construction(Cpg& cpg, const AstNode& root)
      : files_(CpgBuilder::files(cpg)),
        nodes_(CpgBuilder::nodes(cpg)),
        edges_(CpgBuilder::edges(cpg)),
        root_(root) {
    nodes_.emplace_back();  // id 0 sentinel
  }

  void run() {
    // Methods and params first so call sites can resolve forward references.
    for (const auto& tu : root_.children)
      for (const auto& fn : tu->children)
        if (fn->kind == AstKind::FunctionDef) declare_method(*fn);

    for (const auto& tu : root_.children)
      for (const auto& fn : tu->children)
        if (fn->kind == AstKind::FunctionDef) build_body(*fn);
  }

 private:
  std::vector<SourceFile>& files_;
  std::vector<CpgNode>& nodes_;
  std::vector<CpgEdge>& edges_;
  const AstNode& root_;

  struct MethodDecl {
    NodeId method = kNoNode;
    std::vector<NodeId> params;
    const AstNode* ast = nullptr;
  };
  std::vector<MethodDecl> methods_;
  std::unordered_map<std::string, NodeId> method_by_name_;  // first definition wins

  NodeId current_method_ = kNoNode;
  Scope scope_;
  std::vector<NodeId> method_stmts_;

  uint32_t file_index(const std::string& path) {
    for (uint32_t i = 0; i < files_.size(); ++i)
      if (files_[i].path() == path) return i;
    return UINT32_MAX;
  }

  NodeId add_node(NodeKind kind, const AstNode& ast) {
    CpgNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.kind = kind;
    n.file_index = file_index(ast.file);
    n.line = ast.start_line;
    n.col = ast.start_col;
    n.end_line = ast.end_line;
    n.end_col = ast.end_col;
    n.code = ast.code;
    n.method_id = current_method_;
    nodes_.push_back(std::move(n));
    return nodes_.back().id;
  }

  CpgNode& node(NodeId id) { return nodes_[id]; }

  void add_edge(NodeId src, NodeId dst, EdgeKind kind, std::string label = "") {
    edges_.push_back({src, dst, kind, std::move(label)});
  }

  void declare_method(const AstNode& fn) {
    current_method_ = kNoNode;
    MethodDecl decl;
    decl.ast = &fn;
    decl.method = add_node(NodeKind::Method, fn);
    CpgNode& m = node(decl.method);
    m.name = fn.name;
    m.type = fn.type;
    size_t brace = fn.code.find('{');
    m.code = trim_signature(brace == std::string::npos ? fn.code : fn.code.substr(0, brace));

    current_method_ = decl.method;
    for (const auto& child : fn.children) {
      if (child->kind != AstKind::Param) continue;
      NodeId p = add_node(NodeKind::Param, *child);
      CpgNode& pn = node(p);
      pn.name = child->name;
      pn.type = child->type;
      pn.is_array = child->is_array;
      pn.def_vars = {child->name};
      pn.kill_vars = {child->name};
      add_edge(decl.method, p, EdgeKind::AST);
      decl.params.push_back(p);
    }
    method_by_name_.emplace(fn.name, decl.method);  // keeps the first definition
    methods_.push_back(std::move(decl));
  }

  static std::string trim_signature(std::string text) {
    while (!text.empty() && (text.back() == ' ' || text.back() == '\n' || text.back() == '\t'))
      text.pop_back();
    return text;
  }

  void build_body(const AstNode& fn) {
    const MethodDecl* decl = nullptr;
    for (const auto& d : methods_)
      if (d.ast == &fn) decl = &d;
    current_method_ = decl->method;
    method_stmts_.clear();

    scope_.clear();
    for (const auto& child : fn.children)
      if (child->kind == AstKind::Param) scope_[child->name] = {child->type, child->is_array};
    collect_locals(*fn.children.back());

    const AstNode& body = *fn.children.back();
    NodeId body_block = add_node(NodeKind::Block, body);
    add_edge(decl->method, body_block, EdgeKind::AST);
    std::vector<NodeId> stmts;
    for (const auto& s : body.children) stmts.push_back(build_stmt(*s, body_block));

    NodeId exit = add_node(NodeKind::MethodReturn, fn);
    CpgNode& ex = node(exit);
    ex.code = "RET";
    ex.line = fn.end_line;
    ex.col = fn.end_col;
    ex.end_line = fn.end_line;
    ex.end_col = fn.end_col;
    ex.use_vars = {kReturnVar};
    add_edge(decl->method, exit, EdgeKind::AST);

    for (NodeId s : method_stmts_) add_edge(decl->method, s, EdgeKind::CONTAINS);

    // Statement-level CFG.
    std::vector<NodeId> frontier = {decl->method};
    frontier = wire_sequence(body.children, frontier, exit);
    connect(frontier, exit);
  }

  void collect_locals(const AstNode& n) {
    if (n.kind == AstKind::VarDecl) scope_[n.name] = {n.type, n.is_array};
    for (const auto& c : n.children) collect_locals(*c);
  }

  // --- statement nodes -----------------------------------------------------

  struct StmtFacts {
    std::vector<std::string> defs, uses, kills, index_vars;
    std::vector<CpgComparison> comparisons;
    bool has_array_access = false;
  };

  NodeId build_stmt(const AstNode& s, NodeId parent) {
    switch (s.kind) {
      case AstKind::VarDecl: {
        NodeId id = add_node(NodeKind::Local, s);
        CpgNode& n = node(id);
        n.name = s.name;
        n.type = s.type;
        n.is_array = s.is_array;
        n.is_statement = true;
        n.stmt_id = id;
        add_edge(parent, id, EdgeKind::AST);
        StmtFacts facts;
        bool has_init = !s.children.empty() &&
                        !(s.is_array && s.children.size() == 1);  // lone child is the size
        for (const auto& c : s.children) walk_expr(*c, id, id, kNoNode, -1, facts);
        if (has_init) {
          facts.defs.push_back(s.name);
          facts.kills.push_back(s.name);
        }
        finish_stmt(id, facts);
        return id;
      }
      case AstKind::Assign: {
        NodeId id = add_node(NodeKind::Assign, s);
        CpgNode& n = node(id);
        n.name = s.name;
        n.is_statement = true;
        n.stmt_id = id;
        add_edge(parent, id, EdgeKind::AST);
        StmtFacts facts;
        const AstNode& lhs = *s.child(0);
        if (lhs.kind == AstKind::Identifier) {
          // Scalar target: pure (strong) definition, not a use.
          NodeId lv = add_node(NodeKind::Identifier, lhs);
          node(lv).name = lhs.name;
          node(lv).is_array = is_array_var(lhs.name);
          node(lv).stmt_id = id;
          add_edge(id, lv, EdgeKind::AST);
          facts.kills.push_back(lhs.name);
        } else {
          // a[i] = ...: weak update, the array is both used and defined.
          walk_expr(lhs, id, id, kNoNode, -1, facts);
        }
        facts.defs.push_back(s.name);
        walk_expr(*s.child(1), id, id, kNoNode, -1, facts);
        finish_stmt(id, facts);
        return id;
      }
      case AstKind::ExprStmt: {
        const AstNode& e = *s.child(0);
        StmtFacts facts;
        if (e.kind == AstKind::Call) {
          NodeId id = make_call(e, parent, kNoNode, kNoNode, -1, facts, /*as_stmt=*/true);
          finish_stmt(id, facts);
          return id;
        }
        NodeId id = add_node(NodeKind::Block, s);
        node(id).is_statement = true;
        node(id).stmt_id = id;
        add_edge(parent, id, EdgeKind::AST);
        walk_expr(e, id, id, kNoNode, -1, facts);
        finish_stmt(id, facts);
        return id;
      }
      case AstKind::If:
      case AstKind::While: {
        NodeId id = add_node(NodeKind::ControlStructure, s);
        CpgNode& n = node(id);
        bool is_if = s.kind == AstKind::If;
        n.name = is_if ? "if" : "while";
        n.code = n.name + std::string(" (") + s.child(0)->code + ")";
        n.is_statement = true;
        n.stmt_id = id;
        add_edge(parent, id, EdgeKind::AST);
        StmtFacts facts;
        walk_expr(*s.child(0), id, id, kNoNode, -1, facts);
        finish_stmt(id, facts);
        for (size_t i = 1; i < s.child_count(); ++i) build_stmt(*s.child(i), id);
        return id;
      }
      case AstKind::Return: {
        NodeId id = add_node(NodeKind::Return, s);
        CpgNode& n = node(id);
        n.is_statement = true;
        n.stmt_id = id;
        add_edge(parent, id, EdgeKind::AST);
        StmtFacts facts;
        if (!s.children.empty()) {
          walk_expr(*s.child(0), id, id, kNoNode, -1, facts);
          facts.defs.push_back(kReturnVar);
          facts.kills.push_back(kReturnVar);
        }
        finish_stmt(id, facts);
        return id;
      }
      case AstKind::Block: {
        NodeId id = add_node(NodeKind::Block, s);
        add_edge(parent, id, EdgeKind::AST);
        for (const auto& c : s.children) build_stmt(*c, id);
        return id;
      }
      default: {
        // Grammar restricts statements to the kinds above.
        NodeId id = add_node(NodeKind::Block, s);
        node(id).is_statement = true;
        node(id).stmt_id = id;
        add_edge(parent, id, EdgeKind::AST);
        return id;
      }
    }
  }

  void finish_stmt(NodeId id, StmtFacts& facts) {
    CpgNode& n = node(id);
    sort_unique(facts.defs);
    sort_unique(facts.uses);
    sort_unique(facts.kills);
    sort_unique(facts.index_vars);
    n.def_vars = std::move(facts.defs);
    n.use_vars = std::move(facts.uses);
    n.kill_vars = std::move(facts.kills);
    n.index_vars = std::move(facts.index_vars);
    n.has_array_access = facts.has_array_access;
    n.comparisons = std::move(facts.comparisons);
    method_stmts_.push_back(id);
  }

  bool is_array_var(const std::string& name) const {
    auto it = scope_.find(name);
    return it != scope_.end() && it->second.is_array;
  }

  // --- expression nodes ----------------------------------------------------
  //
  // stmt: owning statement; parent: AST parent (statement or enclosing call);
  // arg_call/arg_pos: active ARG attribution for top-level leaves of a call
  // argument (kNoNode when not directly inside an argument).

  void walk_expr(const AstNode& e, NodeId stmt, NodeId parent, NodeId arg_call, int arg_pos,
                 StmtFacts& facts) {
    switch (e.kind) {
      case AstKind::Identifier: {
        NodeId id = add_node(NodeKind::Identifier, e);
        node(id).name = e.name;
        node(id).is_array = is_array_var(e.name);
        node(id).stmt_id = stmt;
        add_edge(parent, id, EdgeKind::AST);
        if (arg_call != kNoNode) add_edge(arg_call, id, EdgeKind::ARG, std::to_string(arg_pos));
        facts.uses.push_back(e.name);
        return;
      }
      case AstKind::IntLiteral:
      case AstKind::StringLiteral: {
        NodeId id = add_node(NodeKind::Literal, e);
        node(id).type = e.kind == AstKind::IntLiteral ? "int" : "string";
        node(id).value = e.value;
        node(id).stmt_id = stmt;
        add_edge(parent, id, EdgeKind::AST);
        if (arg_call != kNoNode) add_edge(arg_call, id, EdgeKind::ARG, std::to_string(arg_pos));
        return;
      }
      case AstKind::Call: {
        make_call(e, parent, stmt, arg_call, arg_pos, facts, /*as_stmt=*/false);
        return;
      }
      case AstKind::BinaryOp: {
        if (is_relational(e.name)) {
          CpgComparison cmp;
          cmp.relation = e.name;
          collect_idents(e, cmp.vars);
          sort_unique(cmp.vars);
          facts.comparisons.push_back(std::move(cmp));
        }
        walk_expr(*e.child(0), stmt, parent, arg_call, arg_pos, facts);
        walk_expr(*e.child(1), stmt, parent, arg_call, arg_pos, facts);
        return;
      }
      case AstKind::ArrayIndex: {
        facts.has_array_access = true;
        collect_idents(*e.child(1), facts.index_vars);
        for (const auto& c : e.children) walk_expr(*c, stmt, parent, arg_call, arg_pos, facts);
        return;
      }
      case AstKind::UnaryOp: {
        for (const auto& c : e.children) walk_expr(*c, stmt, parent, arg_call, arg_pos, facts);
        return;
      }
      default:
        return;
    }
  }

  // All identifiers under an expression, including sub-call arguments.
  static void collect_idents(const AstNode& e, std::vector<std::string>& out) {
    if (e.kind == AstKind::Identifier) out.push_back(e.name);
    for (const auto& c : e.children) collect_idents(*c, out);
  }

  // Identifiers belonging to the expression itself: sub-call arguments are
  // attributed to the sub-call.
  static void collect_top_level_vars(const AstNode& e, std::vector<std::string>& out) {
    if (e.kind == AstKind::Identifier) out.push_back(e.name);
    if (e.kind == AstKind::Call) return;
    for (const auto& c : e.children) collect_top_level_vars(*c, out);
  }

  NodeId make_call(const AstNode& e, NodeId parent, NodeId stmt, NodeId arg_call, int arg_pos,
                   StmtFacts& facts, bool as_stmt) {
    NodeId id = add_node(NodeKind::Call, e);
    CpgNode& n = node(id);
    n.name = e.name;
    n.is_statement = as_stmt;
    n.stmt_id = as_stmt ? id : stmt;
    NodeId owner_stmt = n.stmt_id;
    add_edge(parent, id, EdgeKind::AST);
    if (arg_call != kNoNode) add_edge(arg_call, id, EdgeKind::ARG, std::to_string(arg_pos));

    auto callee = method_by_name_.find(e.name);
    if (callee != method_by_name_.end()) add_edge(id, callee->second, EdgeKind::CALL);

    std::vector<CpgArg> args;
    for (size_t i = 0; i < e.child_count(); ++i) {
      const AstNode& arg = *e.child(i);
      CpgArg info;
      info.code = arg.code;
      collect_top_level_vars(arg, info.vars);
      sort_unique(info.vars);

      size_t first_new = nodes_.size();
      walk_expr(arg, owner_stmt, id, id, static_cast<int>(i), facts);
      for (NodeId nn = static_cast<NodeId>(first_new); nn < nodes_.size(); ++nn)
        if (nodes_[nn].kind == NodeKind::Call) info.calls.push_back(nn);

      // An array name passed to a call is a potential (weak) definition.
      if (arg.kind == AstKind::Identifier && is_array_var(arg.name))
        facts.defs.push_back(arg.name);
      args.push_back(std::move(info));
    }
    node(id).args = std::move(args);
    return id;
  }

  // --- CFG wiring ------------------------------------------------------------

  void connect(const std::vector<NodeId>& frontier, NodeId to) {
    std::set<NodeId> uniq(frontier.begin(), frontier.end());
    for (NodeId f : uniq) add_edge(f, to, EdgeKind::CFG);
  }

  std::vector<NodeId> wire_sequence(const std::vector<std::unique_ptr<AstNode>>& stmts,
                                    std::vector<NodeId> frontier, NodeId exit) {
    for (const auto& s : stmts) frontier = wire_stmt(*s, std::move(frontier), exit);
    return frontier;
  }

  std::vector<NodeId> wire_stmt(const AstNode& s, std::vector<NodeId> frontier, NodeId exit) {
    NodeId id = stmt_node_of(s);
    switch (s.kind) {
      case AstKind::VarDecl:
      case AstKind::Assign:
      case AstKind::ExprStmt:
        connect(frontier, id);
        return {id};
      case AstKind::Return:
        connect(frontier, id);
        add_edge(id, exit, EdgeKind::CFG);
        return {};
      case AstKind::If: {
        connect(frontier, id);
        auto then_f = wire_stmt(*s.child(1), {id}, exit);
        if (s.child_count() > 2) {
          auto else_f = wire_stmt(*s.child(2), {id}, exit);
          then_f.insert(then_f.end(), else_f.begin(), else_f.end());
          return then_f;
        }
        then_f.push_back(id);
        return then_f;
      }
      case AstKind::While: {
        connect(frontier, id);
        auto body_f = wire_stmt(*s.child(1), {id}, exit);
        connect(body_f, id);  // back edge
        return {id};
      }
      case AstKind::Block: {
        // Transparent for control flow.
        return wire_sequence(s.children, std::move(frontier), exit);
      }
      default:
        connect(frontier, id);
        return {id};
    }
  }

  // Maps a statement AST node back to its CPG node. Statements are created in
  // source order, so the match is by exact span.
  std::unordered_map<const AstNode*, NodeId> stmt_map_;

  NodeId stmt_node_of(const AstNode& s) {
    auto it = stmt_map_.find(&s);
    if (it != stmt_map_.end()) return it->second;
    // Two statements never share a start position, so (line, col) is enough.
    for (const CpgNode& n : nodes_) {
      if (n.id == kNoNode || n.method_id != current_method_) continue;
      if (n.stmt_id != n.id) continue;
      if (n.line == s.start_line && n.col == s.start_col) {
        stmt_map_[&s] = n.id;
        return n.id;
      }
    }
    return kNoNode;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Phase B: per-method dataflow kernels (parallel).
// ---------------------------------------------------------------------------

namespace {

struct KernelOutput {
  std::vector<CpgEdge> edges;
  std::vector<AnalysisWarning> warnings;
};

struct DefSite {
  NodeId site;
  std::string var;
};

KernelOutput run_method_kernel(const Cpg& cpg, NodeId method) {
  KernelOutput out;
  const MethodCfg* mc = cpg.method_cfg(method);
  if (mc == nullptr) return out;

  const auto& cfg_nodes = mc->cfg_nodes;
  std::unordered_map<NodeId, size_t> local;
  for (size_t i = 0; i < cfg_nodes.size(); ++i) local[cfg_nodes[i]] = i;

  // Params of this method, in declaration order.
  std::vector<NodeId> params;
  for (const auto& [dst, e] : cpg.out(method, EdgeKind::AST))
    if (cpg.node(dst).kind == NodeKind::Param) params.push_back(dst);

  // Definition sites: params seed the entry, statements carry their own.
  std::vector<DefSite> defs;
  std::unordered_map<std::string, std::vector<size_t>> defs_of_var;
  auto add_def = [&](NodeId site, const std::string& var) {
    defs_of_var[var].push_back(defs.size());
    defs.push_back({site, var});
  };
  for (NodeId p : params) add_def(p, cpg.node(p).name);
  for (NodeId n : cfg_nodes)
    for (const auto& v : cpg.node(n).def_vars) add_def(n, v);

  size_t nd = defs.size();
  auto bitset_words = (nd + 63) / 64;
  std::vector<std::vector<uint64_t>> in(cfg_nodes.size()), gen(cfg_nodes.size()),
      kill(cfg_nodes.size());
  for (size_t i = 0; i < cfg_nodes.size(); ++i) {
    in[i].assign(bitset_words, 0);
    gen[i].assign(bitset_words, 0);
    kill[i].assign(bitset_words, 0);
  }
  auto set_bit = [&](std::vector<uint64_t>& bs, size_t bit) { bs[bit / 64] |= 1ull << (bit % 64); };
  auto get_bit = [&](const std::vector<uint64_t>& bs, size_t bit) {
    return (bs[bit / 64] >> (bit % 64)) & 1;
  };

  for (size_t i = 0; i < cfg_nodes.size(); ++i) {
    NodeId n = cfg_nodes[i];
    const CpgNode& cn = cpg.node(n);
    if (n == mc->entry) {
      for (size_t d = 0; d < nd; ++d)
        if (cpg.node(defs[d].site).kind == NodeKind::Param) set_bit(gen[i], d);
      continue;
    }
    for (size_t d = 0; d < nd; ++d)
      if (defs[d].site == n) set_bit(gen[i], d);
    for (const auto& kv : cn.kill_vars) {
      auto it = defs_of_var.find(kv);
      if (it == defs_of_var.end()) continue;
      for (size_t d : it->second)
        if (defs[d].site != n) set_bit(kill[i], d);
    }
  }

  // Forward may-analysis to fixpoint over the method CFG.
  bool changed = true;
  std::vector<uint64_t> tmp(bitset_words);
  while (changed) {
    changed = false;
    for (size_t i = 0; i < cfg_nodes.size(); ++i) {
      std::fill(tmp.begin(), tmp.end(), 0);
      for (const auto& [src, e] : cpg.in(cfg_nodes[i], EdgeKind::CFG)) {
        auto it = local.find(src);
        if (it == local.end()) continue;
        size_t p = it->second;
        // OUT[p] = gen[p] | (IN[p] & ~kill[p])
        for (size_t w = 0; w < bitset_words; ++w)
          tmp[w] |= gen[p][w] | (in[p][w] & ~kill[p][w]);
      }
      if (tmp != in[i]) {
        in[i] = tmp;
        changed = true;
      }
    }
  }

  // REACHING_DEF edges: definition site -> use site, labeled by variable.
  std::vector<CpgEdge> rd, cdg, binding;
  for (size_t i = 0; i < cfg_nodes.size(); ++i) {
    NodeId u = cfg_nodes[i];
    const CpgNode& un = cpg.node(u);
    for (const auto& v : un.use_vars) {
      auto it = defs_of_var.find(v);
      if (it == defs_of_var.end()) continue;
      for (size_t d : it->second)
        if (get_bit(in[i], d)) rd.push_back({defs[d].site, u, EdgeKind::REACHING_DEF, v});
    }
  }

  // Inter-procedural binding edges, caller side: argument definitions flow
  // into callee Params, callee MethodReturns flow back to the call site.
  for (size_t i = 0; i < cfg_nodes.size(); ++i) {
    NodeId s = cfg_nodes[i];
    if (!cpg.node(s).is_statement) continue;
    for (NodeId c : cpg.calls_in_stmt(s)) {
      const CpgNode& call = cpg.node(c);
      const auto& callees = cpg.out(c, EdgeKind::CALL);
      if (callees.empty()) continue;
      NodeId callee = callees.front().first;

      std::vector<NodeId> callee_params;
      for (const auto& [dst, e] : cpg.out(callee, EdgeKind::AST))
        if (cpg.node(dst).kind == NodeKind::Param) callee_params.push_back(dst);

      NodeId callee_exit = kNoNode;
      const MethodCfg* callee_cfg = cpg.method_cfg(callee);
      if (callee_cfg != nullptr) callee_exit = callee_cfg->exit;

      for (size_t a = 0; a < call.args.size() && a < callee_params.size(); ++a) {
        for (const auto& v : call.args[a].vars) {
          auto it = defs_of_var.find(v);
          if (it == defs_of_var.end()) continue;
          for (size_t d : it->second)
            if (get_bit(in[i], d))
              binding.push_back({defs[d].site, callee_params[a], EdgeKind::REACHING_DEF, v});
        }
        for (NodeId sub : call.args[a].calls) {
          const auto& sub_callees = cpg.out(sub, EdgeKind::CALL);
          if (sub_callees.empty()) continue;
          const MethodCfg* sub_cfg = cpg.method_cfg(sub_callees.front().first);
          if (sub_cfg != nullptr)
            binding.push_back(
                {sub_cfg->exit, callee_params[a], EdgeKind::REACHING_DEF, kReturnVar});
        }
      }
      if (callee_exit != kNoNode)
        binding.push_back({callee_exit, s, EdgeKind::REACHING_DEF, kReturnVar});
    }
  }

  // Control-dependence edges via the post-dominance frontier walk.
  for (NodeId b : cfg_nodes) {
    const auto& succs = cpg.out(b, EdgeKind::CFG);
    if (succs.size() < 2) continue;
    auto ipdom_of = [&](NodeId n) -> NodeId {
      auto it = mc->ipostdom.find(n);
      return it == mc->ipostdom.end() ? kNoNode : it->second;
    };
    NodeId stop = ipdom_of(b);
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& [s, e] : succs) {
      NodeId runner = s;
      while (runner != kNoNode && runner != stop) {
        if (seen.insert({b, runner}).second) cdg.push_back({b, runner, EdgeKind::CDG, ""});
        if (runner == ipdom_of(runner)) break;  // at the root
        runner = ipdom_of(runner);
      }
    }
  }

  // Bind-time warnings: used but never defined / undeclared identifiers.
  {
    std::set<std::string> defined;
    for (const auto& d : defs) defined.insert(d.var);
    std::map<std::string, std::pair<int, std::string>> first_use;  // var -> (line, file)
    for (NodeId n : cfg_nodes) {
      const CpgNode& cn = cpg.node(n);
      for (const auto& v : cn.use_vars) {
        if (v == kReturnVar || defined.count(v)) continue;
        auto it = first_use.find(v);
        if (it == first_use.end() || cn.line < it->second.first)
          first_use[v] = {cn.line, cpg.path_of(n)};
      }
    }
    for (const auto& [var, where] : first_use)
      out.warnings.push_back(
          {where.second, where.first, "variable '" + var + "' is used but never defined"});
  }

  auto edge_less = [](const CpgEdge& a, const CpgEdge& b) {
    return std::tie(a.src, a.dst, a.label) < std::tie(b.src, b.dst, b.label);
  };
  std::sort(cdg.begin(), cdg.end(), edge_less);
  std::sort(rd.begin(), rd.end(), edge_less);
  rd.erase(std::unique(rd.begin(), rd.end(),
                       [](const CpgEdge& a, const CpgEdge& b) {
                         return a.src == b.src && a.dst == b.dst && a.label == b.label;
                       }),
           rd.end());
  std::sort(binding.begin(), binding.end(), edge_less);
  binding.erase(std::unique(binding.begin(), binding.end(),
                            [](const CpgEdge& a, const CpgEdge& b) {
                              return a.src == b.src && a.dst == b.dst && a.label == b.label;
                            }),
                binding.end());

  out.edges.reserve(cdg.size() + rd.size() + binding.size());
  for (auto& e : cdg) out.edges.push_back(std::move(e));
  for (auto& e : rd) out.edges.push_back(std::move(e));
  for (auto& e : binding) out.edges.push_back(std::move(e));
  return out;
}

}  // namespace

std::shared_ptr<const Cpg> build_cpg(std::vector<SourceFile> files, const BuildOptions& options) {
  g_build_count.fetch_add(1, std::memory_order_relaxed);

  auto parsed = parse_files(files);

  auto cpg = std::make_shared<Cpg>();
  CpgBuilder::files(*cpg) = std::move(files);
  CpgBuilder::language(*cpg) = options.language;
  CpgBuilder::report(*cpg).parse_errors = parsed.errors;

  // parse_files already skipped files that failed, so the root only holds
  // translation units that parsed.
  Construction construction(*cpg, *parsed.root);
  construction.run();

  CpgBuilder::finalize_structure(*cpg);

  const auto& methods = cpg->by_kind(NodeKind::Method);
  std::vector<KernelOutput> outputs(methods.size());

  int threads = options.threads;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (size_t i = 0; i < methods.size(); ++i)
    outputs[i] = run_method_kernel(*cpg, methods[i]);
#else
  (void)threads;
  for (size_t i = 0; i < methods.size(); ++i)
    outputs[i] = run_method_kernel(*cpg, methods[i]);
#endif

  for (auto& o : outputs) {
    for (auto& e : o.edges) CpgBuilder::edges(*cpg).push_back(std::move(e));
    for (auto& w : o.warnings) CpgBuilder::report(*cpg).warnings.push_back(std::move(w));
  }
  auto& warnings = CpgBuilder::report(*cpg).warnings;
  std::stable_sort(warnings.begin(), warnings.end(),
                   [](const AnalysisWarning& a, const AnalysisWarning& b) {
                     return std::tie(a.file, a.line, a.message) <
                            std::tie(b.file, b.line, b.message);
                   });

  CpgBuilder::refresh_indexes(*cpg);
  return cpg;
}

uint64_t cpg_build_count() { return g_build_count.load(std::memory_order_relaxed); }

}  // namespace badger
