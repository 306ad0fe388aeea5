#include "badger/cpg.hpp"

#include <algorithm>

#include "badger/dominators.hpp"

namespace badger {

namespace {
constexpr size_t kEdgeKinds = 7;
const std::vector<NodeId> kEmptyIds;
const std::vector<std::pair<NodeId, const CpgEdge*>> kEmptyAdj;
}  // namespace

const char* node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Method: return "Method";
    case NodeKind::Param: return "Param";
    case NodeKind::Local: return "Local";
    case NodeKind::Call: return "Call";
    case NodeKind::Identifier: return "Identifier";
    case NodeKind::Literal: return "Literal";
    case NodeKind::Assign: return "Assign";
    case NodeKind::ControlStructure: return "ControlStructure";
    case NodeKind::Return: return "Return";
    case NodeKind::MethodReturn: return "MethodReturn";
    case NodeKind::Block: return "Block";
  }
  return "?";
}

const char* edge_kind_name(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::AST: return "AST";
    case EdgeKind::CFG: return "CFG";
    case EdgeKind::REACHING_DEF: return "REACHING_DEF";
    case EdgeKind::CDG: return "CDG";
    case EdgeKind::CALL: return "CALL";
    case EdgeKind::ARG: return "ARG";
    case EdgeKind::CONTAINS: return "CONTAINS";
  }
  return "?";
}

bool parse_node_kind(const std::string& name, NodeKind& out) {
  for (int k = 0; k <= static_cast<int>(NodeKind::Block); ++k) {
    if (name == node_kind_name(static_cast<NodeKind>(k))) {
      out = static_cast<NodeKind>(k);
      return true;
    }
  }
  return false;
}

bool parse_edge_kind(const std::string& name, EdgeKind& out) {
  for (size_t k = 0; k < kEdgeKinds; ++k) {
    if (name == edge_kind_name(static_cast<EdgeKind>(k))) {
      out = static_cast<EdgeKind>(k);
      return true;
    }
  }
  return false;
}

const SourceFile* Cpg::file(const std::string& path) const {
  auto it = file_index_.find(path);
  return it == file_index_.end() ? nullptr : &files_[it->second];
}

uint32_t Cpg::file_index(const std::string& path) const {
  auto it = file_index_.find(path);
  return it == file_index_.end() ? UINT32_MAX : it->second;
}

const std::vector<NodeId>& Cpg::by_kind(NodeKind kind) const {
  size_t k = static_cast<size_t>(kind);
  return k < by_kind_.size() ? by_kind_[k] : kEmptyIds;
}

std::vector<NodeId> Cpg::by_name(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? std::vector<NodeId>{} : it->second;
}

std::vector<NodeId> Cpg::methods_named(const std::string& name) const {
  auto it = methods_by_name_.find(name);
  return it == methods_by_name_.end() ? std::vector<NodeId>{} : it->second;
}

std::vector<NodeId> Cpg::nodes_at(const std::string& file, int line) const {
  uint32_t fi = file_index(file);
  if (fi == UINT32_MAX) return {};
  auto it = by_file_line_.find({fi, line});
  return it == by_file_line_.end() ? std::vector<NodeId>{} : it->second;
}

size_t Cpg::adj_slot(NodeId id, EdgeKind kind) const {
  return static_cast<size_t>(id) * kEdgeKinds + static_cast<size_t>(kind);
}

const std::vector<std::pair<NodeId, const CpgEdge*>>& Cpg::out(NodeId id, EdgeKind kind) const {
  size_t slot = adj_slot(id, kind);
  return slot < out_.size() ? out_[slot] : kEmptyAdj;
}

const std::vector<std::pair<NodeId, const CpgEdge*>>& Cpg::in(NodeId id, EdgeKind kind) const {
  size_t slot = adj_slot(id, kind);
  return slot < in_.size() ? in_[slot] : kEmptyAdj;
}

const std::vector<NodeId>& Cpg::calls_in_stmt(NodeId stmt_id) const {
  auto it = stmt_calls_.find(stmt_id);
  return it == stmt_calls_.end() ? kEmptyIds : it->second;
}

const MethodCfg* Cpg::method_cfg(NodeId method_id) const {
  auto it = method_cfgs_.find(method_id);
  return it == method_cfgs_.end() ? nullptr : &it->second;
}

namespace {
bool dom_query(const std::unordered_map<NodeId, NodeId>& idom, NodeId root, NodeId a, NodeId b) {
  // Walk b's dominator chain up to the root looking for a.
  NodeId cur = b;
  while (true) {
    if (cur == a) return true;
    if (cur == root) return false;
    auto it = idom.find(cur);
    if (it == idom.end()) return false;  // unreachable node
    cur = it->second;
  }
}
}  // namespace

bool Cpg::dominates(NodeId a, NodeId b) const {
  const CpgNode& na = node(a);
  const CpgNode& nb = node(b);
  NodeId ma = na.kind == NodeKind::Method ? na.id : na.method_id;
  NodeId mb = nb.kind == NodeKind::Method ? nb.id : nb.method_id;
  if (ma != mb) return false;
  const MethodCfg* cfg = method_cfg(ma);
  if (cfg == nullptr) return false;
  return dom_query(cfg->idom, cfg->entry, a, b);
}

bool Cpg::postdominates(NodeId a, NodeId b) const {
  const CpgNode& nb = node(b);
  NodeId mb = nb.kind == NodeKind::Method ? nb.id : nb.method_id;
  const MethodCfg* cfg = method_cfg(mb);
  if (cfg == nullptr) return false;
  return dom_query(cfg->ipostdom, cfg->exit, a, b);
}

std::string Cpg::path_of(NodeId id) const {
  const CpgNode& n = node(id);
  return n.file_index == UINT32_MAX ? "" : files_[n.file_index].path();
}

NodeId Cpg::resolve_point(const std::string& file, int line) const {
  uint32_t fi = file_index(file);
  if (fi == UINT32_MAX)
    throw ToolError(ErrorCode::UnresolvedPoint, "unknown file: " + file);

  // Statements starting on the line.
  std::vector<NodeId> starting;
  auto it = by_file_line_.find({fi, line});
  if (it != by_file_line_.end()) {
    for (NodeId id : it->second)
      if (node(id).is_statement) starting.push_back(id);
  }
  if (!starting.empty()) {
    // Outermost first: drop candidates spanned by another candidate.
    std::vector<NodeId> top;
    for (NodeId c : starting) {
      bool nested = false;
      for (NodeId a : starting) {
        if (a == c) continue;
        const CpgNode& an = node(a);
        const CpgNode& cn = node(c);
        bool contains = (an.line < cn.line || (an.line == cn.line && an.col <= cn.col)) &&
                        (an.end_line > cn.end_line ||
                         (an.end_line == cn.end_line && an.end_col >= cn.end_col)) &&
                        an.id != cn.id;
        if (contains && an.id < cn.id) {
          nested = true;
          break;
        }
      }
      if (!nested) top.push_back(c);
    }
    NodeId best = top.front();
    for (NodeId c : top) {
      if (node(c).col < node(best).col || (node(c).col == node(best).col && c < best)) best = c;
    }
    return best;
  }

  // Fall back to the innermost statement spanning the line.
  NodeId best = kNoNode;
  int best_span = INT32_MAX;
  for (const CpgNode& n : nodes_) {
    if (!n.is_statement || n.file_index != fi) continue;
    if (n.line <= line && line <= n.end_line) {
      int span = n.end_line - n.line;
      if (span < best_span || (span == best_span && best != kNoNode && n.id < best)) {
        best = n.id;
        best_span = span;
      }
    }
  }
  if (best == kNoNode)
    throw ToolError(ErrorCode::UnresolvedPoint,
                    "no statement at " + file + ":" + std::to_string(line));
  return best;
}

void Cpg::rebuild_indexes() {
  by_kind_.assign(static_cast<size_t>(NodeKind::Block) + 1, {});
  by_name_.clear();
  methods_by_name_.clear();
  by_file_line_.clear();
  file_index_.clear();
  stmt_calls_.clear();
  out_.assign(nodes_.size() * kEdgeKinds, {});
  in_.assign(nodes_.size() * kEdgeKinds, {});

  for (uint32_t i = 0; i < files_.size(); ++i) file_index_[files_[i].path()] = i;

  for (const CpgNode& n : nodes_) {
    if (n.id == kNoNode) continue;
    by_kind_[static_cast<size_t>(n.kind)].push_back(n.id);
    if (!n.name.empty()) by_name_[n.name].push_back(n.id);
    if (n.kind == NodeKind::Method) methods_by_name_[n.name].push_back(n.id);
    if (n.file_index != UINT32_MAX) by_file_line_[{n.file_index, n.line}].push_back(n.id);
    if (n.kind == NodeKind::Call && n.stmt_id != kNoNode) stmt_calls_[n.stmt_id].push_back(n.id);
  }
  for (const CpgEdge& e : edges_) {
    out_[adj_slot(e.src, e.kind)].emplace_back(e.dst, &e);
    in_[adj_slot(e.dst, e.kind)].emplace_back(e.src, &e);
  }
}

void Cpg::compute_method_cfgs() {
  method_cfgs_.clear();
  for (NodeId m : by_kind(NodeKind::Method)) {
    MethodCfg cfg;
    cfg.method_id = m;
    cfg.entry = m;
    for (const CpgNode& n : nodes_) {
      if (n.kind == NodeKind::MethodReturn && n.method_id == m) {
        cfg.exit = n.id;
        break;
      }
    }
    cfg.cfg_nodes.push_back(m);
    for (const CpgNode& n : nodes_) {
      if (n.id == kNoNode || n.id == m) continue;
      if (n.method_id == m && (n.is_statement || n.kind == NodeKind::MethodReturn))
        cfg.cfg_nodes.push_back(n.id);
    }
    std::sort(cfg.cfg_nodes.begin(), cfg.cfg_nodes.end());

    auto succ = [&](NodeId id) {
      std::vector<NodeId> s;
      for (const auto& [dst, e] : out(id, EdgeKind::CFG)) s.push_back(dst);
      return s;
    };
    auto pred = [&](NodeId id) {
      std::vector<NodeId> s;
      for (const auto& [src, e] : in(id, EdgeKind::CFG)) s.push_back(src);
      return s;
    };
    cfg.idom = immediate_dominators(cfg.cfg_nodes, cfg.entry, succ, pred);
    cfg.ipostdom = immediate_dominators(cfg.cfg_nodes, cfg.exit, pred, succ);
    method_cfgs_[m] = std::move(cfg);
  }
}

}  // namespace badger
