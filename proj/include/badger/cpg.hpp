#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "badger/diagnostics.hpp"
#include "badger/source.hpp"

namespace badger {

using NodeId = uint32_t;
constexpr NodeId kNoNode = 0;

enum class NodeKind : uint8_t {
  Method,
  Param,
  Local,
  Call,
  Identifier,
  Literal,
  Assign,
  ControlStructure,
  Return,
  MethodReturn,
  Block,
};

enum class EdgeKind : uint8_t {
  AST,
  CFG,
  REACHING_DEF,
  CDG,
  CALL,
  ARG,
  CONTAINS,
};

const char* node_kind_name(NodeKind kind);
const char* edge_kind_name(EdgeKind kind);
bool parse_node_kind(const std::string& name, NodeKind& out);
bool parse_edge_kind(const std::string& name, EdgeKind& out);

// Pseudo-variable carrying a method's return value along dependence edges.
inline const char* kReturnVar = "<ret>";

struct CpgArg {
  std::string code;                 // verbatim argument text
  std::vector<std::string> vars;    // identifiers appearing in the argument
  std::vector<NodeId> calls;        // call nodes nested in the argument
};

struct CpgComparison {
  std::string relation;             // one of < <= > >= == !=
  std::vector<std::string> vars;    // identifiers under the comparison
};

struct CpgNode {
  NodeId id = kNoNode;
  NodeKind kind = NodeKind::Block;
  std::string name;   // symbol name where applicable (callee text for calls)
  std::string code;   // verbatim snippet
  std::string type;   // decl type for Local/Param, literal kind for Literal
  std::string value;  // decoded literal value
  uint32_t file_index = UINT32_MAX;
  int line = 0, col = 0;          // start point (1-based)
  int end_line = 0, end_col = 0;  // span end
  NodeId method_id = kNoNode;     // enclosing Method (absent for Method nodes)
  NodeId stmt_id = kNoNode;       // enclosing statement-level node
  bool is_array = false;
  bool is_statement = false;  // CFG-carrying statement node

  std::vector<std::string> def_vars;   // variables this statement defines
  std::vector<std::string> use_vars;   // variables this statement uses
  std::vector<std::string> kill_vars;  // variables strongly redefined here
  std::vector<CpgArg> args;            // for Call nodes, one per argument
  std::vector<CpgComparison> comparisons;
  std::vector<std::string> index_vars;  // variables used as array subscripts
  bool has_array_access = false;
};

struct CpgEdge {
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  EdgeKind kind = EdgeKind::AST;
  // Variable name on REACHING_DEF edges, argument position on ARG edges.
  std::string label;
};

// Per-method control-flow metadata: entry/exit ids and immediate
// (post)dominators over the statement-level CFG.
struct MethodCfg {
  NodeId method_id = kNoNode;
  NodeId entry = kNoNode;  // the Method node
  NodeId exit = kNoNode;   // the MethodReturn node
  std::vector<NodeId> cfg_nodes;  // ascending id order, entry/exit included
  std::unordered_map<NodeId, NodeId> idom;      // rooted at entry
  std::unordered_map<NodeId, NodeId> ipostdom;  // rooted at exit
};

// The immutable Code Property Graph for one codebase. All queries are
// read-only; any number may run concurrently on the same instance.
class Cpg {
 public:
  Cpg() = default;

  Cpg(const Cpg&) = delete;
  Cpg& operator=(const Cpg&) = delete;

  const std::vector<SourceFile>& files() const { return files_; }
  const SourceFile* file(const std::string& path) const;
  uint32_t file_index(const std::string& path) const;  // UINT32_MAX if absent

  const std::vector<CpgNode>& nodes() const { return nodes_; }
  const std::vector<CpgEdge>& edges() const { return edges_; }
  const CpgNode& node(NodeId id) const { return nodes_[id]; }
  bool valid(NodeId id) const { return id > 0 && id < nodes_.size(); }

  const std::string& language() const { return language_; }
  const BuildReport& report() const { return report_; }

  const std::vector<NodeId>& by_kind(NodeKind kind) const;
  std::vector<NodeId> by_name(const std::string& name) const;
  std::vector<NodeId> methods_named(const std::string& name) const;
  std::vector<NodeId> nodes_at(const std::string& file, int line) const;

  // Neighbors over edges of one kind; pairs are (other node, edge label).
  const std::vector<std::pair<NodeId, const CpgEdge*>>& out(NodeId id, EdgeKind kind) const;
  const std::vector<std::pair<NodeId, const CpgEdge*>>& in(NodeId id, EdgeKind kind) const;

  // Statement-level node for a (file, 1-based line); prefers the outermost
  // statement starting on the line, then the innermost statement spanning it.
  NodeId resolve_point(const std::string& file, int line) const;

  // Call nodes contained in a statement (the statement itself included when
  // it is a call), ascending id order.
  const std::vector<NodeId>& calls_in_stmt(NodeId stmt_id) const;

  const MethodCfg* method_cfg(NodeId method_id) const;

  // a dominates b / a post-dominates b within one method (reflexive).
  bool dominates(NodeId a, NodeId b) const;
  bool postdominates(NodeId a, NodeId b) const;

  std::string path_of(NodeId id) const;

 private:
  friend class CpgBuilder;
  friend struct CpgSerde;

  // Rebuilds indexes and per-method dominator trees from the node/edge
  // tables; called after construction and after a cache load.
  void rebuild_indexes();
  void compute_method_cfgs();

  std::vector<SourceFile> files_;
  std::vector<CpgNode> nodes_;  // nodes_[0] is an unused sentinel; id == index
  std::vector<CpgEdge> edges_;
  std::string language_ = "minic";
  BuildReport report_;
  std::map<NodeId, MethodCfg> method_cfgs_;

  // Indexes, consistent with the node/edge tables by construction.
  std::vector<std::vector<NodeId>> by_kind_;
  std::unordered_map<std::string, std::vector<NodeId>> by_name_;
  std::unordered_map<std::string, std::vector<NodeId>> methods_by_name_;
  std::map<std::pair<uint32_t, int>, std::vector<NodeId>> by_file_line_;
  std::vector<std::vector<std::pair<NodeId, const CpgEdge*>>> out_, in_;  // flattened per kind
  std::unordered_map<std::string, uint32_t> file_index_;
  std::unordered_map<NodeId, std::vector<NodeId>> stmt_calls_;

  size_t adj_slot(NodeId id, EdgeKind kind) const;
};

}  // namespace badger
