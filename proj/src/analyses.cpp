#include "badger/analyses.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "badger/util.hpp"

namespace badger {

namespace {

int param_count(const Cpg& cpg, NodeId method) {
  int count = 0;
  for (const auto& [dst, e] : cpg.out(method, EdgeKind::AST))
    if (cpg.node(dst).kind == NodeKind::Param) ++count;
  return count;
}

NodeId resolve_method(const Cpg& cpg, const std::string& name) {
  auto ids = cpg.methods_named(name);
  if (ids.empty()) throw ToolError(ErrorCode::UnknownMethod, "no method named '" + name + "'");
  return ids.front();
}

}  // namespace

CallGraph get_call_graph(const Cpg& cpg, const std::string& root, int depth) {
  if (depth < 0) throw ToolError(ErrorCode::ValidationError, "depth must be >= 0");
  NodeId root_id = resolve_method(cpg, root);

  CallGraph graph;
  graph.root = root;
  graph.depth = depth;

  std::set<NodeId> visited = {root_id};
  std::vector<NodeId> level = {root_id};
  graph.methods.push_back(root);

  for (int hop = 1; hop <= depth && !level.empty(); ++hop) {
    std::vector<NodeId> next;
    for (NodeId m : level) {
      for (NodeId call : cpg.by_kind(NodeKind::Call)) {
        const CpgNode& cn = cpg.node(call);
        if (cn.method_id != m) continue;
        const auto& callees = cpg.out(call, EdgeKind::CALL);
        if (callees.empty()) continue;
        NodeId callee = callees.front().first;
        graph.edges.push_back(
            {cpg.node(m).name, cpg.node(callee).name, cpg.path_of(call), cn.line});
        if (visited.insert(callee).second) {
          next.push_back(callee);
          graph.methods.push_back(cpg.node(callee).name);
        }
      }
    }
    level = std::move(next);
  }
  return graph;
}

Reachability check_reachability(const Cpg& cpg, const std::string& from, const std::string& to) {
  NodeId from_id = resolve_method(cpg, from);
  NodeId to_id = resolve_method(cpg, to);

  Reachability result;
  std::map<NodeId, NodeId> parent;
  std::deque<NodeId> queue = {from_id};
  parent[from_id] = from_id;
  while (!queue.empty()) {
    NodeId m = queue.front();
    queue.pop_front();
    if (m == to_id) {
      result.reachable = true;
      std::vector<NodeId> chain;
      for (NodeId cur = to_id;; cur = parent[cur]) {
        chain.push_back(cur);
        if (cur == from_id) break;
      }
      std::reverse(chain.begin(), chain.end());
      for (NodeId id : chain) result.path.push_back(cpg.node(id).name);
      return result;
    }
    for (NodeId call : cpg.by_kind(NodeKind::Call)) {
      if (cpg.node(call).method_id != m) continue;
      const auto& callees = cpg.out(call, EdgeKind::CALL);
      if (callees.empty()) continue;
      NodeId callee = callees.front().first;
      if (!parent.count(callee)) {
        parent[callee] = m;
        queue.push_back(callee);
      }
    }
  }
  return result;
}

Json list_methods(const Cpg& cpg, const std::string& pattern) {
  struct Row {
    std::string name, file;
    int start_line, end_line, params;
  };
  std::vector<Row> rows;
  for (NodeId m : cpg.by_kind(NodeKind::Method)) {
    const CpgNode& n = cpg.node(m);
    if (!glob_match(pattern, n.name)) continue;
    rows.push_back({n.name, cpg.path_of(m), n.line, n.end_line, param_count(cpg, m)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.file, a.start_line, a.name) < std::tie(b.file, b.start_line, b.name);
  });
  Json items = Json::array();
  for (const auto& r : rows)
    items.push_back(Json{{"name", r.name},
                         {"file", r.file},
                         {"start_line", r.start_line},
                         {"end_line", r.end_line},
                         {"params", r.params}});
  return Json{{"methods", std::move(items)}};
}

Json get_method_source(const Cpg& cpg, const std::string& name) {
  auto ids = cpg.methods_named(name);
  if (ids.empty()) throw ToolError(ErrorCode::UnknownMethod, "no method named '" + name + "'");
  if (ids.size() > 1) {
    std::ostringstream detail;
    for (NodeId id : ids)
      detail << cpg.path_of(id) << ":" << cpg.node(id).line << " ";
    throw ToolError(ErrorCode::AmbiguousMethod,
                    "method name '" + name + "' is defined more than once",
                    trim(detail.str()));
  }
  const CpgNode& m = cpg.node(ids.front());
  const SourceFile* sf = cpg.file(cpg.path_of(ids.front()));
  std::string code = sf->slice(m.line, m.col, m.end_line, m.end_col);
  Json lines = Json::array();
  for (int ln = m.line; ln <= m.end_line; ++ln)
    lines.push_back(std::to_string(ln) + ": " + sf->line(ln));
  return Json{{"name", m.name},      {"file", sf->path()},      {"start_line", m.line},
              {"end_line", m.end_line}, {"code", code}, {"lines", std::move(lines)}};
}

Json list_calls(const Cpg& cpg, const std::string& pattern, const std::string& within) {
  if (!within.empty()) resolve_method(cpg, within);  // UnknownMethod if undefined
  struct Row {
    std::string caller, callee, file;
    int line;
    NodeId id;
    Json args;
  };
  std::vector<Row> rows;
  for (NodeId call : cpg.by_kind(NodeKind::Call)) {
    const CpgNode& n = cpg.node(call);
    if (!glob_match(pattern, n.name)) continue;
    std::string caller = n.method_id != kNoNode ? cpg.node(n.method_id).name : "";
    if (!within.empty() && caller != within) continue;
    Json args = Json::array();
    for (const auto& a : n.args) args.push_back(a.code);
    rows.push_back({caller, n.name, cpg.path_of(call), n.line, call, std::move(args)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.file, a.line, a.id) < std::tie(b.file, b.line, b.id);
  });
  Json items = Json::array();
  for (auto& r : rows)
    items.push_back(Json{{"caller", r.caller},
                         {"callee", r.callee},
                         {"file", r.file},
                         {"line", r.line},
                         {"args", std::move(r.args)}});
  return Json{{"calls", std::move(items)}};
}

Json get_code_snippet(const Cpg& cpg, const std::string& file, int start_line, int end_line) {
  const SourceFile* sf = cpg.file(file);
  if (sf == nullptr) throw ToolError(ErrorCode::RangeError, "unknown file: " + file);
  if (start_line < 1 || start_line > end_line || end_line > sf->line_count())
    throw ToolError(ErrorCode::RangeError,
                    "line range " + std::to_string(start_line) + ".." + std::to_string(end_line) +
                        " is outside 1.." + std::to_string(sf->line_count()));
  std::ostringstream code;
  for (int ln = start_line; ln <= end_line; ++ln) {
    code << sf->line(ln);
    if (ln != end_line) code << "\n";
  }
  return Json{{"file", file}, {"start_line", start_line}, {"end_line", end_line},
              {"code", code.str()}};
}

Json search_literals(const Cpg& cpg, const std::string& pattern, const std::string& kind) {
  if (kind != "int" && kind != "string" && kind != "any")
    throw ToolError(ErrorCode::ValidationError, "kind must be int, string, or any");
  struct Row {
    std::string value, kind, file;
    int line;
    NodeId id;
  };
  std::vector<Row> rows;
  for (NodeId lit : cpg.by_kind(NodeKind::Literal)) {
    const CpgNode& n = cpg.node(lit);
    if (kind != "any" && n.type != kind) continue;
    if (!glob_match(pattern, n.value)) continue;
    rows.push_back({n.value, n.type, cpg.path_of(lit), n.line, lit});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.file, a.line, a.value, a.id) < std::tie(b.file, b.line, b.value, b.id);
  });
  Json items = Json::array();
  for (const auto& r : rows)
    items.push_back(
        Json{{"value", r.value}, {"kind", r.kind}, {"file", r.file}, {"line", r.line}});
  return Json{{"literals", std::move(items)}};
}

Json get_codebase_summary(const Cpg& cpg) {
  int loc = 0;
  for (const auto& f : cpg.files()) loc += f.line_count();
  std::set<std::string> externals;
  for (NodeId call : cpg.by_kind(NodeKind::Call))
    if (cpg.out(call, EdgeKind::CALL).empty()) externals.insert(cpg.node(call).name);
  return Json{{"files", cpg.files().size()},
              {"methods", cpg.by_kind(NodeKind::Method).size()},
              {"call_sites", cpg.by_kind(NodeKind::Call).size()},
              {"loc", loc},
              {"external_callees", std::vector<std::string>(externals.begin(), externals.end())}};
}

Json node_summary(const Cpg& cpg, NodeId id) {
  const CpgNode& n = cpg.node(id);
  Json j;
  j["id"] = n.id;
  j["kind"] = node_kind_name(n.kind);
  if (!n.name.empty()) j["name"] = n.name;
  j["code"] = n.code;
  j["file"] = cpg.path_of(id);
  j["line"] = n.line;
  if (n.method_id != kNoNode) j["method"] = cpg.node(n.method_id).name;
  return j;
}

Json run_structured_query(const Cpg& cpg, const StructuredQuery& query) {
  std::optional<NodeKind> kind;
  if (query.kind) {
    NodeKind k;
    if (!parse_node_kind(*query.kind, k))
      throw ToolError(ErrorCode::QueryError, "unknown node kind: " + *query.kind);
    kind = k;
  }
  std::optional<EdgeKind> edge;
  if (query.expand_edge) {
    EdgeKind e;
    if (!parse_edge_kind(*query.expand_edge, e))
      throw ToolError(ErrorCode::QueryError, "unknown edge kind: " + *query.expand_edge);
    edge = e;
    if (query.expand_direction != "backward" && query.expand_direction != "forward")
      throw ToolError(ErrorCode::QueryError,
                      "expand direction must be 'backward' or 'forward'");
    if (query.expand_depth < 1 || query.expand_depth > 3)
      throw ToolError(ErrorCode::QueryError, "expand depth must be between 1 and 3");
  }

  std::vector<NodeId> seeds;
  for (const CpgNode& n : cpg.nodes()) {
    if (n.id == kNoNode) continue;
    if (kind && n.kind != *kind) continue;
    if (query.name_glob && !glob_match(*query.name_glob, n.name)) continue;
    if (query.code_contains && n.code.find(*query.code_contains) == std::string::npos) continue;
    seeds.push_back(n.id);
  }

  std::vector<NodeId> result;
  if (!edge) {
    result = seeds;
  } else {
    bool backward = query.expand_direction == "backward";
    std::set<NodeId> seed_set(seeds.begin(), seeds.end());
    std::set<NodeId> reached;
    std::vector<NodeId> frontier = seeds;
    for (int hop = 1; hop <= query.expand_depth && !frontier.empty(); ++hop) {
      std::vector<NodeId> next;
      for (NodeId u : frontier) {
        const auto& adj = backward ? cpg.in(u, *edge) : cpg.out(u, *edge);
        for (const auto& [other, e] : adj) {
          if (reached.insert(other).second) next.push_back(other);
        }
      }
      frontier = std::move(next);
    }
    for (NodeId id : reached)
      if (!seed_set.count(id)) result.push_back(id);
    std::sort(result.begin(), result.end());
  }

  bool truncated = false;
  if (result.size() > static_cast<size_t>(query.limit)) {
    result.resize(query.limit);
    truncated = true;
  }
  Json items = Json::array();
  for (NodeId id : result) items.push_back(node_summary(cpg, id));
  return Json{{"nodes", std::move(items)}, {"count", result.size()}, {"truncated", truncated}};
}

// ---------------------------------------------------------------------------
// JSON projections
// ---------------------------------------------------------------------------

Json to_json(const ProgramPoint& p) {
  return Json{{"file", p.file}, {"line", p.line}, {"node_id", p.node}};
}

Json to_json(const Cpg& cpg, const TaintPointInfo& p, bool with_positions) {
  (void)cpg;
  Json j;
  j["file"] = p.point.file;
  j["line"] = p.point.line;
  j["node_id"] = p.point.node;
  j["callee"] = p.callee;
  if (!with_positions) j["tainted_vars"] = p.vars;
  if (with_positions) j["relevant_args"] = p.positions;
  return j;
}

Json to_json(const TaintPath& p) {
  Json steps = Json::array();
  for (const auto& s : p.steps) {
    Json step;
    step["node_id"] = s.node;
    step["variable"] = s.var;
    step["edge"] = s.edge;
    step["governors"] = s.governors;
    steps.push_back(std::move(step));
  }
  return Json{{"source", to_json(p.source)}, {"sink", to_json(p.sink)},
              {"steps", std::move(steps)}};
}

Json to_json(const Slice& s) {
  return Json{{"criterion", to_json(s.criterion)},
              {"points", s.points},
              {"line_count", s.line_count},
              {"code", s.code}};
}

Json to_json(const DataDependency& d) {
  return Json{{"file", d.point.file}, {"line", d.point.line}, {"node_id", d.point.node},
              {"variable", d.var},    {"hop", d.hop}};
}

Json to_json(const BoundsCheck& b) {
  return Json{{"file", b.check.file},
              {"line", b.check.line},
              {"node_id", b.check.node},
              {"relation", b.relation},
              {"dominates_access", b.dominates_access}};
}

Json to_json(const CallGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges)
    edges.push_back(
        Json{{"caller", e.caller}, {"callee", e.callee}, {"file", e.file}, {"line", e.line}});
  return Json{{"root", g.root}, {"depth", g.depth}, {"methods", g.methods},
              {"edges", std::move(edges)}};
}

Json to_json(const Reachability& r) {
  Json j;
  j["reachable"] = r.reachable;
  if (r.reachable) j["path"] = r.path;
  return j;
}

}  // namespace badger
