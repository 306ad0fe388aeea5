#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "badger/analyses.hpp"

namespace badger {

namespace {

// Call-site statements of a method, for inter-procedural control closure.
std::vector<NodeId> call_sites_of(const Cpg& cpg, NodeId method) {
  std::vector<NodeId> sites;
  for (const auto& [call, e] : cpg.in(method, EdgeKind::CALL)) {
    NodeId stmt = cpg.node(call).stmt_id;
    if (stmt != kNoNode) sites.push_back(stmt);
  }
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

}  // namespace

Slice get_program_slice(const Cpg& cpg, const std::string& file, int line) {
  NodeId criterion = cpg.resolve_point(file, line);

  // Worklist closure over backward data and control dependence, crossing
  // call boundaries through binding edges and call-site governors.
  std::set<NodeId> points = {criterion};
  std::deque<NodeId> worklist = {criterion};
  while (!worklist.empty()) {
    NodeId n = worklist.front();
    worklist.pop_front();

    std::vector<NodeId> preds;
    for (const auto& [src, e] : cpg.in(n, EdgeKind::REACHING_DEF)) preds.push_back(src);
    for (const auto& [src, e] : cpg.in(n, EdgeKind::CDG)) preds.push_back(src);
    NodeId method = cpg.node(n).method_id;
    if (method != kNoNode)
      for (NodeId site : call_sites_of(cpg, method)) preds.push_back(site);

    for (NodeId p : preds) {
      if (points.insert(p).second) worklist.push_back(p);
    }
  }

  Slice slice;
  slice.criterion = make_point(cpg, criterion);
  slice.points.assign(points.begin(), points.end());

  // Serialize: one line per point, grouped by method in file/line order.
  struct Group {
    std::string file;
    int method_line;
    NodeId method;
  };
  std::map<NodeId, std::set<int>> lines_by_method;
  std::set<std::pair<std::string, int>> distinct_lines;
  for (NodeId p : slice.points) {
    const CpgNode& n = cpg.node(p);
    NodeId m = n.kind == NodeKind::Method ? n.id : n.method_id;
    lines_by_method[m].insert(n.line);
    distinct_lines.insert({cpg.path_of(p), n.line});
  }
  slice.line_count = static_cast<int>(distinct_lines.size());

  std::vector<Group> groups;
  for (const auto& [m, lines] : lines_by_method)
    groups.push_back({cpg.path_of(m), cpg.node(m).line, m});
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    return std::tie(a.file, a.method_line, a.method) < std::tie(b.file, b.method_line, b.method);
  });

  std::ostringstream code;
  bool first_group = true;
  for (const auto& g : groups) {
    if (!first_group) code << "\n";
    first_group = false;
    const SourceFile* sf = cpg.file(g.file);
    for (int ln : lines_by_method[g.method]) {
      code << g.file << ":" << ln << ": " << (sf != nullptr ? sf->line(ln) : "") << "\n";
    }
  }
  slice.code = code.str();
  return slice;
}

std::vector<DataDependency> get_data_dependencies(const Cpg& cpg, const std::string& file,
                                                  int line, const std::string& direction,
                                                  int depth) {
  if (direction != "backward" && direction != "forward")
    throw ToolError(ErrorCode::ValidationError,
                    "direction must be 'backward' or 'forward', got '" + direction + "'");
  if (depth < 1) throw ToolError(ErrorCode::ValidationError, "depth must be >= 1");
  bool backward = direction == "backward";

  NodeId start = cpg.resolve_point(file, line);
  std::vector<DataDependency> out;
  std::set<std::pair<NodeId, std::string>> seen;
  std::set<NodeId> expanded = {start};
  std::vector<NodeId> frontier = {start};

  for (int hop = 1; hop <= depth && !frontier.empty(); ++hop) {
    std::vector<NodeId> next;
    for (NodeId u : frontier) {
      const auto& adj = backward ? cpg.in(u, EdgeKind::REACHING_DEF)
                                 : cpg.out(u, EdgeKind::REACHING_DEF);
      for (const auto& [other, edge] : adj) {
        if (seen.insert({other, edge->label}).second)
          out.push_back({make_point(cpg, other), edge->label, hop});
        if (expanded.insert(other).second) next.push_back(other);
      }
    }
    frontier = std::move(next);
  }

  std::sort(out.begin(), out.end(), [](const DataDependency& a, const DataDependency& b) {
    return std::tie(a.hop, a.point.file, a.point.line, a.var, a.point.node) <
           std::tie(b.hop, b.point.file, b.point.line, b.var, b.point.node);
  });
  return out;
}

std::vector<BoundsCheck> find_bounds_checks(const Cpg& cpg, const SourceSinkConfig& config,
                                            const std::string& file, int line) {
  NodeId stmt = cpg.resolve_point(file, line);
  const CpgNode& sn = cpg.node(stmt);

  // Index variables from array accesses plus size-position argument
  // variables of known size-taking calls.
  std::set<std::string> vars(sn.index_vars.begin(), sn.index_vars.end());
  bool has_context = !sn.index_vars.empty();
  for (NodeId c : cpg.calls_in_stmt(stmt)) {
    const CpgNode& call = cpg.node(c);
    auto it = config.sink_args.find(call.name);
    if (it == config.sink_args.end()) continue;
    has_context = true;
    for (int pos : it->second)
      if (pos >= 0 && static_cast<size_t>(pos) < call.args.size())
        for (const auto& v : call.args[pos].vars) vars.insert(v);
  }
  if (sn.has_array_access) has_context = true;
  if (!has_context)
    throw ToolError(ErrorCode::NotABoundsContext,
                    "statement has no array access or size-taking call: " + sn.code);
  if (vars.empty())
    throw ToolError(ErrorCode::NotABoundsContext,
                    "no index or size variable at: " + sn.code);

  // Expand with the variables feeding them (backward, two hops).
  {
    std::set<NodeId> expanded = {stmt};
    std::vector<NodeId> frontier = {stmt};
    for (int hop = 1; hop <= 2 && !frontier.empty(); ++hop) {
      std::vector<NodeId> next;
      for (NodeId u : frontier) {
        for (const auto& [other, edge] : cpg.in(u, EdgeKind::REACHING_DEF)) {
          if (hop == 1 && !vars.count(edge->label)) continue;  // stay on the index/size chain
          vars.insert(edge->label);
          if (expanded.insert(other).second) next.push_back(other);
        }
      }
      frontier = std::move(next);
    }
    vars.erase(kReturnVar);
  }

  // Comparisons in the same method mentioning any of those variables.
  std::vector<BoundsCheck> out;
  const MethodCfg* mc = cpg.method_cfg(sn.method_id);
  if (mc == nullptr) return out;
  for (NodeId n : mc->cfg_nodes) {
    const CpgNode& cand = cpg.node(n);
    for (const auto& cmp : cand.comparisons) {
      bool mentions = false;
      for (const auto& v : cmp.vars)
        if (vars.count(v)) mentions = true;
      if (!mentions) continue;
      out.push_back({make_point(cpg, n), cmp.relation, cpg.dominates(n, stmt)});
    }
  }
  std::sort(out.begin(), out.end(), [](const BoundsCheck& a, const BoundsCheck& b) {
    return std::tie(a.check.file, a.check.line, a.relation, a.check.node) <
           std::tie(b.check.file, b.check.line, b.relation, b.check.node);
  });
  return out;
}

}  // namespace badger
