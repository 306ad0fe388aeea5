#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "badger/analyses.hpp"
#include "badger/util.hpp"

namespace badger {

bool SourceSinkConfig::is_source(const std::string& callee) const {
  for (const auto& p : sources)
    if (glob_match(p, callee)) return true;
  return false;
}

bool SourceSinkConfig::is_sink(const std::string& callee) const {
  for (const auto& p : sinks)
    if (glob_match(p, callee)) return true;
  return false;
}

std::vector<int> SourceSinkConfig::relevant_args(const std::string& callee, size_t arity) const {
  std::vector<int> out;
  auto it = sink_args.find(callee);
  if (it != sink_args.end()) {
    for (int pos : it->second)
      if (pos >= 0 && static_cast<size_t>(pos) < arity) out.push_back(pos);
  } else {
    for (size_t i = 0; i < arity; ++i) out.push_back(static_cast<int>(i));
  }
  return out;
}

ProgramPoint make_point(const Cpg& cpg, NodeId id) {
  const CpgNode& n = cpg.node(id);
  return {cpg.path_of(id), n.line, id};
}

namespace {

void require_patterns(const std::vector<std::string>& patterns) {
  if (patterns.empty())
    throw ToolError(ErrorCode::ConfigError, "source/sink pattern list is empty");
}

// Tainted definitions a source call introduces: its array arguments plus the
// scalar results its statement assigns.
std::vector<std::string> tainted_defs(const Cpg& cpg, const CpgNode& call) {
  std::vector<std::string> vars;
  const CpgNode& stmt = cpg.node(call.stmt_id);
  std::set<std::string> array_args_all;  // of every call in the statement
  for (NodeId c : cpg.calls_in_stmt(stmt.id))
    for (const auto& arg : cpg.node(c).args)
      if (arg.vars.size() == 1 && arg.code == arg.vars.front())
        array_args_all.insert(arg.vars.front());

  for (const auto& arg : call.args)
    if (arg.vars.size() == 1 && arg.code == arg.vars.front()) {
      // Whole-array argument; only arrays are written through.
      for (const auto& d : stmt.def_vars)
        if (d == arg.vars.front()) vars.push_back(d);
    }
  for (const auto& d : stmt.def_vars)
    if (!array_args_all.count(d) && d != kReturnVar) vars.push_back(d);

  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool point_less(const ProgramPoint& a, const ProgramPoint& b) {
  return std::tie(a.file, a.line, a.node) < std::tie(b.file, b.line, b.node);
}

}  // namespace

std::vector<TaintPointInfo> find_taint_sources(const Cpg& cpg, const SourceSinkConfig& config) {
  require_patterns(config.sources);
  std::vector<TaintPointInfo> out;
  for (NodeId id : cpg.by_kind(NodeKind::Call)) {
    const CpgNode& call = cpg.node(id);
    if (!config.is_source(call.name)) continue;
    TaintPointInfo info;
    info.point = make_point(cpg, call.stmt_id);
    info.callee = call.name;
    info.vars = tainted_defs(cpg, call);
    out.push_back(std::move(info));
  }
  std::sort(out.begin(), out.end(), [](const TaintPointInfo& a, const TaintPointInfo& b) {
    if (point_less(a.point, b.point)) return true;
    if (point_less(b.point, a.point)) return false;
    return a.callee < b.callee;
  });
  return out;
}

std::vector<TaintPointInfo> find_taint_sinks(const Cpg& cpg, const SourceSinkConfig& config) {
  require_patterns(config.sinks);
  std::vector<TaintPointInfo> out;
  for (NodeId id : cpg.by_kind(NodeKind::Call)) {
    const CpgNode& call = cpg.node(id);
    if (!config.is_sink(call.name)) continue;
    TaintPointInfo info;
    info.point = make_point(cpg, call.stmt_id);
    info.callee = call.name;
    info.positions = config.relevant_args(call.name, call.args.size());
    out.push_back(std::move(info));
  }
  std::sort(out.begin(), out.end(), [](const TaintPointInfo& a, const TaintPointInfo& b) {
    if (point_less(a.point, b.point)) return true;
    if (point_less(b.point, a.point)) return false;
    return a.callee < b.callee;
  });
  return out;
}

namespace {

struct TaintState {
  NodeId node;
  std::string var;
  bool operator<(const TaintState& o) const { return std::tie(node, var) < std::tie(o.node, o.var); }
};

std::vector<NodeId> governors_of(const Cpg& cpg, NodeId node) {
  std::vector<NodeId> g;
  NodeId stmt = cpg.node(node).stmt_id;
  if (stmt == kNoNode) stmt = node;
  for (const auto& [src, e] : cpg.in(stmt, EdgeKind::CDG)) g.push_back(src);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

// Does taint arriving at `stmt` via `var` (or via the return value of a
// method, for var == <ret>) feed a relevant argument of a sink call?
bool feeds_sink(const Cpg& cpg, const SourceSinkConfig& config, NodeId stmt,
                const std::string& var, NodeId edge_src) {
  for (NodeId c : cpg.calls_in_stmt(stmt)) {
    const CpgNode& call = cpg.node(c);
    if (!config.is_sink(call.name)) continue;
    for (int pos : config.relevant_args(call.name, call.args.size())) {
      const CpgArg& arg = call.args[pos];
      if (var != kReturnVar) {
        if (std::find(arg.vars.begin(), arg.vars.end(), var) != arg.vars.end()) return true;
      } else {
        // Arrived via a MethodReturn: relevant if any call nested in this
        // argument resolves to that method.
        NodeId ret_method = cpg.node(edge_src).method_id;
        for (NodeId sub : arg.calls) {
          const auto& callees = cpg.out(sub, EdgeKind::CALL);
          if (!callees.empty() && callees.front().first == ret_method) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

std::vector<TaintPath> find_taint_flows(const Cpg& cpg, const SourceSinkConfig& config,
                                        int max_paths) {
  if (max_paths < 1)
    throw ToolError(ErrorCode::ValidationError, "max_paths must be >= 1");
  require_patterns(config.sources);
  require_patterns(config.sinks);

  // Source statements in deterministic order.
  std::vector<NodeId> source_stmts;
  for (NodeId id : cpg.by_kind(NodeKind::Call))
    if (config.is_source(cpg.node(id).name)) source_stmts.push_back(cpg.node(id).stmt_id);
  std::sort(source_stmts.begin(), source_stmts.end());
  source_stmts.erase(std::unique(source_stmts.begin(), source_stmts.end()), source_stmts.end());

  std::vector<TaintPath> candidates;

  for (NodeId src_stmt : source_stmts) {
    std::map<NodeId, TaintPath> per_sink;  // first (shortest) witness per sink

    // Same-statement flow: a source call nested in a sink's relevant argument.
    for (NodeId c : cpg.calls_in_stmt(src_stmt)) {
      const CpgNode& call = cpg.node(c);
      if (!config.is_sink(call.name)) continue;
      for (int pos : config.relevant_args(call.name, call.args.size())) {
        for (NodeId sub : call.args[pos].calls) {
          if (!config.is_source(cpg.node(sub).name)) continue;
          TaintPath path;
          path.source = make_point(cpg, src_stmt);
          path.sink = make_point(cpg, src_stmt);
          path.steps.push_back(
              {src_stmt, cpg.node(sub).name, "source", governors_of(cpg, src_stmt)});
          per_sink.emplace(src_stmt, std::move(path));
          break;
        }
      }
    }

    // Forward BFS over dependence edges, one visit per (node, variable).
    struct QueueEntry {
      TaintState state;
      int depth;
    };
    std::map<TaintState, std::pair<TaintState, std::string>> pred;  // state -> (prev, edge var)
    std::set<TaintState> visited;
    std::deque<QueueEntry> queue;

    std::vector<std::string> seeds;
    for (NodeId c : cpg.calls_in_stmt(src_stmt)) {
      const CpgNode& call = cpg.node(c);
      if (!config.is_source(call.name)) continue;
      for (const auto& v : tainted_defs(cpg, call)) seeds.push_back(v);
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    for (const auto& v : seeds) {
      TaintState s{src_stmt, v};
      if (visited.insert(s).second) queue.push_back({s, 0});
    }

    auto reconstruct = [&](const TaintState& last) {
      std::vector<TaintStep> steps;
      TaintState cur = last;
      while (true) {
        auto it = pred.find(cur);
        if (it == pred.end()) {
          steps.push_back({cur.node, cur.var, "source", governors_of(cpg, cur.node)});
          break;
        }
        steps.push_back({cur.node, it->second.second, "REACHING_DEF", governors_of(cpg, cur.node)});
        cur = it->second.first;
      }
      std::reverse(steps.begin(), steps.end());
      return steps;
    };

    while (!queue.empty()) {
      auto [state, depth] = queue.front();
      queue.pop_front();

      for (const auto& [dst, edge] : cpg.out(state.node, EdgeKind::REACHING_DEF)) {
        if (edge->label != state.var) continue;
        const CpgNode& target = cpg.node(dst);

        // Sink arrival: record one shortest witness per sink statement.
        if (target.is_statement && !per_sink.count(dst) &&
            feeds_sink(cpg, config, dst, state.var, state.node)) {
          TaintPath path;
          path.source = make_point(cpg, src_stmt);
          path.sink = make_point(cpg, dst);
          path.steps = reconstruct(state);
          path.steps.push_back({dst, state.var, "REACHING_DEF", governors_of(cpg, dst)});
          per_sink.emplace(dst, std::move(path));
        }

        // Continue propagation through whatever the target defines.
        std::vector<std::string> next_vars;
        if (target.kind == NodeKind::Param) {
          next_vars.push_back(target.name);
        } else if (target.kind == NodeKind::MethodReturn) {
          next_vars.push_back(kReturnVar);
        } else {
          next_vars = target.def_vars;
        }
        for (const auto& w : next_vars) {
          TaintState next{dst, w};
          if (visited.insert(next).second) {
            pred.emplace(next, std::make_pair(state, state.var));
            queue.push_back({next, depth + 1});
          }
        }
      }
    }

    for (auto& [sink, path] : per_sink) candidates.push_back(std::move(path));
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const TaintPath& a, const TaintPath& b) {
    return std::tuple(a.steps.size(), a.source.file, a.source.line, a.sink.file, a.sink.line,
                      a.source.node, a.sink.node) <
           std::tuple(b.steps.size(), b.source.file, b.source.line, b.sink.file, b.sink.line,
                      b.source.node, b.sink.node);
  });
  if (candidates.size() > static_cast<size_t>(max_paths)) candidates.resize(max_paths);
  return candidates;
}

}  // namespace badger
