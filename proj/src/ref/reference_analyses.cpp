#include "badger/ref/reference_analyses.hpp"

#include <algorithm>
#include <functional>

namespace badger::ref {

namespace {

std::vector<NodeId> cfg_nodes_of(const Cpg& cpg, NodeId method) {
  const MethodCfg* mc = cpg.method_cfg(method);
  return mc == nullptr ? std::vector<NodeId>{} : mc->cfg_nodes;
}

std::vector<NodeId> succs(const Cpg& cpg, NodeId n) {
  std::vector<NodeId> out;
  for (const auto& e : cpg.edges())
    if (e.kind == EdgeKind::CFG && e.src == n) out.push_back(e.dst);
  return out;
}

// State carried along one enumerated path: for each variable, the set of
// definition sites currently visible (strong defs replace, weak defs add).
using DefMap = std::map<std::string, std::set<NodeId>>;

}  // namespace

size_t cfg_size(const Cpg& cpg, NodeId method) { return cfg_nodes_of(cpg, method).size(); }

std::set<RefEdge> reaching_def_edges(const Cpg& cpg, NodeId method) {
  const MethodCfg* mc = cpg.method_cfg(method);
  std::set<RefEdge> result;
  if (mc == nullptr) return result;

  DefMap initial;
  for (const auto& e : cpg.edges()) {
    if (e.kind != EdgeKind::AST || e.src != method) continue;
    const CpgNode& n = cpg.node(e.dst);
    if (n.kind == NodeKind::Param) initial[n.name] = {n.id};
  }

  // Count CFG edge traversals so every loop is unrolled exactly once.
  std::map<std::pair<NodeId, NodeId>, int> budget;

  std::function<void(NodeId, DefMap&)> visit = [&](NodeId n, DefMap& defs) {
    const CpgNode& cn = cpg.node(n);
    if (n != mc->entry) {
      for (const auto& v : cn.use_vars) {
        auto it = defs.find(v);
        if (it == defs.end()) continue;
        for (NodeId d : it->second) result.insert({d, n, v});
      }
      for (const auto& kv : cn.kill_vars) defs[kv].clear();
      for (const auto& dv : cn.def_vars) defs[dv].insert(n);
    }
    for (NodeId s : succs(cpg, n)) {
      auto key = std::make_pair(n, s);
      if (budget[key] >= 2) continue;
      ++budget[key];
      DefMap copy = defs;
      visit(s, copy);
      --budget[key];
    }
  };

  DefMap defs = initial;
  visit(mc->entry, defs);
  return result;
}

std::set<RefEdge> engine_rd_edges(const Cpg& cpg, NodeId method) {
  std::set<RefEdge> result;
  const MethodCfg* mc = cpg.method_cfg(method);
  if (mc == nullptr) return result;
  std::set<NodeId> members(mc->cfg_nodes.begin(), mc->cfg_nodes.end());
  for (const auto& e : cpg.edges()) {
    if (e.kind != EdgeKind::REACHING_DEF) continue;
    // Intra-method only: the target must be a CFG node of this method and the
    // source either one of its CFG nodes or one of its params.
    if (!members.count(e.dst)) continue;
    const CpgNode& src = cpg.node(e.src);
    bool src_ok = members.count(e.src) ||
                  (src.kind == NodeKind::Param && src.method_id == method);
    if (!src_ok) continue;
    if (src.kind == NodeKind::MethodReturn && !members.count(e.src)) continue;
    result.insert({e.src, e.dst, e.label});
  }
  return result;
}

static std::map<NodeId, std::set<NodeId>> closure_sets(const std::vector<NodeId>& nodes,
                                                       NodeId root,
                                                       const std::function<std::vector<NodeId>(NodeId)>& next) {
  std::map<NodeId, std::set<NodeId>> sets;
  std::set<NodeId> all(nodes.begin(), nodes.end());
  for (NodeId n : nodes) sets[n] = all;
  sets[root] = {root};
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId n : nodes) {
      if (n == root) continue;
      std::set<NodeId> merged;
      bool first = true;
      for (NodeId s : next(n)) {
        if (!sets.count(s)) continue;
        if (first) {
          merged = sets[s];
          first = false;
        } else {
          std::set<NodeId> tmp;
          std::set_intersection(merged.begin(), merged.end(), sets[s].begin(), sets[s].end(),
                                std::inserter(tmp, tmp.begin()));
          merged = std::move(tmp);
        }
      }
      if (first) merged.clear();  // no successors carry information
      merged.insert(n);
      if (merged != sets[n]) {
        sets[n] = std::move(merged);
        changed = true;
      }
    }
  }
  return sets;
}

std::map<NodeId, std::set<NodeId>> dominator_sets(const Cpg& cpg, NodeId method) {
  const MethodCfg* mc = cpg.method_cfg(method);
  if (mc == nullptr) return {};
  auto preds = [&](NodeId n) {
    std::vector<NodeId> out;
    for (const auto& e : cpg.edges())
      if (e.kind == EdgeKind::CFG && e.dst == n) out.push_back(e.src);
    return out;
  };
  return closure_sets(mc->cfg_nodes, mc->entry, preds);
}

std::set<std::pair<NodeId, NodeId>> cdg_edges(const Cpg& cpg, NodeId method) {
  std::set<std::pair<NodeId, NodeId>> result;
  const MethodCfg* mc = cpg.method_cfg(method);
  if (mc == nullptr) return result;

  auto post = closure_sets(mc->cfg_nodes, mc->exit,
                           [&](NodeId n) { return succs(cpg, n); });

  // n is control-dependent on b iff b has a successor s with n post-dominating
  // s, and n does not strictly post-dominate b.
  for (NodeId b : mc->cfg_nodes) {
    auto bs = succs(cpg, b);
    if (bs.size() < 2) continue;
    for (NodeId n : mc->cfg_nodes) {
      bool pd_some_succ = false;
      for (NodeId s : bs)
        if (post.count(s) && post[s].count(n)) pd_some_succ = true;
      if (!pd_some_succ) continue;
      bool strictly_pd_b = n != b && post.count(b) && post[b].count(n);
      if (!strictly_pd_b) result.insert({b, n});
    }
  }
  return result;
}

std::set<std::pair<NodeId, NodeId>> engine_cdg_edges(const Cpg& cpg, NodeId method) {
  std::set<std::pair<NodeId, NodeId>> result;
  for (const auto& e : cpg.edges()) {
    if (e.kind != EdgeKind::CDG) continue;
    const CpgNode& src = cpg.node(e.src);
    if (src.method_id == method) result.insert({e.src, e.dst});
  }
  return result;
}

std::set<NodeId> slice_points(const Cpg& cpg, NodeId criterion) {
  std::set<NodeId> points = {criterion};
  std::vector<NodeId> worklist = {criterion};
  while (!worklist.empty()) {
    NodeId n = worklist.back();
    worklist.pop_back();

    std::vector<NodeId> preds;
    for (const auto& e : cpg.edges())
      if ((e.kind == EdgeKind::REACHING_DEF || e.kind == EdgeKind::CDG) && e.dst == n)
        preds.push_back(e.src);
    NodeId method = cpg.node(n).method_id;
    if (method != kNoNode) {
      for (const auto& e : cpg.edges()) {
        if (e.kind != EdgeKind::CALL || e.dst != method) continue;
        NodeId stmt = cpg.node(e.src).stmt_id;
        if (stmt != kNoNode) preds.push_back(stmt);
      }
    }
    for (NodeId p : preds)
      if (points.insert(p).second) worklist.push_back(p);
  }
  return points;
}

namespace {

struct TaintRules {
  const Cpg& cpg;
  const SourceSinkConfig& config;

  bool stmt_has_source(NodeId stmt) const {
    for (NodeId c : cpg.calls_in_stmt(stmt))
      if (config.is_source(cpg.node(c).name)) return true;
    return false;
  }

  // Tainted definitions at a source statement: array arguments written by a
  // source call, plus the scalar results the statement assigns.
  std::vector<std::string> seed_vars(NodeId stmt) const {
    const CpgNode& sn = cpg.node(stmt);
    auto lone_identifier_args = [&](NodeId call) {
      std::set<std::string> names;
      for (const auto& a : cpg.node(call).args)
        if (a.vars.size() == 1 && a.code == a.vars.front()) names.insert(a.vars.front());
      return names;
    };
    std::set<std::string> all_lone;
    for (NodeId c : cpg.calls_in_stmt(stmt))
      for (const auto& v : lone_identifier_args(c)) all_lone.insert(v);

    std::set<std::string> seeds;
    for (NodeId c : cpg.calls_in_stmt(stmt)) {
      if (!config.is_source(cpg.node(c).name)) continue;
      for (const auto& v : lone_identifier_args(c))
        for (const auto& d : sn.def_vars)
          if (d == v) seeds.insert(d);
    }
    for (const auto& d : sn.def_vars)
      if (!all_lone.count(d) && d != kReturnVar) seeds.insert(d);
    return {seeds.begin(), seeds.end()};
  }

  bool feeds_sink(NodeId stmt, const std::string& var, NodeId from) const {
    for (NodeId c : cpg.calls_in_stmt(stmt)) {
      const CpgNode& call = cpg.node(c);
      if (!config.is_sink(call.name)) continue;
      for (int pos : config.relevant_args(call.name, call.args.size())) {
        const CpgArg& arg = call.args[pos];
        if (var != kReturnVar) {
          if (std::find(arg.vars.begin(), arg.vars.end(), var) != arg.vars.end()) return true;
        } else {
          NodeId ret_method = cpg.node(from).method_id;
          for (NodeId sub : arg.calls) {
            for (const auto& e : cpg.edges())
              if (e.kind == EdgeKind::CALL && e.src == sub && e.dst == ret_method) return true;
          }
        }
      }
    }
    return false;
  }

  bool sink_arg_contains_source(NodeId stmt) const {
    for (NodeId c : cpg.calls_in_stmt(stmt)) {
      const CpgNode& call = cpg.node(c);
      if (!config.is_sink(call.name)) continue;
      for (int pos : config.relevant_args(call.name, call.args.size()))
        for (NodeId sub : call.args[pos].calls)
          if (config.is_source(cpg.node(sub).name)) return true;
    }
    return false;
  }
};

}  // namespace

std::set<std::pair<NodeId, NodeId>> taint_pairs(const Cpg& cpg, const SourceSinkConfig& config) {
  TaintRules rules{cpg, config};
  std::set<std::pair<NodeId, NodeId>> pairs;

  std::set<NodeId> source_stmts;
  for (NodeId c : cpg.by_kind(NodeKind::Call))
    if (config.is_source(cpg.node(c).name)) source_stmts.insert(cpg.node(c).stmt_id);

  for (NodeId src : source_stmts) {
    if (rules.sink_arg_contains_source(src)) pairs.insert({src, src});

    // Exhaustive DFS over dependence paths; a (node, variable) state may
    // appear at most once per path.
    std::set<std::pair<NodeId, std::string>> on_path;
    std::function<void(NodeId, const std::string&)> explore = [&](NodeId node,
                                                                  const std::string& var) {
      for (const auto& e : cpg.edges()) {
        if (e.kind != EdgeKind::REACHING_DEF || e.src != node || e.label != var) continue;
        const CpgNode& target = cpg.node(e.dst);
        if (target.is_statement && rules.feeds_sink(e.dst, var, node))
          pairs.insert({src, e.dst});

        std::vector<std::string> next_vars;
        if (target.kind == NodeKind::Param) next_vars.push_back(target.name);
        else if (target.kind == NodeKind::MethodReturn) next_vars.push_back(kReturnVar);
        else next_vars = target.def_vars;

        for (const auto& w : next_vars) {
          auto key = std::make_pair(e.dst, w);
          if (on_path.count(key)) continue;
          on_path.insert(key);
          explore(e.dst, w);
          on_path.erase(key);
        }
      }
    };

    for (const auto& v : rules.seed_vars(src)) {
      auto key = std::make_pair(src, v);
      on_path.insert(key);
      explore(src, v);
      on_path.erase(key);
    }
  }
  return pairs;
}

}  // namespace badger::ref
