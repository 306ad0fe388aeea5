#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "badger/analyses.hpp"
#include "badger/cpg.hpp"

namespace badger::ref {

// Independent textbook implementations of the analyses, kept as the serial
// reference the optimized engine is tested against. They trade speed for
// directness: path enumeration instead of fixpoints, explicit dominator sets
// instead of trees, and raw edge-table scans instead of indexes.

struct RefEdge {
  NodeId src;
  NodeId dst;
  std::string var;
  bool operator<(const RefEdge& o) const {
    return std::tie(src, dst, var) < std::tie(o.src, o.dst, o.var);
  }
  bool operator==(const RefEdge& o) const {
    return src == o.src && dst == o.dst && var == o.var;
  }
};

// Reaching definitions by brute-force enumeration of all CFG paths from the
// method entry, each edge traversed at most twice (one loop unrolling).
std::set<RefEdge> reaching_def_edges(const Cpg& cpg, NodeId method);

// The intra-procedural REACHING_DEF edges the engine materialized for one
// method (binding and return edges excluded), for comparison.
std::set<RefEdge> engine_rd_edges(const Cpg& cpg, NodeId method);

// Control dependence from explicit post-dominator sets computed by set
// intersection to a fixpoint.
std::set<std::pair<NodeId, NodeId>> cdg_edges(const Cpg& cpg, NodeId method);
std::set<std::pair<NodeId, NodeId>> engine_cdg_edges(const Cpg& cpg, NodeId method);

// Explicit dominator sets (entry-rooted).
std::map<NodeId, std::set<NodeId>> dominator_sets(const Cpg& cpg, NodeId method);

// Backward-slice point set by a worklist over raw edge-table scans.
std::set<NodeId> slice_points(const Cpg& cpg, NodeId criterion);

// All (source line, sink line) pairs witnessed by some dependence path,
// found by exhaustive DFS that never revisits a (node, variable) state
// within one path. Also usable as the true pair count for the path cap.
std::set<std::pair<NodeId, NodeId>> taint_pairs(const Cpg& cpg, const SourceSinkConfig& config);

// CFG node count of a method (entry and exit included).
size_t cfg_size(const Cpg& cpg, NodeId method);

}  // namespace badger::ref
