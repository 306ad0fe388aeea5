#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "badger/cpg.hpp"
#include "badger/json.hpp"

namespace badger {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

struct ProgramPoint {
  std::string file;
  int line = 0;
  NodeId node = kNoNode;
};

struct SourceSinkConfig {
  std::vector<std::string> sources = {"read", "recv", "getenv", "gets", "scanf", "fread"};
  std::vector<std::string> sinks = {"system", "exec", "memcpy", "strcpy", "sprintf", "malloc"};
  // Security-relevant argument positions per sink; sinks not listed here
  // treat every argument as relevant.
  std::map<std::string, std::vector<int>> sink_args = {
      {"memcpy", {1, 2}}, {"strcpy", {1, 2}}, {"sprintf", {1, 2}},
      {"system", {0}},    {"exec", {0}},      {"malloc", {0}},
  };

  bool is_source(const std::string& callee) const;
  bool is_sink(const std::string& callee) const;
  std::vector<int> relevant_args(const std::string& callee, size_t arity) const;
};

struct TaintStep {
  NodeId node = kNoNode;
  std::string var;
  std::string edge;  // "source" for the first step, else "REACHING_DEF"
  std::vector<NodeId> governors;  // control-dependence metadata
};

struct TaintPath {
  ProgramPoint source;
  ProgramPoint sink;
  std::vector<TaintStep> steps;
};

struct TaintPointInfo {
  ProgramPoint point;
  std::string callee;
  std::vector<std::string> vars;  // tainted definitions introduced here
  std::vector<int> positions;     // relevant argument positions (sinks)
};

struct Slice {
  ProgramPoint criterion;
  std::vector<NodeId> points;  // ascending id order, criterion included
  std::string code;
  int line_count = 0;  // distinct (file, line) pairs across points
};

struct DataDependency {
  ProgramPoint point;
  std::string var;
  int hop = 0;
};

struct BoundsCheck {
  ProgramPoint check;
  std::string relation;
  bool dominates_access = false;
};

struct CallGraphEdge {
  std::string caller;
  std::string callee;
  std::string file;
  int line = 0;
};

struct CallGraph {
  std::string root;
  int depth = 0;
  std::vector<std::string> methods;  // BFS discovery order
  std::vector<CallGraphEdge> edges;
};

struct Reachability {
  bool reachable = false;
  std::vector<std::string> path;  // shortest witness when reachable
};

// ---------------------------------------------------------------------------
// Security analyses
// ---------------------------------------------------------------------------

std::vector<TaintPointInfo> find_taint_sources(const Cpg& cpg, const SourceSinkConfig& config);
std::vector<TaintPointInfo> find_taint_sinks(const Cpg& cpg, const SourceSinkConfig& config);

// Forward BFS over REACHING_DEF and binding edges from every source, capped
// at max_paths shortest paths (one witness per source/sink pair).
std::vector<TaintPath> find_taint_flows(const Cpg& cpg, const SourceSinkConfig& config,
                                        int max_paths);

Slice get_program_slice(const Cpg& cpg, const std::string& file, int line);

std::vector<DataDependency> get_data_dependencies(const Cpg& cpg, const std::string& file,
                                                  int line, const std::string& direction,
                                                  int depth);

std::vector<BoundsCheck> find_bounds_checks(const Cpg& cpg, const SourceSinkConfig& config,
                                            const std::string& file, int line);

// ---------------------------------------------------------------------------
// Navigation
// ---------------------------------------------------------------------------

CallGraph get_call_graph(const Cpg& cpg, const std::string& root, int depth);
Reachability check_reachability(const Cpg& cpg, const std::string& from, const std::string& to);

Json list_methods(const Cpg& cpg, const std::string& pattern);
Json get_method_source(const Cpg& cpg, const std::string& name);
Json list_calls(const Cpg& cpg, const std::string& pattern, const std::string& within);
Json get_code_snippet(const Cpg& cpg, const std::string& file, int start_line, int end_line);
Json search_literals(const Cpg& cpg, const std::string& pattern, const std::string& kind);
Json get_codebase_summary(const Cpg& cpg);

struct StructuredQuery {
  std::optional<std::string> kind;
  std::optional<std::string> name_glob;
  std::optional<std::string> code_contains;
  std::optional<std::string> expand_edge;
  std::string expand_direction = "backward";
  int expand_depth = 1;
  int limit = 200;
};

Json run_structured_query(const Cpg& cpg, const StructuredQuery& query);

// ---------------------------------------------------------------------------
// JSON projections (shared by server, CLI, and tests)
// ---------------------------------------------------------------------------

Json to_json(const ProgramPoint& p);
Json to_json(const Cpg& cpg, const TaintPointInfo& p, bool with_positions);
Json to_json(const TaintPath& p);
Json to_json(const Slice& s);
Json to_json(const DataDependency& d);
Json to_json(const BoundsCheck& b);
Json to_json(const CallGraph& g);
Json to_json(const Reachability& r);
Json node_summary(const Cpg& cpg, NodeId id);

ProgramPoint make_point(const Cpg& cpg, NodeId id);

}  // namespace badger
