#include "badger/tools.hpp"

#include <algorithm>

#include "badger/analyses.hpp"

namespace badger {

namespace {

ToolParam req(const char* name, const char* type, const char* desc) {
  return {name, type, true, Json(), {}, desc};
}

ToolParam opt(const char* name, const char* type, Json def, const char* desc,
              std::vector<std::string> values = {}) {
  return {name, type, false, std::move(def), std::move(values), desc};
}

std::vector<ToolSpec> make_manifest() {
  std::vector<ToolSpec> tools;

  tools.push_back({"create_cpg_session",
                   "Parse a source tree, build (or cache-load) its CPG, and open a session.",
                   false,
                   {req("source_root", "string", "directory of the codebase to analyze"),
                    opt("language", "string", "minic", "language tag", {"minic"})}});
  tools.push_back({"close_session", "Close a session; the CPG cache entry is retained.", true, {}});
  tools.push_back({"poll_job",
                   "Poll an asynchronous job for its state and result.",
                   false,
                   {req("job_id", "string", "job handle returned by an async call")}});
  tools.push_back({"get_codebase_summary",
                   "File, method, call-site, and line counts plus external callees.", true, {}});
  tools.push_back({"list_methods",
                   "List defined methods matching a glob pattern.",
                   true,
                   {opt("pattern", "string", "*", "glob over method names"),
                    opt("cursor", "int", 0, "pagination offset")}});
  tools.push_back({"get_method_source",
                   "Full source of a method, with line numbers.",
                   true,
                   {req("name", "string", "method name")}});
  tools.push_back({"list_calls",
                   "Call sites whose callee matches a pattern, optionally within one method.",
                   true,
                   {opt("pattern", "string", "*", "glob over callee names"),
                    opt("within", "string", "", "restrict to call sites inside this method"),
                    opt("cursor", "int", 0, "pagination offset")}});
  tools.push_back({"get_code_snippet",
                   "Verbatim source lines of a file range.",
                   true,
                   {req("file", "string", "file path relative to the source root"),
                    req("start_line", "int", "first line, 1-based"),
                    req("end_line", "int", "last line, inclusive")}});
  tools.push_back({"get_data_dependencies",
                   "Reaching-definition neighbors of a statement up to a hop budget.",
                   true,
                   {req("file", "string", "file of the program point"),
                    req("line", "int", "line of the program point"),
                    opt("direction", "string", "backward", "traversal direction",
                        {"backward", "forward"}),
                    opt("depth", "int", 1, "maximum hops, >= 1"),
                    opt("cursor", "int", 0, "pagination offset")}});
  tools.push_back({"get_program_slice",
                   "Backward slice: dependence closure over data and control edges.",
                   true,
                   {req("file", "string", "file of the criterion"),
                    req("line", "int", "line of the criterion"),
                    opt("direction", "string", "backward", "slice direction", {"backward"})}});
  tools.push_back({"find_taint_sources",
                   "Call sites matching the configured source patterns.",
                   true,
                   {opt("cursor", "int", 0, "pagination offset")}});
  tools.push_back({"find_taint_sinks",
                   "Call sites matching the configured sink patterns.",
                   true,
                   {opt("cursor", "int", 0, "pagination offset")}});
  tools.push_back({"find_taint_flows",
                   "Source-to-sink dependence paths, shortest first, capped at max_paths.",
                   true,
                   {opt("max_paths", "int", 10, "path cap, >= 1"),
                    opt("cursor", "int", 0, "pagination offset")}});
  tools.push_back({"find_bounds_checks",
                   "Comparisons guarding an array access or size argument, with dominance.",
                   true,
                   {req("file", "string", "file of the access"),
                    req("line", "int", "line of the access")}});
  tools.push_back({"get_call_graph",
                   "Caller/callee edges reachable from a root method up to a depth.",
                   true,
                   {req("root", "string", "root method name"),
                    opt("depth", "int", 3, "traversal depth, >= 0"),
                    opt("cursor", "int", 0, "pagination offset")}});
  tools.push_back({"check_reachability",
                   "Whether one method can reach another over call edges.",
                   true,
                   {req("from", "string", "start method"), req("to", "string", "target method")}});
  tools.push_back({"search_literals",
                   "Literals matching a glob pattern.",
                   true,
                   {opt("pattern", "string", "*", "glob over literal values"),
                    opt("kind", "string", "any", "literal kind", {"int", "string", "any"}),
                    opt("cursor", "int", 0, "pagination offset")}});
  tools.push_back({"run_structured_query",
                   "Filter nodes by kind/name/code, optionally expanding along one edge kind.",
                   true,
                   {opt("kind", "string", Json(), "node kind filter"),
                    opt("name_glob", "string", Json(), "glob over node names"),
                    opt("code_contains", "string", Json(), "substring of node code"),
                    opt("expand_edge", "string", Json(), "edge kind to expand over"),
                    opt("expand_direction", "string", "backward", "expansion direction",
                        {"backward", "forward"}),
                    opt("expand_depth", "int", 1, "expansion hops, 1..3"),
                    opt("cursor", "int", 0, "pagination offset")}});
  return tools;
}

}  // namespace

const std::vector<ToolSpec>& tool_manifest() {
  static const std::vector<ToolSpec> manifest = make_manifest();
  return manifest;
}

const ToolSpec* find_tool(const std::string& name) {
  for (const auto& t : tool_manifest())
    if (t.name == name) return &t;
  return nullptr;
}

Json manifest_json() {
  Json tools = Json::array();
  for (const auto& t : tool_manifest()) {
    Json params = Json::array();
    for (const auto& p : t.params) {
      Json pj;
      pj["name"] = p.name;
      pj["type"] = p.type;
      pj["required"] = p.required;
      if (!p.default_value.is_null()) pj["default"] = p.default_value;
      if (!p.values.empty()) pj["enum"] = p.values;
      pj["description"] = p.description;
      params.push_back(std::move(pj));
    }
    tools.push_back(Json{{"name", t.name},
                         {"description", t.description},
                         {"requires_session", t.requires_session},
                         {"params", std::move(params)}});
  }
  return Json{{"tools", std::move(tools)}};
}

namespace {

[[noreturn]] void validation_error(const std::string& message) {
  throw ToolError(ErrorCode::ValidationError, message);
}

// Validates params against the tool schema and fills defaults.
Json validate_params(const ToolSpec& spec, const Json& params) {
  if (!params.is_object()) validation_error("params must be a JSON object");
  for (auto it = params.begin(); it != params.end(); ++it) {
    const ToolParam* match = nullptr;
    for (const auto& p : spec.params)
      if (p.name == it.key()) match = &p;
    if (match == nullptr)
      validation_error("unexpected parameter '" + it.key() + "' for tool " + spec.name);
    const Json& v = it.value();
    if (match->type == "string" && !v.is_string())
      validation_error("parameter '" + match->name + "' must be a string");
    if (match->type == "int" && !v.is_number_integer())
      validation_error("parameter '" + match->name + "' must be an integer");
    if (match->type == "bool" && !v.is_boolean())
      validation_error("parameter '" + match->name + "' must be a boolean");
    if (!match->values.empty() && v.is_string() &&
        std::find(match->values.begin(), match->values.end(), v.get<std::string>()) ==
            match->values.end())
      validation_error("parameter '" + match->name + "' must be one of: " +
                       [&] {
                         std::string s;
                         for (const auto& e : match->values) s += e + " ";
                         return s;
                       }());
  }
  Json filled = params;
  for (const auto& p : spec.params) {
    if (filled.contains(p.name)) continue;
    if (p.required) validation_error("missing required parameter '" + p.name + "'");
    if (!p.default_value.is_null()) filled[p.name] = p.default_value;
  }
  return filled;
}

// Paginates the first array member of `result` so the serialized body stays
// under the configured byte budget.
Json apply_response_budget(Json result, int cursor, size_t max_bytes) {
  std::string items_key;
  for (auto it = result.begin(); it != result.end(); ++it) {
    if (it.value().is_array()) {
      items_key = it.key();
      break;
    }
  }
  if (items_key.empty()) return result;
  Json& items = result[items_key];
  size_t total = items.size();

  if (cursor < 0) validation_error("cursor must be >= 0");
  size_t begin = std::min(static_cast<size_t>(cursor), total);

  Json page = Json::array();
  size_t used = result.dump().size();
  size_t end = begin;
  for (; end < total; ++end) {
    size_t item_size = items[end].dump().size() + 2;
    if (!page.empty() && used + item_size > max_bytes) break;
    used += item_size;
    page.push_back(items[end]);
  }
  bool truncated = begin > 0 || end < total;
  result[items_key] = std::move(page);
  if (truncated) {
    result["total"] = total;
    result["truncated"] = end < total;
    if (end < total) result["next_cursor"] = end;
  }
  return result;
}

}  // namespace

Json run_tool(SessionManager& manager, const std::string& tool, const std::string& session_id,
              const Json& params) {
  const Config& config = manager.config();

  if (tool == "create_cpg_session")
    return manager.create_session(params["source_root"].get<std::string>(),
                                  params["language"].get<std::string>());
  if (tool == "close_session") return manager.close_session(session_id);
  if (tool == "poll_job") return manager.poll_job(params["job_id"].get<std::string>());

  auto cpg = manager.cpg_for(session_id);

  if (tool == "get_codebase_summary") return get_codebase_summary(*cpg);
  if (tool == "list_methods") return list_methods(*cpg, params["pattern"].get<std::string>());
  if (tool == "get_method_source")
    return get_method_source(*cpg, params["name"].get<std::string>());
  if (tool == "list_calls")
    return list_calls(*cpg, params["pattern"].get<std::string>(),
                      params["within"].get<std::string>());
  if (tool == "get_code_snippet")
    return get_code_snippet(*cpg, params["file"].get<std::string>(),
                            params["start_line"].get<int>(), params["end_line"].get<int>());
  if (tool == "get_data_dependencies") {
    auto deps = get_data_dependencies(*cpg, params["file"].get<std::string>(),
                                      params["line"].get<int>(),
                                      params["direction"].get<std::string>(),
                                      params["depth"].get<int>());
    Json items = Json::array();
    for (const auto& d : deps) items.push_back(to_json(d));
    return Json{{"dependencies", std::move(items)}};
  }
  if (tool == "get_program_slice") {
    auto slice = get_program_slice(*cpg, params["file"].get<std::string>(),
                                   params["line"].get<int>());
    return to_json(slice);
  }
  if (tool == "find_taint_sources") {
    Json items = Json::array();
    for (const auto& p : find_taint_sources(*cpg, config.taint))
      items.push_back(to_json(*cpg, p, /*with_positions=*/false));
    return Json{{"sources", std::move(items)}};
  }
  if (tool == "find_taint_sinks") {
    Json items = Json::array();
    for (const auto& p : find_taint_sinks(*cpg, config.taint))
      items.push_back(to_json(*cpg, p, /*with_positions=*/true));
    return Json{{"sinks", std::move(items)}};
  }
  if (tool == "find_taint_flows") {
    Json items = Json::array();
    for (const auto& p : find_taint_flows(*cpg, config.taint, params["max_paths"].get<int>()))
      items.push_back(to_json(p));
    return Json{{"flows", std::move(items)}};
  }
  if (tool == "find_bounds_checks") {
    auto checks = find_bounds_checks(*cpg, config.taint, params["file"].get<std::string>(),
                                     params["line"].get<int>());
    Json items = Json::array();
    for (const auto& c : checks) items.push_back(to_json(c));
    return Json{{"checks", std::move(items)}};
  }
  if (tool == "get_call_graph")
    return to_json(
        get_call_graph(*cpg, params["root"].get<std::string>(), params["depth"].get<int>()));
  if (tool == "check_reachability")
    return to_json(check_reachability(*cpg, params["from"].get<std::string>(),
                                      params["to"].get<std::string>()));
  if (tool == "search_literals")
    return search_literals(*cpg, params["pattern"].get<std::string>(),
                           params["kind"].get<std::string>());
  if (tool == "run_structured_query") {
    StructuredQuery q;
    if (params.contains("kind")) q.kind = params["kind"].get<std::string>();
    if (params.contains("name_glob")) q.name_glob = params["name_glob"].get<std::string>();
    if (params.contains("code_contains"))
      q.code_contains = params["code_contains"].get<std::string>();
    if (params.contains("expand_edge")) q.expand_edge = params["expand_edge"].get<std::string>();
    q.expand_direction = params["expand_direction"].get<std::string>();
    q.expand_depth = params["expand_depth"].get<int>();
    q.limit = config.query_limit;
    return run_structured_query(*cpg, q);
  }
  throw ToolError(ErrorCode::UnknownTool, "unknown tool: " + tool);
}

Json error_response(ErrorCode code, const std::string& message, const std::string& detail) {
  Json error;
  error["code"] = error_code_name(code);
  error["message"] = message;
  if (!detail.empty()) error["detail"] = detail;
  return Json{{"status", "error"}, {"error", std::move(error)}};
}

Json dispatch(SessionManager& manager, const std::string& tool, const Json& request) {
  try {
    const ToolSpec* spec = find_tool(tool);
    if (spec == nullptr) throw ToolError(ErrorCode::UnknownTool, "unknown tool: " + tool);

    if (!request.is_object()) validation_error("request body must be a JSON object");
    for (auto it = request.begin(); it != request.end(); ++it) {
      if (it.key() != "session_id" && it.key() != "async" && it.key() != "params")
        validation_error("unexpected request field '" + it.key() + "'");
    }
    std::string session_id;
    if (request.contains("session_id")) {
      if (!request["session_id"].is_string()) validation_error("session_id must be a string");
      session_id = request["session_id"].get<std::string>();
    }
    bool async = false;
    if (request.contains("async")) {
      if (!request["async"].is_boolean()) validation_error("async must be a boolean");
      async = request["async"].get<bool>();
    }
    if (spec->requires_session && session_id.empty())
      validation_error("missing required field 'session_id' for tool " + tool);

    Json params = validate_params(*spec, request.value("params", Json::object()));

    int cursor = 0;
    if (params.contains("cursor")) {
      cursor = params["cursor"].get<int>();
      if (cursor < 0) validation_error("cursor must be >= 0");
    }

    if (async && tool == "create_cpg_session") {
      // The job result carries the session descriptor (including its id).
      auto ids = manager.create_session_async(params["source_root"].get<std::string>(),
                                              params["language"].get<std::string>());
      return Json{{"status", "accepted"}, {"job_id", ids.second}};
    }
    if (async && tool == "poll_job")
      validation_error("poll_job cannot itself be asynchronous");
    if (async) {
      const Config& config = manager.config();
      size_t budget = static_cast<size_t>(config.max_response_bytes);
      std::string job_id = manager.submit_job(
          session_id, tool, [&manager, tool, session_id, params, cursor, budget] {
            Json result = run_tool(manager, tool, session_id, params);
            return apply_response_budget(std::move(result), cursor, budget);
          });
      return Json{{"status", "accepted"}, {"job_id", job_id}};
    }

    Json result = run_tool(manager, tool, session_id, params);
    result = apply_response_budget(std::move(result), cursor,
                                   static_cast<size_t>(manager.config().max_response_bytes));
    return Json{{"status", "ok"}, {"result", std::move(result)}};
  } catch (const ToolError& e) {
    return error_response(e.code(), e.what(), e.detail());
  } catch (const std::exception& e) {
    return error_response(ErrorCode::Internal, e.what());
  }
}

}  // namespace badger
