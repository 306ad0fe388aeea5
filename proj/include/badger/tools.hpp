#pragma once

#include <string>
#include <vector>

#include "badger/json.hpp"
#include "badger/session.hpp"

namespace badger {

struct ToolParam {
  std::string name;
  std::string type;  // string | int | bool
  bool required = false;
  Json default_value;               // null when there is no default
  std::vector<std::string> values;  // enum restriction, empty = any
  std::string description;
};

struct ToolSpec {
  std::string name;
  std::string description;
  bool requires_session = false;
  std::vector<ToolParam> params;
};

// The 18 tools, in manifest order.
const std::vector<ToolSpec>& tool_manifest();
const ToolSpec* find_tool(const std::string& name);
Json manifest_json();

// Request envelope: {"session_id"?: str, "async"?: bool, "params"?: object}.
// Response: {"status": "ok"|"error"|"accepted", "result"|"error"|"job_id"}.
Json dispatch(SessionManager& manager, const std::string& tool, const Json& request);

// Validated synchronous execution; the async path runs exactly this.
Json run_tool(SessionManager& manager, const std::string& tool, const std::string& session_id,
              const Json& params);

Json error_response(ErrorCode code, const std::string& message, const std::string& detail = "");

}  // namespace badger
