#include "badger/serialize.hpp"

#include <nlohmann/json.hpp>

#include "badger/diagnostics.hpp"

namespace badger {

using Json = nlohmann::ordered_json;

struct CpgSerde {
  static Json to_json(const Cpg& cpg, const std::string& source_hash) {
    Json doc;
    doc["format_version"] = kCacheFormatVersion;
    doc["digest"] = kDigestAlgorithm;
    doc["source_hash"] = source_hash;
    doc["language"] = cpg.language_;

    Json files = Json::array();
    for (const auto& f : cpg.files_) {
      files.push_back(Json{{"path", f.path()}, {"content", f.content()}});
    }
    doc["files"] = std::move(files);

    Json nodes = Json::array();
    for (const auto& n : cpg.nodes_) {
      if (n.id == kNoNode) continue;
      Json j;
      j["id"] = n.id;
      j["kind"] = node_kind_name(n.kind);
      if (!n.name.empty()) j["name"] = n.name;
      if (!n.code.empty()) j["code"] = n.code;
      if (!n.type.empty()) j["type"] = n.type;
      if (!n.value.empty()) j["value"] = n.value;
      if (n.file_index != UINT32_MAX) j["file"] = n.file_index;
      j["loc"] = Json::array({n.line, n.col, n.end_line, n.end_col});
      if (n.method_id != kNoNode) j["method"] = n.method_id;
      if (n.stmt_id != kNoNode) j["stmt"] = n.stmt_id;
      if (n.is_array) j["array"] = true;
      if (n.is_statement) j["statement"] = true;
      if (!n.def_vars.empty()) j["defs"] = n.def_vars;
      if (!n.use_vars.empty()) j["uses"] = n.use_vars;
      if (!n.kill_vars.empty()) j["kills"] = n.kill_vars;
      if (!n.args.empty()) {
        Json args = Json::array();
        for (const auto& a : n.args) {
          Json aj;
          aj["code"] = a.code;
          if (!a.vars.empty()) aj["vars"] = a.vars;
          if (!a.calls.empty()) aj["calls"] = a.calls;
          args.push_back(std::move(aj));
        }
        j["args"] = std::move(args);
      }
      if (!n.comparisons.empty()) {
        Json cmps = Json::array();
        for (const auto& c : n.comparisons)
          cmps.push_back(Json{{"rel", c.relation}, {"vars", c.vars}});
        j["cmps"] = std::move(cmps);
      }
      if (!n.index_vars.empty()) j["index_vars"] = n.index_vars;
      if (n.has_array_access) j["array_access"] = true;
      nodes.push_back(std::move(j));
    }
    doc["nodes"] = std::move(nodes);

    Json edges = Json::array();
    for (const auto& e : cpg.edges_) {
      Json j = Json::array({e.src, e.dst, edge_kind_name(e.kind)});
      if (!e.label.empty()) j.push_back(e.label);
      edges.push_back(std::move(j));
    }
    doc["edges"] = std::move(edges);

    Json report;
    Json perrs = Json::array();
    for (const auto& pe : cpg.report_.parse_errors)
      perrs.push_back(Json{{"file", pe.file}, {"line", pe.line}, {"col", pe.col},
                           {"message", pe.message}});
    Json warns = Json::array();
    for (const auto& w : cpg.report_.warnings)
      warns.push_back(Json{{"file", w.file}, {"line", w.line}, {"message", w.message}});
    report["parse_errors"] = std::move(perrs);
    report["warnings"] = std::move(warns);
    doc["report"] = std::move(report);
    return doc;
  }

  static std::shared_ptr<const Cpg> from_json(const Json& doc) {
    if (!doc.contains("format_version") ||
        doc["format_version"].get<int>() != kCacheFormatVersion)
      throw ToolError(ErrorCode::IoError, "unsupported cache format version");

    auto cpg = std::make_shared<Cpg>();
    cpg->language_ = doc.value("language", "minic");

    for (const auto& f : doc["files"])
      cpg->files_.emplace_back(f["path"].get<std::string>(), f["content"].get<std::string>());

    cpg->nodes_.emplace_back();  // sentinel
    for (const auto& j : doc["nodes"]) {
      CpgNode n;
      n.id = j["id"].get<NodeId>();
      NodeKind kind;
      if (!parse_node_kind(j["kind"].get<std::string>(), kind))
        throw ToolError(ErrorCode::IoError, "bad node kind in cache");
      n.kind = kind;
      n.name = j.value("name", "");
      n.code = j.value("code", "");
      n.type = j.value("type", "");
      n.value = j.value("value", "");
      n.file_index = j.contains("file") ? j["file"].get<uint32_t>() : UINT32_MAX;
      const auto& loc = j["loc"];
      n.line = loc[0].get<int>();
      n.col = loc[1].get<int>();
      n.end_line = loc[2].get<int>();
      n.end_col = loc[3].get<int>();
      n.method_id = j.value("method", kNoNode);
      n.stmt_id = j.value("stmt", kNoNode);
      n.is_array = j.value("array", false);
      n.is_statement = j.value("statement", false);
      if (j.contains("defs")) n.def_vars = j["defs"].get<std::vector<std::string>>();
      if (j.contains("uses")) n.use_vars = j["uses"].get<std::vector<std::string>>();
      if (j.contains("kills")) n.kill_vars = j["kills"].get<std::vector<std::string>>();
      if (j.contains("args")) {
        for (const auto& aj : j["args"]) {
          CpgArg a;
          a.code = aj.value("code", "");
          if (aj.contains("vars")) a.vars = aj["vars"].get<std::vector<std::string>>();
          if (aj.contains("calls")) a.calls = aj["calls"].get<std::vector<NodeId>>();
          n.args.push_back(std::move(a));
        }
      }
      if (j.contains("cmps")) {
        for (const auto& cj : j["cmps"]) {
          CpgComparison c;
          c.relation = cj["rel"].get<std::string>();
          c.vars = cj["vars"].get<std::vector<std::string>>();
          n.comparisons.push_back(std::move(c));
        }
      }
      if (j.contains("index_vars")) n.index_vars = j["index_vars"].get<std::vector<std::string>>();
      n.has_array_access = j.value("array_access", false);
      if (n.id != cpg->nodes_.size())
        throw ToolError(ErrorCode::IoError, "non-contiguous node ids in cache");
      cpg->nodes_.push_back(std::move(n));
    }

    for (const auto& j : doc["edges"]) {
      CpgEdge e;
      e.src = j[0].get<NodeId>();
      e.dst = j[1].get<NodeId>();
      EdgeKind kind;
      if (!parse_edge_kind(j[2].get<std::string>(), kind))
        throw ToolError(ErrorCode::IoError, "bad edge kind in cache");
      e.kind = kind;
      if (j.size() > 3) e.label = j[3].get<std::string>();
      cpg->edges_.push_back(std::move(e));
    }

    if (doc.contains("report")) {
      for (const auto& pe : doc["report"]["parse_errors"])
        cpg->report_.parse_errors.push_back({pe["file"].get<std::string>(),
                                             pe["line"].get<int>(), pe["col"].get<int>(),
                                             pe["message"].get<std::string>()});
      for (const auto& w : doc["report"]["warnings"])
        cpg->report_.warnings.push_back({w["file"].get<std::string>(), w["line"].get<int>(),
                                         w["message"].get<std::string>()});
    }

    cpg->rebuild_indexes();
    cpg->compute_method_cfgs();
    return cpg;
  }
};

std::string cpg_to_cache(const Cpg& cpg, const std::string& source_hash) {
  return CpgSerde::to_json(cpg, source_hash).dump();
}

std::shared_ptr<const Cpg> cpg_from_cache(const std::string& text) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ToolError(ErrorCode::IoError, "corrupt cache file");
  return CpgSerde::from_json(doc);
}

}  // namespace badger
