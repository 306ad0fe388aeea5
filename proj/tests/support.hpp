#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "badger/analyses.hpp"
#include "badger/cpg_builder.hpp"

namespace badger::test {

inline std::shared_ptr<const Cpg> build(const std::map<std::string, std::string>& files,
                                        int threads = 1) {
  std::vector<SourceFile> sources;
  for (const auto& [path, content] : files) sources.emplace_back(path, content);
  BuildOptions options;
  options.threads = threads;
  return build_cpg(std::move(sources), options);
}

inline std::shared_ptr<const Cpg> build_one(const std::string& content, int threads = 1) {
  return build({{"main.c", content}}, threads);
}

// Statement node at main.c:line.
inline NodeId at(const Cpg& cpg, int line, const std::string& file = "main.c") {
  return cpg.resolve_point(file, line);
}

inline std::vector<NodeId> rd_preds(const Cpg& cpg, NodeId n) {
  std::vector<NodeId> out;
  for (const auto& [src, e] : cpg.in(n, EdgeKind::REACHING_DEF)) out.push_back(src);
  return out;
}

}  // namespace badger::test
