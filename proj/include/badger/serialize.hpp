#pragma once

#include <memory>
#include <string>

#include "badger/cpg.hpp"

namespace badger {

// Cache file format: one JSON object with a versioned header (format
// version, digest algorithm, source hash, language), the source file table,
// and the node/edge tables. Indexes and dominator trees are rebuilt on load,
// so save(load(save(g))) is byte-identical to save(g).
std::string cpg_to_cache(const Cpg& cpg, const std::string& source_hash);
std::shared_ptr<const Cpg> cpg_from_cache(const std::string& text);

constexpr int kCacheFormatVersion = 1;
inline const char* kDigestAlgorithm = "sha256";

}  // namespace badger
