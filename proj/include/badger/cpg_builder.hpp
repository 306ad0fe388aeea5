#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "badger/ast.hpp"
#include "badger/cpg.hpp"
#include "badger/source.hpp"

namespace badger {

struct BuildOptions {
  // Worker threads for the per-method analysis kernels (reaching
  // definitions, dominators, control dependence, binding edges).
  // 0 = one per core, 1 = serial. Output is identical either way.
  int threads = 0;
  std::string language = "minic";
};

// Builds the full CPG: AST + CFG + REACHING_DEF + CDG + CALL/ARG edges plus
// indexes. Node ids are assigned deterministically, so identical sources
// yield identical graphs.
std::shared_ptr<const Cpg> build_cpg(std::vector<SourceFile> files,
                                     const BuildOptions& options = {});

// Number of CPG builds performed by this process; used to verify that the
// cache prevents rebuilds.
uint64_t cpg_build_count();

}  // namespace badger
