#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "badger/cpg_fwd.hpp"

namespace badger {

// Immediate dominators of `nodes` rooted at `root`, using the iterative
// Cooper/Harvey/Kennedy scheme over reverse post-order. Passing the reversed
// graph (swap succ/pred, root = exit) yields immediate post-dominators.
// Nodes unreachable from the root are absent from the result; the root maps
// to itself.
std::unordered_map<NodeId, NodeId> immediate_dominators(
    const std::vector<NodeId>& nodes, NodeId root,
    const std::function<std::vector<NodeId>(NodeId)>& succ,
    const std::function<std::vector<NodeId>(NodeId)>& pred);

}  // namespace badger
