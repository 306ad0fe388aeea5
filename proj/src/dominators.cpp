#include "badger/dominators.hpp"

#include <algorithm>

namespace badger {

std::unordered_map<NodeId, NodeId> immediate_dominators(
    const std::vector<NodeId>& nodes, NodeId root,
    const std::function<std::vector<NodeId>(NodeId)>& succ,
    const std::function<std::vector<NodeId>(NodeId)>& pred) {
  // Reverse post-order from the root.
  std::unordered_map<NodeId, int> order;
  std::vector<NodeId> rpo;
  {
    std::vector<NodeId> stack = {root};
    std::unordered_map<NodeId, size_t> next_child;
    std::vector<NodeId> post;
    std::unordered_map<NodeId, bool> seen;
    seen[root] = true;
    while (!stack.empty()) {
      NodeId n = stack.back();
      auto kids = succ(n);
      size_t& idx = next_child[n];
      bool descended = false;
      while (idx < kids.size()) {
        NodeId k = kids[idx++];
        if (!seen[k]) {
          seen[k] = true;
          stack.push_back(k);
          descended = true;
          break;
        }
      }
      if (!descended) {
        post.push_back(n);
        stack.pop_back();
      }
    }
    rpo.assign(post.rbegin(), post.rend());
    for (size_t i = 0; i < rpo.size(); ++i) order[rpo[i]] = static_cast<int>(i);
  }
  (void)nodes;

  std::unordered_map<NodeId, NodeId> idom;
  idom[root] = root;

  auto intersect = [&](NodeId a, NodeId b) {
    while (a != b) {
      while (order[a] > order[b]) a = idom[a];
      while (order[b] > order[a]) b = idom[b];
    }
    return a;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId n : rpo) {
      if (n == root) continue;
      NodeId new_idom = 0;
      bool have = false;
      for (NodeId p : pred(n)) {
        if (!order.count(p) || !idom.count(p)) continue;
        if (!have) {
          new_idom = p;
          have = true;
        } else {
          new_idom = intersect(new_idom, p);
        }
      }
      if (!have) continue;
      auto it = idom.find(n);
      if (it == idom.end() || it->second != new_idom) {
        idom[n] = new_idom;
        changed = true;
      }
    }
  }
  return idom;
}

}  // namespace badger
