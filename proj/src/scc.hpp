#pragma once

// Iterative Tarjan SCC over a dense adjacency list.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace shylock::detail {

/// Component id per node; ids are in reverse topological order.
inline std::vector<std::uint32_t>
scc_ids(const std::vector<std::vector<std::uint32_t>> &adj) {
  constexpr std::uint32_t kUnset = UINT32_MAX;
  const auto n = static_cast<std::uint32_t>(adj.size());
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call; // node, next edge
  std::uint32_t counter = 0, comps = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset)
      continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto &[v, e] = call.back();
      if (e == 0 && index[v] == kUnset) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (e < adj[v].size()) {
        std::uint32_t w = adj[v][e++];
        if (index[w] == kUnset)
          call.emplace_back(w, 0);
        else if (on_stack[w])
          low[v] = std::min(low[v], index[w]);
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) {
        std::uint32_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return comp;
}

} // namespace shylock::detail
