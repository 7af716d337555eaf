#pragma once

// Independent reference implementations the production code is checked
// against. They favour obviousness over speed.

#include <cstddef>
#include <set>
#include <vector>

#include "shylock/heap.hpp"
#include "shylock/logic.hpp"
#include "shylock/poststar.hpp"

namespace shylock::testing {

/// Targets of r from n, from boolean relation matrices over every identity
/// mentioned by h plus ⊥ and n. Star is closed with Warshall's algorithm.
IdentitySet naive_targets(const Heap &h, const Rite &r, Identity n);

/// heap_sat through naive_targets.
bool naive_sat(const Heap &h, const Rite &r);

struct BfsLimits {
  std::size_t explore_depth = 20; // stacks deeper than this are dropped
  std::size_t keep_depth = 8;     // reported configurations
  std::size_t max_configs = 2000000;
};

struct BfsResult {
  std::set<PConfig> configs; // reachable with stack depth <= keep_depth
  bool truncated = false;    // some successor exceeded explore_depth
  bool exhausted = false;    // max_configs hit
};

/// Explicit breadth-first search over configurations.
BfsResult explicit_bfs(RuleSystem &sys, const std::vector<PConfig> &initial,
                       const BfsLimits &limits = {});

/// Whether some reachable head ⟨p, γ⟩ reaches a configuration with head
/// ⟨p, γ⟩ again without popping γ's stack below, visiting an accepting
/// control on the way. Heads come from `reachable`; each loop search keeps
/// stacks at most `loop_depth` deep.
bool lasso_search(RuleSystem &sys, const std::set<PConfig> &reachable,
                  std::size_t loop_depth);

} // namespace shylock::testing
