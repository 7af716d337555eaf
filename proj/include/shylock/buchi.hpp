#pragma once

// Büchi automata over letters of atoms, and the tableau translation from
// formulas.

#include <cstdint>
#include <string>
#include <vector>

#include "shylock/logic.hpp"

namespace shylock {

/// Conjunction of literals: every bit of `pos` set, every bit of `neg` clear.
struct Cube {
  Letter pos = 0;
  Letter neg = 0;

  bool satisfied_by(Letter l) const { return (l & pos) == pos && !(l & neg); }
  bool operator==(const Cube &) const = default;
};

struct BuchiEdge {
  std::uint32_t from;
  Cube guard;
  std::uint32_t to;
};

struct BuchiAutomaton {
  std::vector<Rite> alphabet; // bit i of a letter is alphabet[i]
  std::uint32_t num_states = 0;
  std::vector<BuchiEdge> edges;
  std::vector<std::uint32_t> initial;
  std::vector<bool> accepting;

  /// Edge indices leaving each state.
  std::vector<std::vector<std::size_t>> out_edges() const;
  std::string to_string() const;
};

/// Automaton for the words satisfying f over `alphabet`, which must contain
/// atoms(f).
BuchiAutomaton ltl_to_buchi(const Formula &f, std::vector<Rite> alphabet);
inline BuchiAutomaton ltl_to_buchi(const Formula &f) {
  return ltl_to_buchi(f, atoms(f));
}

bool buchi_accepts(const BuchiAutomaton &b, const LassoWord &w);

} // namespace shylock
