#pragma once

// Differential test of the concrete and abstract semantics: both are run in
// lockstep under one seeded scheduler and compared after every step.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "shylock/semantics.hpp"

namespace shylock {

struct BisimFailure {
  std::size_t trial = 0;
  std::size_t step = 0; // 0 is the initial configuration
  std::string reason;
  std::string concrete;
  std::string abstract;
};

struct BisimReport {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::size_t steps_checked = 0;
  std::optional<BisimFailure> failure; // the first one found

  bool ok() const { return passed == trials; }
};

BisimReport lockstep_bisim(const ProgramDecl &prog, std::size_t depth,
                           std::size_t trials, std::uint64_t seed);

/// `PASS n/n`, or `FAIL p/n` followed by the first failure.
std::string render(const BisimReport &report);

/// At a concrete return from hc to hl: every object reachable after the
/// return that the callee could not reach through globals or cut points lies
/// in the caller's purely local part.
bool return_locality_holds(const Heap &hc, const Heap &hl);

/// Current heap and stack (top first) on a few lines.
std::string describe(const Config &c, const ProgramDecl &prog);

} // namespace shylock
