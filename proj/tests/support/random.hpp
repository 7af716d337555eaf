#pragma once

// Seeded generators for programs, heaps, Rites, formulas and lasso words.

#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "shylock/heap.hpp"
#include "shylock/logic.hpp"

namespace shylock::testing {

using Rng = std::mt19937_64;

struct ProgramShape {
  std::size_t max_procs = 3;
  std::size_t max_fields = 2;
  std::size_t max_globals = 2; // besides nil
  std::size_t max_locals = 2;
  std::size_t max_depth = 3;   // statement nesting
};

/// Program text; always parses.
std::string random_program(Rng &rng, const ProgramShape &shape = {});

/// Variables and fields over identities 0..max_id-1 or ⊥; nil stays ⊥.
/// With `with_cut`, c0 is bound too.
Heap random_heap(Rng &rng, std::shared_ptr<const Signature> sig,
                 std::uint32_t max_id, bool with_cut = false);

Rite random_rite(Rng &rng, const Signature &sig, std::size_t depth);

/// Formula of at most `size` nodes over `atoms`, sugar included.
Formula random_formula(Rng &rng, const std::vector<Rite> &atoms,
                       std::size_t size);

LassoWord random_lasso(Rng &rng, std::size_t alphabet, std::size_t max_stem,
                       std::size_t max_loop);

} // namespace shylock::testing
