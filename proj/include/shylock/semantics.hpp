#pragma once

// Small-step semantics. The concrete semantics allocates from a counter and
// never reuses identities; the abstract semantics allocates the least unused
// identity, records cut points in c<i> variables on call, and resolves name
// clashes by renaming on return.

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "shylock/heap.hpp"
#include "shylock/syntax.hpp"

namespace shylock {

enum class Semantics : std::uint8_t { Concrete, Abstract };

/// A stack entry: a statement still to run, or a caller heap to return to.
using Frame = std::variant<StmtId, Heap>;

/// Machine state. `stack.back()` is the top of the stack.
struct Config {
  Heap current;
  std::vector<Frame> stack;
  /// Next fresh identity; present only under the concrete semantics.
  std::optional<std::uint32_t> counter;
};

enum class Rule : std::uint8_t {
  FieldWrite,
  FieldRead,
  New,
  Assign,
  GuardEq,
  GuardNeq,
  ChoiceLeft,
  ChoiceRight,
  Seq,
  Call,
  Return,
};

std::string_view rule_name(Rule r);

/// Why a configuration has no successors.
enum class Fault : std::uint8_t { None, Terminated, GuardDisabled, NullWrite };

std::string_view fault_name(Fault f);

/// One way the top frame can be rewritten: the new heap and the frames that
/// replace the top, listed top first (at most two).
struct TopMove {
  Rule rule;
  Heap heap;
  std::vector<Frame> push;
  std::optional<std::uint32_t> counter;
};

struct TopResult {
  std::vector<TopMove> moves;
  Fault fault = Fault::None;
};

TopResult step_top(const Heap &h, const Frame &top, const ProgramDecl &prog,
                   Semantics sem, std::optional<std::uint32_t> counter = {});

struct Step {
  Rule rule;
  Config next;
};

struct Successors {
  std::vector<Step> steps; // choice: left before right
  Fault fault = Fault::None;
};

Successors concrete_step(const Config &c, const ProgramDecl &prog);
Successors abstract_step(const Config &c, const ProgramDecl &prog);
Successors step(const Config &c, const ProgramDecl &prog, Semantics sem);

/// ⟨H0, main⟩ with every variable undefined.
Config initial_config(const ProgramDecl &prog, Semantics sem);

/// min(N \ ℛ_H).
Identity fresh_min(const Heap &h);

/// Callee heap: locals and old cut-point variables cleared, then c0.. bound
/// to the caller's cut points in ascending order. `call_heap` normalizes,
/// `concrete_call_heap` keeps every field entry.
Heap call_heap(const Heap &h);
Heap concrete_call_heap(const Heap &h);

/// Abstract return θ∘ρ(hc) against the saved caller heap hl.
Heap return_combine(const Heap &hc, const Heap &hl);
/// Concrete return: restores locals and cut-point variables from hl.
Heap concrete_return(const Heap &hc, const Heap &hl);

/// The renaming return_combine applies to hc before merging.
Renaming return_renaming(const Heap &hc, const Heap &hl);

/// Properness of a stack given top first (the current heap first).
bool is_proper(const std::vector<Frame> &top_first);
bool is_proper(const Config &c);

/// (hc, hl) ⋈ (hc2, hl2). Throws std::invalid_argument unless hl ≅ hl2.
bool cp_identification(const Heap &hc, const Heap &hl, const Heap &hc2,
                       const Heap &hl2);

} // namespace shylock
