#pragma once

// The program as a pushdown system under the abstract semantics. Control
// locations are normalized heaps (interned to ids) plus the out-of-bound sink
// Top; stack symbols are statements, saved caller heaps and the bottom
// symbol Z. Rules are produced on demand for each head.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shylock/heap.hpp"
#include "shylock/semantics.hpp"
#include "shylock/syntax.hpp"

namespace shylock {

using ControlId = std::uint32_t;
inline constexpr ControlId kTop = std::numeric_limits<ControlId>::max();

/// Interning table from normalized heaps to dense ids.
class ControlTable {
public:
  ControlId intern(const Heap &h);
  const Heap &heap(ControlId id) const { return heaps_.at(id); }
  std::size_t size() const { return heaps_.size(); }

private:
  std::vector<Heap> heaps_;
  std::unordered_map<Heap, ControlId, HeapHash> ids_;
};

struct StackSym {
  enum class Kind : std::uint8_t { Stmt, Saved, Z };
  Kind kind = Kind::Z;
  std::uint32_t value = 0; // statement index or control id of the saved heap

  static StackSym stmt(StmtId s) { return {Kind::Stmt, index_of(s)}; }
  static StackSym saved(ControlId c) { return {Kind::Saved, c}; }
  static StackSym z() { return {Kind::Z, 0}; }

  /// Dense 32-bit code; the kind lives in the top two bits.
  std::uint32_t encode() const;
  static StackSym decode(std::uint32_t code);

  auto operator<=>(const StackSym &) const = default;
};

struct Head {
  ControlId control;
  StackSym top;
  auto operator<=>(const Head &) const = default;
};

/// One rule ⟨control, top⟩ ↦ ⟨to, word⟩; `word` is listed top first.
struct PdsMove {
  ControlId to;
  std::vector<StackSym> word;
  std::string_view label; // semantic rule, "stutter", "stuck", "bound" or "top"

  bool operator==(const PdsMove &) const = default;
};

class Pds {
public:
  Pds(std::shared_ptr<const ProgramDecl> prog, std::size_t k);

  const ProgramDecl &program() const { return *prog_; }
  std::size_t bound() const { return k_; }

  ControlId initial_control();
  /// [main, Z], top first.
  std::vector<StackSym> initial_stack() const;

  /// successors_k of a head; results are cached.
  const std::vector<PdsMove> &successors(Head h);
  /// The same rules without touching the cache.
  std::vector<PdsMove> compute_successors(Head h);

  ControlTable &controls() { return controls_; }
  const ControlTable &controls() const { return controls_; }
  bool is_top(ControlId c) const { return c == kTop; }

  /// Short hex digest of a control, "top" for Top.
  std::string control_tag(ControlId c) const;
  std::string symbol_text(StackSym s) const;

private:
  std::shared_ptr<const ProgramDecl> prog_;
  std::size_t k_;
  ControlTable controls_;
  std::unordered_map<std::uint64_t, std::vector<PdsMove>> cache_;
};

} // namespace shylock
