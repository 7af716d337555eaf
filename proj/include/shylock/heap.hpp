#pragma once

// Heaps over object identities N ∪ {⊥} and the heap-level operations the
// semantics is built from: reachability, the purely local part, cut points,
// renamings, isomorphism and normalization.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shylock/syntax.hpp"

namespace shylock {

/// An object identity: a natural number or the undefined value ⊥.
/// ⊥ orders after every natural.
class Identity {
public:
  constexpr Identity() = default; // ⊥
  constexpr explicit Identity(std::uint32_t n) : value_(n) {}

  static constexpr Identity bot() { return Identity(); }

  constexpr bool is_bot() const { return value_ == kBot; }
  constexpr std::uint32_t nat() const { return value_; }

  constexpr auto operator<=>(const Identity &) const = default;

  std::string to_string() const;

private:
  static constexpr std::uint32_t kBot =
      std::numeric_limits<std::uint32_t>::max();
  std::uint32_t value_ = kBot;
};

std::ostream &operator<<(std::ostream &os, Identity id);

using IdentitySet = std::set<Identity>;

/// A program variable or a cut-point variable c<i>.
struct VarRef {
  enum class Kind : std::uint8_t { Program, Cut };
  Kind kind;
  std::uint32_t index;

  static VarRef program(VarId v) { return {Kind::Program, v}; }
  static VarRef cut(std::uint32_t i) { return {Kind::Cut, i}; }

  auto operator<=>(const VarRef &) const = default;
};

class Heap {
public:
  /// Every declared variable ⊥, no cut-point variables, empty fields.
  explicit Heap(std::shared_ptr<const Signature> sig);

  const Signature &sig() const { return *sig_; }
  const std::shared_ptr<const Signature> &sig_ptr() const { return sig_; }

  Identity var(VarId v) const { return vars_.at(v); }
  void set_var(VarId v, Identity id);

  /// Cut-point variables beyond the active range read as ⊥.
  Identity cut(std::uint32_t i) const {
    return i < cuts_.size() ? cuts_[i] : Identity::bot();
  }
  void set_cut(std::uint32_t i, Identity id);
  void clear_cuts() { cuts_.clear(); }
  /// One past the highest active cut-point variable.
  std::uint32_t cut_count() const {
    return static_cast<std::uint32_t>(cuts_.size());
  }

  Identity get(VarRef v) const {
    return v.kind == VarRef::Kind::Program ? var(v.index) : cut(v.index);
  }
  void set(VarRef v, Identity id) {
    v.kind == VarRef::Kind::Program ? set_var(v.index, id) : set_cut(v.index, id);
  }

  /// h(f)(n); ⊥ maps to ⊥.
  Identity field(FieldId f, Identity n) const;
  /// Requires n to be a natural.
  void set_field(FieldId f, Identity n, Identity value);
  /// Resets every field of n to ⊥.
  void clear_object(Identity n);

  /// Sorted (source, value) entries of one field; values are never ⊥.
  const std::vector<std::pair<std::uint32_t, Identity>> &
  field_entries(FieldId f) const {
    return fields_.at(f);
  }

  /// Name lookup for both program and cut-point variables.
  VarRef resolve(std::string_view name) const;

  /// All program variables plus the active cut-point variables.
  std::vector<VarRef> all_vars() const;
  std::vector<VarRef> global_vars() const;
  /// Locals plus active cut-point variables (L ∪ C).
  std::vector<VarRef> local_side_vars() const;

  bool operator==(const Heap &o) const;
  std::size_t hash() const;

  /// Rebuilds the heap with `fn` applied to every stored identity (vars,
  /// cuts, field sources and values). `fn` must be injective and fix ⊥.
  template <typename Fn> Heap map_identities(Fn &&fn) const;

  friend void drop_garbage(Heap &h, const IdentitySet &live);

private:
  void trim_cuts();

  std::shared_ptr<const Signature> sig_;
  std::vector<Identity> vars_;
  std::vector<Identity> cuts_;
  std::vector<std::vector<std::pair<std::uint32_t, Identity>>> fields_;
};

struct HeapHash {
  std::size_t operator()(const Heap &h) const { return h.hash(); }
};

/// ℛ_H(vs): least set containing H(x) for x ∈ vs, closed under all fields.
IdentitySet reachable(const Heap &h, const std::vector<VarRef> &vs);
/// Name-based form; throws std::invalid_argument on an unknown name.
IdentitySet reachable(const Heap &h, const std::vector<std::string> &names);
/// ℛ_H over every variable.
IdentitySet reachable_all(const Heap &h);

/// ℛ_H(L ∪ C) \ ℛ_H(G).
IdentitySet purely_local(const Heap &h);

/// Objects on the border of the global and purely local parts; never ⊥.
IdentitySet cut_points(const Heap &h);

/// Number of naturals reachable from any variable.
std::size_t visible_size(const Heap &h);

/// A permutation of N ∪ {⊥} given as disjoint transpositions; fixes ⊥ and is
/// its own inverse.
class Renaming {
public:
  Renaming() = default;

  /// Adds n ↔ m. Both must be naturals not yet mentioned.
  void add_swap(std::uint32_t n, std::uint32_t m);

  Identity operator()(Identity id) const;
  bool is_identity() const { return map_.empty(); }
  const std::map<std::uint32_t, std::uint32_t> &pairs() const { return map_; }

private:
  std::map<std::uint32_t, std::uint32_t> map_; // both directions
};

/// ρ(H)(x) = ρ(H(x)), ρ(H)(f)(n) = ρ(H(f)(ρ⁻¹(n))).
Heap apply_renaming(const Renaming &r, const Heap &h);

/// The unique α : ℛ_{h1} → ℛ_{h2} witnessing h1 ≅ h2, if any.
using IsoMap = std::map<Identity, Identity>;
std::optional<IsoMap> isomorphic(const Heap &h1, const Heap &h2);

/// Drops field entries on unreachable sources and inactive cut variables.
Heap normalize(const Heap &h);
bool is_normalized(const Heap &h);

/// Multi-line dump: `var <name> = <id>` sorted by name, then one
/// `field <f>: <src> -> <id>, ...` line per field over reachable sources.
std::string dump(const Heap &h);
/// The same lines joined by "; ".
std::string dump_line(const Heap &h);

// ---------------------------------------------------------------------------

template <typename Fn> Heap Heap::map_identities(Fn &&fn) const {
  Heap out(sig_);
  for (std::size_t v = 0; v < vars_.size(); ++v)
    out.vars_[v] = fn(vars_[v]);
  out.cuts_.reserve(cuts_.size());
  for (auto c : cuts_)
    out.cuts_.push_back(fn(c));
  out.trim_cuts();
  for (std::size_t f = 0; f < fields_.size(); ++f) {
    auto &dst = out.fields_[f];
    for (const auto &[src, val] : fields_[f]) {
      Identity s = fn(Identity(src));
      Identity v = fn(val);
      if (!v.is_bot())
        dst.emplace_back(s.nat(), v);
    }
    std::sort(dst.begin(), dst.end());
  }
  return out;
}

} // namespace shylock
