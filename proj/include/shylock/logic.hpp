#pragma once

// Regular heap expressions (Rite) and the linear temporal logic built on
// them. A Rite denotes a relation on object identities; a heap satisfies it
// when every reachable object is related to something.

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "shylock/heap.hpp"
#include "shylock/syntax.hpp"

namespace shylock {

class Rite {
public:
  enum class Kind : std::uint8_t { Eps, Test, NegTest, Act, Cat, Alt, Star };

  static Rite eps();
  static Rite test(std::string var);
  static Rite neg_test(std::string var);
  static Rite act(std::string field);
  static Rite cat(Rite a, Rite b);
  static Rite alt(Rite a, Rite b);
  static Rite star(Rite a);

  Kind kind() const { return kind_; }
  /// Variable or field name for Test, NegTest and Act.
  const std::string &name() const { return name_; }
  const Rite &left() const { return *left_; }
  const Rite &right() const { return *right_; }

  /// Unambiguous structural key; equality and ordering go through it.
  const std::string &key() const { return key_; }
  /// Surface syntax with minimal parentheses.
  std::string to_string() const;

  bool operator==(const Rite &o) const { return key_ == o.key_; }
  std::strong_ordering operator<=>(const Rite &o) const {
    return key_ <=> o.key_;
  }

private:
  Rite() = default;

  Kind kind_ = Kind::Eps;
  std::string name_;
  std::shared_ptr<const Rite> left_, right_;
  std::string key_;
};

class Formula {
public:
  enum class Kind : std::uint8_t { True, Atom, Not, And, Next, Until };

  static Formula truth();
  static Formula atom(Rite r);
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula next(Formula f);
  static Formula until(Formula a, Formula b);

  // Derived forms, expanded into the core connectives.
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula eventually(Formula f);
  static Formula always(Formula f);

  Kind kind() const { return node_->kind; }
  const Rite &rite() const { return *node_->rite; }
  const Formula &left() const { return node_->kids[0]; }
  const Formula &right() const { return node_->kids[1]; }

  const std::string &key() const { return node_->key; }
  std::string to_string() const;
  std::size_t size() const;

  bool operator==(const Formula &o) const { return key() == o.key(); }

private:
  struct Node {
    Kind kind;
    std::shared_ptr<const Rite> rite;
    std::vector<Formula> kids;
    std::string key;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::shared_ptr<const Rite> r,
                      std::vector<Formula> kids);

  std::shared_ptr<const Node> node_;
};

/// Parses a formula; identifiers inside `{ }` resolve to variable tests or
/// field steps of `sig`. Throws ParseError.
Formula parse_formula(std::string_view text, const Signature &sig);
inline Formula parse_formula(std::string_view text, const ProgramDecl &prog) {
  return parse_formula(text, prog.sig());
}
Rite parse_rite(std::string_view text, const Signature &sig);

/// {m | n →r m} in h.
IdentitySet rite_targets(const Heap &h, const Rite &r, Identity n);

/// Every object reachable in h has at least one r-successor.
bool heap_sat(const Heap &h, const Rite &r);

/// At(φ), sorted by key and deduplicated.
std::vector<Rite> atoms(const Formula &f);

/// A set of atoms, as a bit mask over some fixed alphabet of Rites.
using Letter = std::uint64_t;
inline constexpr std::size_t kMaxAtoms = 64;

/// stem · loop^ω. `loop` must be nonempty.
struct LassoWord {
  std::vector<Letter> stem;
  std::vector<Letter> loop;
};

/// `stem | loop` with letters written as `{r1,r2}`.
std::string to_string(const LassoWord &w, const std::vector<Rite> &alphabet);

/// Whether stem·loop^ω satisfies f, with bit i of a letter meaning
/// alphabet[i] holds.
bool word_sat(const LassoWord &w, const Formula &f,
              const std::vector<Rite> &alphabet);

} // namespace shylock
