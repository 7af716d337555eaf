#pragma once

// LTL model checking of programs: the k-bounded pushdown system is first
// searched for out-of-bound heads, then synchronized with a Büchi automaton
// for the negated formula and checked for repeated heads.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shylock/buchi.hpp"
#include "shylock/logic.hpp"
#include "shylock/pds.hpp"
#include "shylock/poststar.hpp"

namespace shylock {

/// {r ∈ ats | heap_sat(h, r)} as a letter over `ats`.
Letter label(const Heap &h, const std::vector<Rite> &ats);
/// The same for a control; Top satisfies nothing.
Letter label(const Pds &pds, ControlId c, const std::vector<Rite> &ats);

/// Rule system with memoized rules over a fresh computation.
class CheckedSystem : public RuleSystem {
public:
  const std::vector<PRule> &rules(PState p, PSym top) override;
  /// Rules recomputed from scratch, bypassing every cache.
  virtual std::vector<PRule> compute(PState p, PSym top) = 0;
  /// Rules as an independent replay sees them; defaults to `compute`.
  virtual std::vector<PRule> replay_rules(PState p, PSym top);
  virtual std::string control_text(PState p) const = 0;
  virtual std::string symbol_text(PSym s) const = 0;

private:
  std::unordered_map<std::uint64_t, std::vector<PRule>> memo_;
};

/// The pushdown system itself; controls are control ids, symbols are
/// encoded StackSyms, nothing is accepting.
class PlainSystem : public CheckedSystem {
public:
  explicit PlainSystem(std::shared_ptr<Pds> pds) : pds_(std::move(pds)) {}

  std::vector<PRule> compute(PState p, PSym top) override;
  bool accepting(PState) override { return false; }
  std::string control_text(PState p) const override;
  std::string symbol_text(PSym s) const override;

  PConfig initial_config();
  Pds &pds() { return *pds_; }

private:
  std::shared_ptr<Pds> pds_;
};

struct ProductControl {
  ControlId base;
  std::uint32_t bstate;
  auto operator<=>(const ProductControl &) const = default;
};

/// The pushdown system synchronized with a Büchi automaton; the letter of a
/// step is the label of its source control.
class ProductSystem : public CheckedSystem {
public:
  ProductSystem(std::shared_ptr<Pds> pds, BuchiAutomaton b);

  struct Move {
    ProductControl to;
    std::vector<StackSym> word;
    std::string_view label;
  };
  /// product_successors, without caching.
  std::vector<Move> product_successors(ProductControl pc, StackSym sym);

  std::vector<PRule> compute(PState p, PSym top) override;
  /// Recomputes labels instead of reading the label cache.
  std::vector<PRule> replay_rules(PState p, PSym top) override;
  bool accepting(PState p) override;
  std::string control_text(PState p) const override;
  std::string symbol_text(PSym s) const override;

  PState intern(ProductControl pc);
  ProductControl control(PState p) const { return controls_.at(p); }
  std::vector<PConfig> initial_configs();
  const BuchiAutomaton &automaton() const { return buchi_; }
  Pds &pds() { return *pds_; }

private:
  Letter cached_label(ControlId c);
  std::vector<Move> successors_with(ProductControl pc, StackSym sym, Letter l);

  std::shared_ptr<Pds> pds_;
  BuchiAutomaton buchi_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<ProductControl> controls_;
  std::map<ProductControl, PState> ids_;
  std::unordered_map<ControlId, Letter> labels_;
};

enum class Verdict { Holds, Violated, BoundExceeded };

std::string_view verdict_name(Verdict v);

enum class Format { Text, KeyValue };

struct CheckOptions {
  /// Saturation gives up after this many controls.
  std::size_t max_controls = 200000;
};

struct CheckResult {
  Verdict verdict = Verdict::Holds;
  std::string formula;
  std::size_t bound = 0;

  std::size_t controls = 0; // distinct heaps discovered
  std::size_t heads = 0;    // reachable heads of the system checked last
  std::size_t transitions = 0;
  std::size_t buchi_states = 0;

  /// Violated: stem to a repeating head. BoundExceeded: stem to the head
  /// whose successor leaves the bound.
  std::optional<Witness> witness;
  std::optional<PHead> target;

  std::shared_ptr<Pds> pds;
  std::shared_ptr<CheckedSystem> system; // the system the witness lives in
  std::vector<PConfig> initial;

  std::string render(Format f) const;
  /// Re-executes the witness against freshly computed rules. On failure
  /// returns false and explains in `why`.
  bool replay_witness(std::string *why = nullptr) const;
};

CheckResult check(std::shared_ptr<const ProgramDecl> prog, const Formula &f,
                  std::size_t k, const CheckOptions &opts = {});

/// Rules of every reachable head, `<ctrl> <sym> -> <ctrl> <sym>*`, then a
/// legend of control digests.
std::string dump_pds(std::shared_ptr<const ProgramDecl> prog, std::size_t k,
                     const CheckOptions &opts = {});

} // namespace shylock
