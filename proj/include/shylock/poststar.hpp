#pragma once

// Forward saturation (post*) for pushdown systems whose rules are produced on
// demand. Controls and stack symbols are opaque 32-bit ids; rules push at
// most two symbols. Each automaton transition carries a bit recording whether
// an accepting control was visited along the run it summarizes, which feeds
// the head reachability graph used for repeated-head detection.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace shylock {

using PState = std::uint32_t;
using PSym = std::uint32_t;

/// ⟨p, γ⟩ ↦ ⟨to, word⟩ with `word` top first and at most two symbols long.
struct PRule {
  PState to;
  std::vector<PSym> word;
  std::string_view label;

  bool operator==(const PRule &o) const { return to == o.to && word == o.word; }
};

/// The rule oracle. Rules for a head must be the same on every call.
class RuleSystem {
public:
  virtual ~RuleSystem() = default;
  virtual const std::vector<PRule> &rules(PState p, PSym top) = 0;
  virtual bool accepting(PState p) = 0;
};

struct PConfig {
  PState control;
  std::vector<PSym> stack; // top first
  auto operator<=>(const PConfig &) const = default;
};

struct PHead {
  PState control;
  PSym top;
  auto operator<=>(const PHead &) const = default;
};

struct HeadGraph {
  struct Edge {
    std::uint32_t from;
    std::uint32_t to;
    bool accepting;
  };
  std::vector<PHead> nodes;
  std::vector<Edge> edges;
};

/// Heads on a cycle of g that contains an edge with the accepting bit.
std::vector<PHead> repeating_heads(const HeadGraph &g);

/// One rule application: rule `rule` of `rules(head)`.
struct WitnessStep {
  PHead head;
  std::size_t rule;
};

struct Witness {
  std::size_t initial; // index into the initial configurations
  std::vector<WitnessStep> steps;
  PHead target; // head reached after the last step
};

class PostStar {
public:
  /// Saturation aborts with std::runtime_error after `max_controls`
  /// distinct controls.
  PostStar(RuleSystem &sys, std::size_t max_controls);

  /// Computes post* of the given configurations (stacks nonempty).
  void saturate(const std::vector<PConfig> &initial);

  bool accepts(const PConfig &c) const;
  /// Heads of reachable configurations, sorted.
  std::vector<PHead> heads() const;
  /// Controls of reachable configurations, sorted.
  std::vector<PState> controls() const;
  std::size_t num_transitions() const { return rel_.size(); }
  std::size_t num_states() const { return states_.size(); }

  HeadGraph head_graph() const;

  /// A rule sequence from an initial configuration to one whose head
  /// satisfies `target`, or nullopt if none is reachable.
  std::optional<Witness> witness(const std::function<bool(PHead)> &target) const;

  /// All reachable configurations with at most `max_depth` stack symbols.
  std::set<PConfig> configurations(std::size_t max_depth) const;

  /// Number of ε-transitions into the final state (popping an initial
  /// configuration's bottom symbol).
  std::size_t eps_into_final() const;

  const std::vector<PConfig> &initial() const { return initial_; }
  RuleSystem &system() const { return sys_; }

private:
  enum class Kind : std::uint8_t { Control, Mid, Aux, Final };
  struct State {
    Kind kind;
    PState control; // Control and Mid
    PSym sym;       // Mid
  };
  struct Key {
    std::uint32_t from;
    PSym sym;
    std::uint32_t to;
    bool operator==(const Key &) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key &k) const {
      std::uint64_t h = k.from * 0x9E3779B97F4A7C15ull;
      h ^= (k.sym + 0x632BE59BD9B4E019ull) + (h << 6) + (h >> 2);
      h ^= (k.to + 0x85EBCA77C2B2AE63ull) + (h << 6) + (h >> 2);
      return static_cast<std::size_t>(h);
    }
  };
  struct Pending {
    Key key;
    bool bit;
  };

  static constexpr PSym kEps = UINT32_MAX;

  std::uint32_t control_state(PState p);
  std::uint32_t mid_state(PState p, PSym g);
  std::optional<std::uint32_t> find_control(PState p) const;
  std::optional<std::uint32_t> find_mid(PState p, PSym g) const;
  void push(std::uint32_t from, PSym sym, std::uint32_t to, bool bit);
  bool bit(std::uint32_t from, PSym sym, std::uint32_t to) const;

  // Summaries: ⟨p, γ⟩ can pop γ and reach control p2.
  struct Derivation {
    enum class Kind : std::uint8_t { Pop, Swap, Push } kind;
    std::size_t rule;
    PState mid1; // control after the first sub-summary (Push)
    PState end;
  };
  using SummaryMap = std::map<PHead, std::map<PState, Derivation>>;
  SummaryMap summaries() const;
  void expand(const SummaryMap &s, PHead h, PState end,
              std::vector<WitnessStep> &out) const;

  RuleSystem &sys_;
  std::size_t max_controls_;
  std::vector<PConfig> initial_;

  std::vector<State> states_;
  std::uint32_t final_ = 0;
  std::unordered_map<PState, std::uint32_t> control_ids_;
  std::unordered_map<std::uint64_t, std::uint32_t> mid_ids_;
  std::size_t num_controls_ = 0;

  std::unordered_map<Key, bool, KeyHash> rel_;
  std::vector<std::vector<std::pair<PSym, std::uint32_t>>> out_;
  std::vector<std::vector<std::uint32_t>> eps_in_;
  std::vector<Pending> work_;
};

} // namespace shylock
