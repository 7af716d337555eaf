#include "shylock/checker.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace shylock {

Letter label(const Heap &h, const std::vector<Rite> &ats) {
  if (ats.size() > kMaxAtoms)
    throw std::invalid_argument("too many atoms");
  Letter l = 0;
  for (std::size_t i = 0; i < ats.size(); ++i)
    if (heap_sat(h, ats[i]))
      l |= Letter{1} << i;
  return l;
}

Letter label(const Pds &pds, ControlId c, const std::vector<Rite> &ats) {
  return c == kTop ? 0 : label(pds.controls().heap(c), ats);
}

// ---------------------------------------------------------------------------

const std::vector<PRule> &CheckedSystem::rules(PState p, PSym top) {
  std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | top;
  auto it = memo_.find(key);
  if (it == memo_.end())
    it = memo_.emplace(key, compute(p, top)).first;
  return it->second;
}

std::vector<PRule> CheckedSystem::replay_rules(PState p, PSym top) {
  return compute(p, top);
}

namespace {

std::vector<PSym> encode(const std::vector<StackSym> &word) {
  std::vector<PSym> out;
  for (auto s : word)
    out.push_back(s.encode());
  return out;
}

std::string heap_text(const Pds &pds, ControlId c) {
  return c == kTop ? "top" : dump_line(pds.controls().heap(c));
}

} // namespace

std::vector<PRule> PlainSystem::compute(PState p, PSym top) {
  std::vector<PRule> out;
  for (auto &m : pds_->compute_successors({p, StackSym::decode(top)}))
    out.push_back({m.to, encode(m.word), m.label});
  return out;
}

std::string PlainSystem::control_text(PState p) const {
  return heap_text(*pds_, p);
}

std::string PlainSystem::symbol_text(PSym s) const {
  return pds_->symbol_text(StackSym::decode(s));
}

PConfig PlainSystem::initial_config() {
  return {pds_->initial_control(), encode(pds_->initial_stack())};
}

// ---------------------------------------------------------------------------

ProductSystem::ProductSystem(std::shared_ptr<Pds> pds, BuchiAutomaton b)
    : pds_(std::move(pds)), buchi_(std::move(b)), out_(buchi_.out_edges()) {}

PState ProductSystem::intern(ProductControl pc) {
  auto [it, fresh] = ids_.emplace(pc, static_cast<PState>(controls_.size()));
  if (fresh)
    controls_.push_back(pc);
  return it->second;
}

Letter ProductSystem::cached_label(ControlId c) {
  auto it = labels_.find(c);
  if (it == labels_.end())
    it = labels_.emplace(c, label(*pds_, c, buchi_.alphabet)).first;
  return it->second;
}

std::vector<ProductSystem::Move>
ProductSystem::successors_with(ProductControl pc, StackSym sym, Letter l) {
  std::vector<Move> out;
  for (auto &m : pds_->compute_successors({pc.base, sym}))
    for (auto e : out_[pc.bstate])
      if (buchi_.edges[e].guard.satisfied_by(l))
        out.push_back({{m.to, buchi_.edges[e].to}, m.word, m.label});
  return out;
}

std::vector<ProductSystem::Move>
ProductSystem::product_successors(ProductControl pc, StackSym sym) {
  return successors_with(pc, sym, label(*pds_, pc.base, buchi_.alphabet));
}

namespace {

template <typename Moves>
std::vector<PRule> to_rules(ProductSystem &sys, Moves moves) {
  std::vector<PRule> out;
  for (auto &m : moves)
    out.push_back({sys.intern(m.to), encode(m.word), m.label});
  return out;
}

} // namespace

std::vector<PRule> ProductSystem::compute(PState p, PSym top) {
  ProductControl pc = control(p);
  return to_rules(*this, successors_with(pc, StackSym::decode(top),
                                         cached_label(pc.base)));
}

std::vector<PRule> ProductSystem::replay_rules(PState p, PSym top) {
  return to_rules(*this, product_successors(control(p), StackSym::decode(top)));
}

bool ProductSystem::accepting(PState p) {
  return buchi_.accepting[control(p).bstate];
}

std::string ProductSystem::control_text(PState p) const {
  ProductControl pc = control(p);
  return heap_text(*pds_, pc.base) + " @q" + std::to_string(pc.bstate);
}

std::string ProductSystem::symbol_text(PSym s) const {
  return pds_->symbol_text(StackSym::decode(s));
}

std::vector<PConfig> ProductSystem::initial_configs() {
  ControlId h0 = pds_->initial_control();
  std::vector<PConfig> out;
  for (auto q : buchi_.initial)
    out.push_back({intern({h0, q}), encode(pds_->initial_stack())});
  return out;
}

// ---------------------------------------------------------------------------

std::string_view verdict_name(Verdict v) {
  switch (v) {
  case Verdict::Holds:
    return "HOLDS";
  case Verdict::Violated:
    return "VIOLATED";
  case Verdict::BoundExceeded:
    return "BOUND-EXCEEDED";
  }
  return "?";
}

namespace {

std::string kv_verdict(Verdict v) {
  switch (v) {
  case Verdict::Holds:
    return "holds";
  case Verdict::Violated:
    return "violated";
  case Verdict::BoundExceeded:
    return "bound-exceeded";
  }
  return "?";
}

} // namespace

std::string CheckResult::render(Format f) const {
  std::ostringstream os;
  auto step_line = [&](const WitnessStep &s) {
    const PRule &r = system->rules(s.head.control, s.head.top)[s.rule];
    return std::string(r.label) + " | " + system->control_text(s.head.control) +
           " | " + system->symbol_text(s.head.top);
  };

  if (f == Format::KeyValue) {
    os << "verdict=" << kv_verdict(verdict) << "\n";
    os << "formula=" << formula << "\n";
    os << "bound=" << bound << "\n";
    os << "controls=" << controls << "\n";
    os << "heads=" << heads << "\n";
    os << "transitions=" << transitions << "\n";
    if (verdict != Verdict::BoundExceeded)
      os << "buchi-states=" << buchi_states << "\n";
    if (target) {
      const char *prefix = verdict == Verdict::Violated ? "loop" : "head";
      os << prefix << ".control=" << system->control_text(target->control)
         << "\n";
      os << prefix << ".symbol=" << system->symbol_text(target->top) << "\n";
    }
    if (witness) {
      os << "witness.steps=" << witness->steps.size() << "\n";
      for (std::size_t i = 0; i < witness->steps.size(); ++i)
        os << "witness." << i + 1 << "=" << step_line(witness->steps[i])
           << "\n";
    }
    return os.str();
  }

  os << verdict_name(verdict) << "\n";
  if (verdict == Verdict::Holds)
    return os.str();
  if (verdict == Verdict::BoundExceeded) {
    os << "bound: " << bound << "\n";
    os << "head: " << system->control_text(target->control) << " | "
       << system->symbol_text(target->top) << "\n";
  }
  if (witness) {
    os << (verdict == Verdict::Violated ? "witness" : "stem") << " ("
       << witness->steps.size() << " steps):\n";
    for (std::size_t i = 0; i < witness->steps.size(); ++i)
      os << "  #" << i + 1 << " " << step_line(witness->steps[i]) << "\n";
  }
  if (verdict == Verdict::Violated)
    os << "loop head: " << system->control_text(target->control) << " | "
       << system->symbol_text(target->top) << "\n";
  return os.str();
}

bool CheckResult::replay_witness(std::string *why) const {
  auto fail = [&](std::string msg) {
    if (why)
      *why = std::move(msg);
    return false;
  };
  if (!witness || !target || !system)
    return fail("no witness to replay");
  if (witness->initial >= initial.size())
    return fail("witness starts at an unknown configuration");

  PConfig cur = initial[witness->initial];
  for (std::size_t i = 0; i < witness->steps.size(); ++i) {
    const WitnessStep &s = witness->steps[i];
    const std::string at = "step " + std::to_string(i + 1) + ": ";
    if (cur.stack.empty() || cur.control != s.head.control ||
        cur.stack.front() != s.head.top)
      return fail(at + "configuration does not match the recorded head");
    const auto fresh = system->replay_rules(s.head.control, s.head.top);
    const auto &cached = system->rules(s.head.control, s.head.top);
    if (s.rule >= cached.size())
      return fail(at + "rule index out of range");
    const PRule &r = cached[s.rule];
    if (std::find(fresh.begin(), fresh.end(), r) == fresh.end())
      return fail(at + "rule is not produced by the successor relation");
    cur.stack.erase(cur.stack.begin());
    cur.stack.insert(cur.stack.begin(), r.word.begin(), r.word.end());
    cur.control = r.to;
  }
  if (cur.stack.empty() || cur.control != target->control ||
      cur.stack.front() != target->top)
    return fail("witness does not end at the reported head");
  if (verdict == Verdict::BoundExceeded) {
    const auto fresh = system->replay_rules(target->control, target->top);
    bool leaves = std::any_of(fresh.begin(), fresh.end(),
                              [](const PRule &r) { return r.to == kTop; });
    if (!leaves)
      return fail("reported head does not leave the bound");
  }
  return true;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t count_heaps(const std::vector<PState> &controls) {
  return static_cast<std::size_t>(
      std::count_if(controls.begin(), controls.end(),
                    [](PState c) { return c != kTop; }));
}

} // namespace

CheckResult check(std::shared_ptr<const ProgramDecl> prog, const Formula &f,
                  std::size_t k, const CheckOptions &opts) {
  auto pds = std::make_shared<Pds>(std::move(prog), k);
  CheckResult res;
  res.formula = f.to_string();
  res.bound = k;
  res.pds = pds;

  // Out-of-bound heads first: temporal verdicts are meaningless past them.
  auto plain = std::make_shared<PlainSystem>(pds);
  PostStar reach(*plain, opts.max_controls);
  reach.saturate({plain->initial_config()});
  res.controls = count_heaps(reach.controls());
  std::optional<PHead> bad;
  for (auto h : reach.heads()) {
    if (h.control == kTop)
      continue;
    const auto &rules = plain->rules(h.control, h.top);
    if (std::any_of(rules.begin(), rules.end(),
                    [](const PRule &r) { return r.to == kTop; })) {
      bad = h;
      break;
    }
  }
  if (bad) {
    res.verdict = Verdict::BoundExceeded;
    res.heads = reach.heads().size();
    res.transitions = reach.num_transitions();
    res.system = plain;
    res.initial = reach.initial();
    res.target = bad;
    res.witness = reach.witness([&](PHead h) { return h == *bad; });
    return res;
  }

  auto prod = std::make_shared<ProductSystem>(
      pds, ltl_to_buchi(Formula::negation(f), atoms(f)));
  PostStar sat(*prod, opts.max_controls);
  sat.saturate(prod->initial_configs());
  const auto repeating = repeating_heads(sat.head_graph());
  res.heads = sat.heads().size();
  res.transitions = sat.num_transitions();
  res.buchi_states = prod->automaton().num_states;
  res.system = prod;
  res.initial = sat.initial();
  if (repeating.empty()) {
    res.verdict = Verdict::Holds;
    return res;
  }
  res.verdict = Verdict::Violated;
  const std::set<PHead> targets(repeating.begin(), repeating.end());
  res.witness = sat.witness([&](PHead h) { return targets.count(h) > 0; });
  if (!res.witness)
    throw std::logic_error("repeating head without a stem");
  res.target = res.witness->target;
  return res;
}

std::string dump_pds(std::shared_ptr<const ProgramDecl> prog, std::size_t k,
                     const CheckOptions &opts) {
  auto pds = std::make_shared<Pds>(std::move(prog), k);
  PlainSystem plain(pds);
  PostStar reach(plain, opts.max_controls);
  reach.saturate({plain.initial_config()});

  std::ostringstream os;
  for (auto h : reach.heads()) {
    for (const auto &r : plain.rules(h.control, h.top)) {
      os << pds->control_tag(h.control) << " " << plain.symbol_text(h.top)
         << " -> " << pds->control_tag(r.to);
      for (auto s : r.word)
        os << " " << plain.symbol_text(s);
      os << "\n";
    }
  }
  os << "legend:\n";
  std::vector<std::pair<std::string, std::string>> legend;
  for (ControlId c = 0; c < pds->controls().size(); ++c)
    legend.emplace_back(pds->control_tag(c), dump_line(pds->controls().heap(c)));
  std::sort(legend.begin(), legend.end());
  for (const auto &[tag, text] : legend)
    os << "  " << tag << " = " << text << "\n";
  return os.str();
}

} // namespace shylock
