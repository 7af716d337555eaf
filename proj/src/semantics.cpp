#include "shylock/semantics.hpp"

#include <stdexcept>

namespace shylock {

std::string_view rule_name(Rule r) {
  switch (r) {
  case Rule::FieldWrite:
    return "field-write";
  case Rule::FieldRead:
    return "field-read";
  case Rule::New:
    return "new";
  case Rule::Assign:
    return "assign";
  case Rule::GuardEq:
    return "guard-eq";
  case Rule::GuardNeq:
    return "guard-neq";
  case Rule::ChoiceLeft:
    return "choice-left";
  case Rule::ChoiceRight:
    return "choice-right";
  case Rule::Seq:
    return "seq";
  case Rule::Call:
    return "call";
  case Rule::Return:
    return "return";
  }
  return "?";
}

std::string_view fault_name(Fault f) {
  switch (f) {
  case Fault::None:
    return "none";
  case Fault::Terminated:
    return "terminated";
  case Fault::GuardDisabled:
    return "guard disabled";
  case Fault::NullWrite:
    return "null dereference on write";
  }
  return "?";
}

Identity fresh_min(const Heap &h) {
  IdentitySet used = reachable_all(h);
  std::uint32_t n = 0;
  for (auto id : used) { // ascending; ⊥ sorts last
    if (id.is_bot() || id.nat() != n)
      break;
    ++n;
  }
  return Identity(n);
}

namespace {

void clear_locals(Heap &h) {
  const Signature &sig = h.sig();
  for (auto v = static_cast<VarId>(sig.num_globals()); v < sig.num_vars(); ++v)
    h.set_var(v, Identity::bot());
}

Heap enter_callee(const Heap &h) {
  IdentitySet cps = cut_points(h);
  Heap out = h;
  clear_locals(out);
  out.clear_cuts();
  std::uint32_t i = 0;
  for (auto n : cps)
    out.set_cut(i++, n);
  return out;
}

void restore_caller_vars(Heap &out, const Heap &hl) {
  const Signature &sig = hl.sig();
  for (auto v = static_cast<VarId>(sig.num_globals()); v < sig.num_vars(); ++v)
    out.set_var(v, hl.var(v));
  out.clear_cuts();
  for (std::uint32_t c = 0; c < hl.cut_count(); ++c)
    out.set_cut(c, hl.cut(c));
}

} // namespace

Heap call_heap(const Heap &h) { return normalize(enter_callee(h)); }

Heap concrete_call_heap(const Heap &h) { return enter_callee(h); }

Renaming return_renaming(const Heap &hc, const Heap &hl) {
  IdentitySet local = purely_local(hl);
  std::vector<VarRef> gc = hc.global_vars();
  for (std::uint32_t c = 0; c < hc.cut_count(); ++c)
    gc.push_back(VarRef::cut(c));
  IdentitySet shared = reachable(hc, gc);

  Heap cleared = hc;
  clear_locals(cleared);
  IdentitySet taken = reachable_all(cleared);
  taken.insert(local.begin(), local.end());

  Renaming rho;
  std::uint32_t candidate = 0;
  for (auto n : local) { // ascending, so ρ is monotone on the clashes
    if (!shared.count(n))
      continue;
    while (taken.count(Identity(candidate)))
      ++candidate;
    rho.add_swap(n.nat(), candidate);
    ++candidate;
  }
  return rho;
}

Heap return_combine(const Heap &hc, const Heap &hl) {
  Heap out = apply_renaming(return_renaming(hc, hl), hc);
  restore_caller_vars(out, hl);
  const auto nf = static_cast<FieldId>(hl.sig().num_fields());
  for (auto n : purely_local(hl))
    for (FieldId f = 0; f < nf; ++f)
      out.set_field(f, n, hl.field(f, n));
  return normalize(out);
}

Heap concrete_return(const Heap &hc, const Heap &hl) {
  Heap out = hc;
  restore_caller_vars(out, hl);
  return out;
}

TopResult step_top(const Heap &h, const Frame &top, const ProgramDecl &prog,
                   Semantics sem, std::optional<std::uint32_t> counter) {
  const bool abstract = sem == Semantics::Abstract;
  auto finish = [&](Heap next) { return abstract ? normalize(next) : next; };
  TopResult res;

  if (const Heap *saved = std::get_if<Heap>(&top)) {
    res.moves.push_back({Rule::Return,
                         abstract ? return_combine(h, *saved)
                                  : concrete_return(h, *saved),
                         {},
                         counter});
    return res;
  }

  const StmtId s = std::get<StmtId>(top);
  const StmtNode &n = prog.node(s);
  switch (n.kind) {
  case StmtKind::FieldWrite: {
    Identity target = h.var(n.x);
    if (target.is_bot()) {
      res.fault = Fault::NullWrite;
      break;
    }
    Heap next = h;
    next.set_field(n.field, target, h.var(n.y));
    res.moves.push_back({Rule::FieldWrite, finish(std::move(next)), {}, counter});
    break;
  }
  case StmtKind::FieldRead: {
    Heap next = h;
    next.set_var(n.x, h.field(n.field, h.var(n.y)));
    res.moves.push_back({Rule::FieldRead, finish(std::move(next)), {}, counter});
    break;
  }
  case StmtKind::VarCopy: {
    Heap next = h;
    next.set_var(n.x, h.var(n.y));
    res.moves.push_back({Rule::Assign, finish(std::move(next)), {}, counter});
    break;
  }
  case StmtKind::New: {
    Identity fresh;
    std::optional<std::uint32_t> next_counter = counter;
    if (abstract) {
      fresh = fresh_min(h);
    } else {
      if (!counter)
        throw std::logic_error("concrete step without an allocation counter");
      fresh = Identity(*counter);
      next_counter = *counter + 1;
    }
    Heap next = h;
    next.clear_object(fresh);
    next.set_var(n.x, fresh);
    res.moves.push_back({Rule::New, finish(std::move(next)), {}, next_counter});
    break;
  }
  case StmtKind::GuardEq:
  case StmtKind::GuardNeq: {
    bool eq = h.var(n.x) == h.var(n.y);
    bool want = n.kind == StmtKind::GuardEq;
    if (eq != want) {
      res.fault = Fault::GuardDisabled;
      break;
    }
    res.moves.push_back({want ? Rule::GuardEq : Rule::GuardNeq,
                         h,
                         {Frame{n.left}},
                         counter});
    break;
  }
  case StmtKind::Choice:
    res.moves.push_back({Rule::ChoiceLeft, h, {Frame{n.left}}, counter});
    res.moves.push_back({Rule::ChoiceRight, h, {Frame{n.right}}, counter});
    break;
  case StmtKind::Seq:
    res.moves.push_back(
        {Rule::Seq, h, {Frame{n.left}, Frame{n.right}}, counter});
    break;
  case StmtKind::Call:
    res.moves.push_back({Rule::Call,
                         abstract ? call_heap(h) : concrete_call_heap(h),
                         {Frame{prog.body(n.proc)}, Frame{h}},
                         counter});
    break;
  }
  return res;
}

Successors step(const Config &c, const ProgramDecl &prog, Semantics sem) {
  Successors out;
  if (c.stack.empty()) {
    out.fault = Fault::Terminated;
    return out;
  }
  if ((sem == Semantics::Concrete) != c.counter.has_value())
    throw std::logic_error("allocation counter does not match the semantics");
  TopResult top = step_top(c.current, c.stack.back(), prog, sem, c.counter);
  out.fault = top.fault;
  for (auto &m : top.moves) {
    Config next{std::move(m.heap), c.stack, m.counter};
    next.stack.pop_back();
    for (auto it = m.push.rbegin(); it != m.push.rend(); ++it)
      next.stack.push_back(std::move(*it));
    out.steps.push_back({m.rule, std::move(next)});
  }
  return out;
}

Successors concrete_step(const Config &c, const ProgramDecl &prog) {
  return step(c, prog, Semantics::Concrete);
}

Successors abstract_step(const Config &c, const ProgramDecl &prog) {
  return step(c, prog, Semantics::Abstract);
}

Config initial_config(const ProgramDecl &prog, Semantics sem) {
  Config c{Heap(prog.sig_ptr()), {Frame{prog.initial_call()}}, std::nullopt};
  if (sem == Semantics::Concrete)
    c.counter = 0;
  return c;
}

// ---------------------------------------------------------------------------

namespace {

struct HeapFacts {
  const Heap *heap;
  IdentitySet all;
  IdentitySet global;
  IdentitySet local;
};

HeapFacts facts(const Heap &h) {
  return {&h, reachable_all(h), reachable(h, h.global_vars()), purely_local(h)};
}

// Clause pair for H above H' in the stack.
bool proper_above(const HeapFacts &upper, const HeapFacts &lower) {
  const auto nf = static_cast<FieldId>(upper.heap->sig().num_fields());
  for (auto n : lower.local)
    for (FieldId f = 0; f < nf; ++f)
      if (upper.heap->field(f, n) != lower.heap->field(f, n))
        return false;
  for (auto n : upper.all)
    if (lower.all.count(n) && !lower.global.count(n))
      return false;
  return true;
}

} // namespace

bool is_proper(const std::vector<Frame> &top_first) {
  std::vector<HeapFacts> heaps;
  for (const auto &f : top_first)
    if (const Heap *h = std::get_if<Heap>(&f))
      heaps.push_back(facts(*h));
  for (std::size_t i = 0; i < heaps.size(); ++i)
    for (std::size_t j = i + 1; j < heaps.size(); ++j)
      if (!proper_above(heaps[i], heaps[j]))
        return false;
  return true;
}

bool is_proper(const Config &c) {
  std::vector<Frame> top_first;
  top_first.reserve(c.stack.size() + 1);
  top_first.emplace_back(c.current);
  for (auto it = c.stack.rbegin(); it != c.stack.rend(); ++it)
    top_first.push_back(*it);
  return is_proper(top_first);
}

bool cp_identification(const Heap &hc, const Heap &hl, const Heap &hc2,
                       const Heap &hl2) {
  auto alpha_l = isomorphic(hl, hl2);
  if (!alpha_l)
    throw std::invalid_argument("cut-point identification needs hl ≅ hl2");
  auto alpha_c = isomorphic(hc, hc2);
  for (auto n : cut_points(hl)) {
    bool found = false;
    for (std::uint32_t c = 0; c < hc.cut_count() && !found; ++c)
      found = hc.cut(c) == n && hc2.cut(c) == alpha_l->at(n);
    if (!found)
      return false;
    // The two isomorphisms must agree on every cut point.
    if (alpha_c) {
      auto it = alpha_c->find(n);
      if (it == alpha_c->end() || it->second != alpha_l->at(n))
        return false;
    }
  }
  return true;
}

} // namespace shylock
