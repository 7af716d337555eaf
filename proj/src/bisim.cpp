#include "shylock/bisim.hpp"

#include <random>
#include <sstream>

namespace shylock {

bool return_locality_holds(const Heap &hc, const Heap &hl) {
  Heap hr = hc;
  const Signature &sig = hl.sig();
  for (auto v = static_cast<VarId>(sig.num_globals()); v < sig.num_vars(); ++v)
    hr.set_var(v, hl.var(v));
  std::vector<VarRef> gc = hc.global_vars();
  for (std::uint32_t c = 0; c < hc.cut_count(); ++c)
    gc.push_back(VarRef::cut(c));
  IdentitySet callee = reachable(hc, gc);
  IdentitySet local = purely_local(hl);
  for (auto n : reachable_all(hr))
    if (!callee.count(n) && !local.count(n))
      return false;
  return true;
}

std::string describe(const Config &c, const ProgramDecl &prog) {
  std::ostringstream os;
  os << "heap: " << dump_line(c.current) << "\n";
  for (auto it = c.stack.rbegin(); it != c.stack.rend(); ++it) {
    if (const auto *s = std::get_if<StmtId>(&*it))
      os << "  stmt: " << to_string(prog, *s) << "\n";
    else
      os << "  saved: " << dump_line(std::get<Heap>(*it)) << "\n";
  }
  return os.str();
}

namespace {

// Heaps of a configuration, current first, then the saved heaps top down.
std::vector<const Heap *> heap_chain(const Config &c) {
  std::vector<const Heap *> out{&c.current};
  for (auto it = c.stack.rbegin(); it != c.stack.rend(); ++it)
    if (const auto *h = std::get_if<Heap>(&*it))
      out.push_back(h);
  return out;
}

std::optional<std::string> related(const Config &conc, const Config &abs) {
  if (!isomorphic(conc.current, abs.current))
    return "current heaps are not isomorphic";
  if (conc.stack.size() != abs.stack.size())
    return "stack heights differ";
  for (std::size_t i = 0; i < conc.stack.size(); ++i) {
    const Frame &a = conc.stack[i];
    const Frame &b = abs.stack[i];
    if (a.index() != b.index())
      return "stack entry " + std::to_string(i) + " has different kinds";
    if (const auto *s = std::get_if<StmtId>(&a)) {
      if (*s != std::get<StmtId>(b))
        return "stack entry " + std::to_string(i) + " holds different statements";
    } else if (!isomorphic(std::get<Heap>(a), std::get<Heap>(b))) {
      return "saved heaps at entry " + std::to_string(i) + " are not isomorphic";
    }
  }
  auto cc = heap_chain(conc);
  auto ac = heap_chain(abs);
  for (std::size_t i = 0; i + 1 < cc.size(); ++i)
    if (!cp_identification(*cc[i], *cc[i + 1], *ac[i], *ac[i + 1]))
      return "cut points not identified between heap " + std::to_string(i) +
             " and the one below it";
  if (!is_proper(conc))
    return "concrete configuration is not proper";
  return std::nullopt;
}

} // namespace

BisimReport lockstep_bisim(const ProgramDecl &prog, std::size_t depth,
                           std::size_t trials, std::uint64_t seed) {
  BisimReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed * 1000003u + t);
    Config conc = initial_config(prog, Semantics::Concrete);
    Config abs = initial_config(prog, Semantics::Abstract);

    auto fail = [&](std::size_t step, std::string reason) {
      if (!report.failure)
        report.failure = BisimFailure{t, step, std::move(reason),
                                      describe(conc, prog),
                                      describe(abs, prog)};
    };

    bool ok = true;
    if (auto why = related(conc, abs)) {
      fail(0, *why);
      ok = false;
    }
    for (std::size_t i = 1; ok && i <= depth; ++i) {
      Successors sc = concrete_step(conc, prog);
      Successors sa = abstract_step(abs, prog);
      if (sc.steps.size() != sa.steps.size() || sc.fault != sa.fault) {
        fail(i, "successor counts differ");
        ok = false;
        break;
      }
      if (sc.steps.empty())
        break;
      std::size_t pick = rng() % sc.steps.size();
      Step &c = sc.steps[pick];
      Step &a = sa.steps[pick];
      if (c.rule != a.rule) {
        fail(i, "rules differ");
        ok = false;
        break;
      }
      if (c.rule == Rule::Return &&
          !return_locality_holds(conc.current, std::get<Heap>(conc.stack.back()))) {
        fail(i, "return reaches an object outside the caller's local part");
        ok = false;
        break;
      }
      conc = std::move(c.next);
      abs = std::move(a.next);
      ++report.steps_checked;
      if (auto why = related(conc, abs)) {
        fail(i, *why);
        ok = false;
      }
    }
    if (ok)
      ++report.passed;
  }
  return report;
}

std::string render(const BisimReport &report) {
  std::ostringstream os;
  os << (report.ok() ? "PASS " : "FAIL ") << report.passed << "/"
     << report.trials << "\n";
  if (report.failure) {
    const auto &f = *report.failure;
    os << "trial " << f.trial << ", step " << f.step << ": " << f.reason
       << "\n";
    os << "concrete:\n" << f.concrete << "abstract:\n" << f.abstract;
  }
  return os.str();
}

} // namespace shylock
