#include "shylock/logic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "lexer.hpp"

namespace shylock {

// ---------------------------------------------------------------------------
// Rite

Rite Rite::eps() {
  Rite r;
  r.kind_ = Kind::Eps;
  r.key_ = "eps";
  return r;
}

Rite Rite::test(std::string var) {
  Rite r;
  r.kind_ = Kind::Test;
  r.key_ = "t:" + var;
  r.name_ = std::move(var);
  return r;
}

Rite Rite::neg_test(std::string var) {
  Rite r;
  r.kind_ = Kind::NegTest;
  r.key_ = "n:" + var;
  r.name_ = std::move(var);
  return r;
}

Rite Rite::act(std::string field) {
  Rite r;
  r.kind_ = Kind::Act;
  r.key_ = "a:" + field;
  r.name_ = std::move(field);
  return r;
}

Rite Rite::cat(Rite a, Rite b) {
  Rite r;
  r.kind_ = Kind::Cat;
  r.key_ = "(" + a.key_ + "." + b.key_ + ")";
  r.left_ = std::make_shared<const Rite>(std::move(a));
  r.right_ = std::make_shared<const Rite>(std::move(b));
  return r;
}

Rite Rite::alt(Rite a, Rite b) {
  Rite r;
  r.kind_ = Kind::Alt;
  r.key_ = "(" + a.key_ + "+" + b.key_ + ")";
  r.left_ = std::make_shared<const Rite>(std::move(a));
  r.right_ = std::make_shared<const Rite>(std::move(b));
  return r;
}

Rite Rite::star(Rite a) {
  Rite r;
  r.kind_ = Kind::Star;
  r.key_ = "(" + a.key_ + ")*";
  r.left_ = std::make_shared<const Rite>(std::move(a));
  return r;
}

namespace {

int rite_prec(const Rite &r) {
  switch (r.kind()) {
  case Rite::Kind::Alt:
    return 0;
  case Rite::Kind::Cat:
    return 1;
  default:
    return 2;
  }
}

std::string rite_text(const Rite &r, int ctx) {
  std::string s;
  switch (r.kind()) {
  case Rite::Kind::Eps:
    return "eps";
  case Rite::Kind::Test:
  case Rite::Kind::Act:
    return r.name();
  case Rite::Kind::NegTest:
    return "~" + r.name();
  case Rite::Kind::Cat:
    s = rite_text(r.left(), 1) + " . " + rite_text(r.right(), 2);
    break;
  case Rite::Kind::Alt:
    s = rite_text(r.left(), 0) + " + " + rite_text(r.right(), 1);
    break;
  case Rite::Kind::Star:
    s = rite_text(r.left(), 3) + "*";
    break;
  }
  int p = r.kind() == Rite::Kind::Star ? 3 : rite_prec(r);
  return p < ctx ? "(" + s + ")" : s;
}

} // namespace

std::string Rite::to_string() const { return rite_text(*this, 0); }

// ---------------------------------------------------------------------------
// Formula

Formula Formula::make(Kind k, std::shared_ptr<const Rite> r,
                      std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->rite = std::move(r);
  n->kids = std::move(kids);
  switch (k) {
  case Kind::True:
    n->key = "T";
    break;
  case Kind::Atom:
    n->key = "{" + n->rite->key() + "}";
    break;
  case Kind::Not:
    n->key = "!" + n->kids[0].key();
    break;
  case Kind::Next:
    n->key = "X" + n->kids[0].key();
    break;
  case Kind::And:
    n->key = "(" + n->kids[0].key() + "&" + n->kids[1].key() + ")";
    break;
  case Kind::Until:
    n->key = "(" + n->kids[0].key() + "U" + n->kids[1].key() + ")";
    break;
  }
  return Formula(std::move(n));
}

Formula Formula::truth() { return make(Kind::True, nullptr, {}); }
Formula Formula::atom(Rite r) {
  return make(Kind::Atom, std::make_shared<const Rite>(std::move(r)), {});
}
Formula Formula::negation(Formula f) {
  return make(Kind::Not, nullptr, {std::move(f)});
}
Formula Formula::conj(Formula a, Formula b) {
  return make(Kind::And, nullptr, {std::move(a), std::move(b)});
}
Formula Formula::next(Formula f) {
  return make(Kind::Next, nullptr, {std::move(f)});
}
Formula Formula::until(Formula a, Formula b) {
  return make(Kind::Until, nullptr, {std::move(a), std::move(b)});
}

Formula Formula::disj(Formula a, Formula b) {
  return negation(conj(negation(std::move(a)), negation(std::move(b))));
}
Formula Formula::implies(Formula a, Formula b) {
  return negation(conj(std::move(a), negation(std::move(b))));
}
Formula Formula::eventually(Formula f) { return until(truth(), std::move(f)); }
Formula Formula::always(Formula f) {
  return negation(eventually(negation(std::move(f))));
}

namespace {

// Precedence: 0 and, 1 until, 2 unary/atomic.
std::string formula_text(const Formula &f, int ctx) {
  using K = Formula::Kind;
  std::string s;
  int p = 2;
  switch (f.kind()) {
  case K::True:
    return "true";
  case K::Atom:
    return "{ " + f.rite().to_string() + " }";
  case K::Not:
    return "!" + formula_text(f.left(), 2);
  case K::Next:
    return "X " + formula_text(f.left(), 2);
  case K::And:
    s = formula_text(f.left(), 0) + " & " + formula_text(f.right(), 1);
    p = 0;
    break;
  case K::Until:
    s = formula_text(f.left(), 2) + " U " + formula_text(f.right(), 1);
    p = 1;
    break;
  }
  return p < ctx ? "(" + s + ")" : s;
}

} // namespace

std::string Formula::to_string() const { return formula_text(*this, 0); }

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto &k : node_->kids)
    n += k.size();
  return n;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

const std::vector<std::string_view> kFormulaPuncts = {
    "{", "}", "(", ")", "!", "&", "|", "->", "~", ".", "+", "*"};

class FormulaParser {
public:
  FormulaParser(std::string_view text, const Signature &sig)
      : ts_(detail::tokenize(text, kFormulaPuncts)), sig_(sig) {}

  Formula formula() {
    Formula f = implication();
    if (!ts_.at_end())
      ts_.fail("unexpected '" + ts_.peek().text + "'");
    return f;
  }

  Rite rite_only() {
    Rite r = alt();
    if (!ts_.at_end())
      ts_.fail("unexpected '" + ts_.peek().text + "'");
    return r;
  }

private:
  Formula implication() {
    Formula lhs = disjunction();
    if (ts_.accept("->"))
      return Formula::implies(lhs, implication());
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (ts_.accept("|"))
      f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = until();
    while (ts_.accept("&"))
      f = Formula::conj(f, until());
    return f;
  }

  Formula until() {
    Formula lhs = unary();
    if (ts_.is_keyword("U")) {
      ts_.next();
      return Formula::until(lhs, until());
    }
    return lhs;
  }

  Formula unary() {
    if (ts_.accept("!"))
      return Formula::negation(unary());
    if (ts_.is_keyword("X")) {
      ts_.next();
      return Formula::next(unary());
    }
    if (ts_.is_keyword("F")) {
      ts_.next();
      return Formula::eventually(unary());
    }
    if (ts_.is_keyword("G")) {
      ts_.next();
      return Formula::always(unary());
    }
    if (ts_.is_keyword("true")) {
      ts_.next();
      return Formula::truth();
    }
    if (ts_.accept("(")) {
      Formula f = implication();
      ts_.expect(")");
      return f;
    }
    if (ts_.accept("{")) {
      Rite r = alt();
      ts_.expect("}");
      return Formula::atom(std::move(r));
    }
    ts_.fail(ts_.at_end() ? "unexpected end of formula"
                          : "unexpected '" + ts_.peek().text + "'");
  }

  Rite alt() {
    Rite r = cat();
    while (ts_.accept("+"))
      r = Rite::alt(r, cat());
    return r;
  }

  Rite cat() {
    Rite r = postfix();
    while (ts_.accept("."))
      r = Rite::cat(r, postfix());
    return r;
  }

  Rite postfix() {
    Rite r = primary();
    while (ts_.accept("*"))
      r = Rite::star(r);
    return r;
  }

  Rite primary() {
    if (ts_.accept("(")) {
      Rite r = alt();
      ts_.expect(")");
      return r;
    }
    if (ts_.accept("~")) {
      const detail::Token tok = ts_.peek();
      std::string name = ts_.expect_ident();
      if (!sig_.find_var(name))
        ts_.fail_at(tok, "'" + name + "' is not a declared variable");
      return Rite::neg_test(name);
    }
    const detail::Token tok = ts_.peek();
    std::string name = ts_.expect_ident();
    if (name == "eps")
      return Rite::eps();
    if (sig_.find_var(name))
      return Rite::test(name);
    if (sig_.find_field(name))
      return Rite::act(name);
    ts_.fail_at(tok, "'" + name + "' is neither a variable nor a field");
  }

  detail::TokenStream ts_;
  const Signature &sig_;
};

} // namespace

Formula parse_formula(std::string_view text, const Signature &sig) {
  return FormulaParser(text, sig).formula();
}

Rite parse_rite(std::string_view text, const Signature &sig) {
  return FormulaParser(text, sig).rite_only();
}

// ---------------------------------------------------------------------------
// Evaluation

IdentitySet rite_targets(const Heap &h, const Rite &r, Identity n) {
  const Signature &sig = h.sig();
  auto var_of = [&](const std::string &name) {
    auto v = sig.find_var(name);
    if (!v)
      throw std::invalid_argument("unknown variable '" + name + "'");
    return h.var(*v);
  };
  switch (r.kind()) {
  case Rite::Kind::Eps:
    return {n};
  case Rite::Kind::Test:
    return var_of(r.name()) == n ? IdentitySet{n} : IdentitySet{};
  case Rite::Kind::NegTest:
    return var_of(r.name()) != n ? IdentitySet{n} : IdentitySet{};
  case Rite::Kind::Act: {
    auto f = sig.find_field(r.name());
    if (!f)
      throw std::invalid_argument("unknown field '" + r.name() + "'");
    return {h.field(*f, n)};
  }
  case Rite::Kind::Alt: {
    IdentitySet out = rite_targets(h, r.left(), n);
    IdentitySet more = rite_targets(h, r.right(), n);
    out.insert(more.begin(), more.end());
    return out;
  }
  case Rite::Kind::Cat: {
    IdentitySet out;
    for (auto m : rite_targets(h, r.left(), n)) {
      IdentitySet more = rite_targets(h, r.right(), m);
      out.insert(more.begin(), more.end());
    }
    return out;
  }
  case Rite::Kind::Star: {
    IdentitySet out{n};
    std::vector<Identity> work{n};
    while (!work.empty()) {
      Identity m = work.back();
      work.pop_back();
      for (auto t : rite_targets(h, r.left(), m))
        if (out.insert(t).second)
          work.push_back(t);
    }
    return out;
  }
  }
  return {};
}

bool heap_sat(const Heap &h, const Rite &r) {
  for (auto n : reachable_all(h))
    if (rite_targets(h, r, n).empty())
      return false;
  return true;
}

namespace {

void collect_atoms(const Formula &f, std::set<Rite> &out) {
  switch (f.kind()) {
  case Formula::Kind::True:
    return;
  case Formula::Kind::Atom:
    out.insert(f.rite());
    return;
  case Formula::Kind::Not:
  case Formula::Kind::Next:
    collect_atoms(f.left(), out);
    return;
  case Formula::Kind::And:
  case Formula::Kind::Until:
    collect_atoms(f.left(), out);
    collect_atoms(f.right(), out);
    return;
  }
}

} // namespace

std::vector<Rite> atoms(const Formula &f) {
  std::set<Rite> s;
  collect_atoms(f, s);
  return {s.begin(), s.end()};
}

std::string to_string(const LassoWord &w, const std::vector<Rite> &alphabet) {
  auto letter = [&](Letter l) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      if (!(l >> i & 1))
        continue;
      if (!first)
        s += ",";
      first = false;
      s += alphabet[i].to_string();
    }
    return s + "}";
  };
  std::string out;
  for (auto l : w.stem)
    out += letter(l) + " ";
  out += "|";
  for (auto l : w.loop)
    out += " " + letter(l);
  return out;
}

namespace {

// Truth of every subformula at every lasso position.
class LassoEvaluator {
public:
  LassoEvaluator(const LassoWord &w, const std::vector<Rite> &alphabet)
      : alphabet_(alphabet) {
    if (w.loop.empty())
      throw std::invalid_argument("lasso loop must be nonempty");
    letters_ = w.stem;
    letters_.insert(letters_.end(), w.loop.begin(), w.loop.end());
    loop_start_ = w.stem.size();
  }

  const std::vector<bool> &eval(const Formula &f) {
    auto it = memo_.find(f.key());
    if (it != memo_.end())
      return it->second;
    const std::size_t n = letters_.size();
    std::vector<bool> v(n, false);
    switch (f.kind()) {
    case Formula::Kind::True:
      v.assign(n, true);
      break;
    case Formula::Kind::Atom: {
      auto pos = std::find(alphabet_.begin(), alphabet_.end(), f.rite());
      if (pos == alphabet_.end())
        throw std::invalid_argument("atom outside the alphabet");
      auto bit = static_cast<std::size_t>(pos - alphabet_.begin());
      for (std::size_t i = 0; i < n; ++i)
        v[i] = letters_[i] >> bit & 1;
      break;
    }
    case Formula::Kind::Not: {
      const auto &a = eval(f.left());
      for (std::size_t i = 0; i < n; ++i)
        v[i] = !a[i];
      break;
    }
    case Formula::Kind::And: {
      const auto &a = eval(f.left());
      const auto &b = eval(f.right());
      for (std::size_t i = 0; i < n; ++i)
        v[i] = a[i] && b[i];
      break;
    }
    case Formula::Kind::Next: {
      const auto &a = eval(f.left());
      for (std::size_t i = 0; i < n; ++i)
        v[i] = a[succ(i)];
      break;
    }
    case Formula::Kind::Until: {
      const auto &a = eval(f.left());
      const auto &b = eval(f.right());
      // Least fixpoint of v = b ∨ (a ∧ X v).
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t j = n; j-- > 0;) {
          bool nv = b[j] || (a[j] && v[succ(j)]);
          if (nv != v[j]) {
            v[j] = nv;
            changed = true;
          }
        }
      }
      break;
    }
    }
    return memo_.emplace(f.key(), std::move(v)).first->second;
  }

private:
  std::size_t succ(std::size_t i) const {
    return i + 1 < letters_.size() ? i + 1 : loop_start_;
  }

  const std::vector<Rite> &alphabet_;
  std::vector<Letter> letters_;
  std::size_t loop_start_ = 0;
  std::map<std::string, std::vector<bool>> memo_;
};

} // namespace

bool word_sat(const LassoWord &w, const Formula &f,
              const std::vector<Rite> &alphabet) {
  LassoEvaluator ev(w, alphabet);
  return ev.eval(f)[0];
}

} // namespace shylock
