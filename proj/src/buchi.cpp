#include "shylock/buchi.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "scc.hpp"

namespace shylock {

std::vector<std::vector<std::size_t>> BuchiAutomaton::out_edges() const {
  std::vector<std::vector<std::size_t>> out(num_states);
  for (std::size_t i = 0; i < edges.size(); ++i)
    out[edges[i].from].push_back(i);
  return out;
}

std::string BuchiAutomaton::to_string() const {
  std::ostringstream os;
  os << "states " << num_states << "\ninitial";
  for (auto q : initial)
    os << " " << q;
  os << "\naccepting";
  for (std::uint32_t q = 0; q < num_states; ++q)
    if (accepting[q])
      os << " " << q;
  os << "\n";
  for (const auto &e : edges) {
    os << e.from << " -[";
    bool first = true;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      bool p = e.guard.pos >> i & 1, n = e.guard.neg >> i & 1;
      if (!p && !n)
        continue;
      os << (first ? "" : " & ") << (n ? "!" : "") << "{ "
         << alphabet[i].to_string() << " }";
      first = false;
    }
    os << (first ? "true" : "") << "]-> " << e.to << "\n";
  }
  return os.str();
}

namespace {

// Subformulas in post-order, deduplicated by key.
void collect(const Formula &f, std::vector<Formula> &subs,
             std::map<std::string, std::size_t> &index) {
  if (index.count(f.key()))
    return;
  switch (f.kind()) {
  case Formula::Kind::Not:
  case Formula::Kind::Next:
    collect(f.left(), subs, index);
    break;
  case Formula::Kind::And:
  case Formula::Kind::Until:
    collect(f.left(), subs, index);
    collect(f.right(), subs, index);
    break;
  default:
    break;
  }
  index.emplace(f.key(), subs.size());
  subs.push_back(f);
}

constexpr std::size_t kMaxElementary = 22;

} // namespace

BuchiAutomaton ltl_to_buchi(const Formula &f, std::vector<Rite> alphabet) {
  if (alphabet.size() > kMaxAtoms)
    throw std::invalid_argument("too many atoms");
  std::vector<Formula> subs;
  std::map<std::string, std::size_t> index;
  collect(f, subs, index);
  const std::size_t ns = subs.size();
  auto idx = [&](const Formula &g) { return index.at(g.key()); };

  // Elementary subformulas get a free bit; the rest follow from them.
  std::vector<std::size_t> elementary, untils, nexts;
  std::vector<std::pair<std::size_t, std::size_t>> atom_bits; // sub, letter bit
  for (std::size_t i = 0; i < ns; ++i) {
    switch (subs[i].kind()) {
    case Formula::Kind::Atom: {
      auto pos = std::find(alphabet.begin(), alphabet.end(), subs[i].rite());
      if (pos == alphabet.end())
        throw std::invalid_argument("atom outside the alphabet");
      atom_bits.emplace_back(i, static_cast<std::size_t>(pos - alphabet.begin()));
      elementary.push_back(i);
      break;
    }
    case Formula::Kind::Next:
      nexts.push_back(i);
      elementary.push_back(i);
      break;
    case Formula::Kind::Until:
      untils.push_back(i);
      elementary.push_back(i);
      break;
    default:
      break;
    }
  }
  if (elementary.size() > kMaxElementary)
    throw std::invalid_argument("formula too large for the tableau");

  using Valuation = std::vector<bool>;
  auto valuate = [&](std::uint64_t mask) {
    Valuation v(ns, false);
    for (std::size_t b = 0; b < elementary.size(); ++b)
      v[elementary[b]] = mask >> b & 1;
    for (std::size_t i = 0; i < ns; ++i) {
      const Formula &g = subs[i];
      switch (g.kind()) {
      case Formula::Kind::True:
        v[i] = true;
        break;
      case Formula::Kind::Not:
        v[i] = !v[idx(g.left())];
        break;
      case Formula::Kind::And:
        v[i] = v[idx(g.left())] && v[idx(g.right())];
        break;
      default:
        break;
      }
    }
    return v;
  };

  // Locally consistent states: an until that must hold now, or cannot.
  std::vector<Valuation> states;
  for (std::uint64_t mask = 0; mask < (1ull << elementary.size()); ++mask) {
    Valuation v = valuate(mask);
    bool ok = true;
    for (auto u : untils) {
      bool a = v[idx(subs[u].left())], b = v[idx(subs[u].right())];
      if ((b && !v[u]) || (v[u] && !a && !b))
        ok = false;
    }
    if (ok)
      states.push_back(std::move(v));
  }

  auto allowed = [&](const Valuation &s, const Valuation &t) {
    for (auto x : nexts)
      if (s[x] != t[idx(subs[x].left())])
        return false;
    for (auto u : untils) {
      bool want = s[idx(subs[u].right())] ||
                  (s[idx(subs[u].left())] && t[u]);
      if (s[u] != want)
        return false;
    }
    return true;
  };
  auto guard_of = [&](const Valuation &s) {
    Cube c;
    for (auto [sub, bit] : atom_bits)
      (s[sub] ? c.pos : c.neg) |= Letter{1} << bit;
    return c;
  };
  auto in_accept_set = [&](const Valuation &s, std::size_t j) {
    std::size_t u = untils[j];
    return !s[u] || s[idx(subs[u].right())];
  };

  // Degeneralize with a counter over the until acceptance sets.
  const std::size_t m = std::max<std::size_t>(untils.size(), 1);
  const std::size_t root = idx(f);
  BuchiAutomaton out;
  out.alphabet = std::move(alphabet);

  std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> ids;
  std::vector<std::pair<std::size_t, std::size_t>> work;
  auto id_of = [&](std::size_t s, std::size_t level) {
    auto [it, fresh] = ids.emplace(std::make_pair(s, level), out.num_states);
    if (fresh) {
      ++out.num_states;
      bool acc = level == 0 && (untils.empty() || in_accept_set(states[s], 0));
      out.accepting.push_back(acc);
      work.emplace_back(s, level);
    }
    return it->second;
  };
  for (std::size_t s = 0; s < states.size(); ++s)
    if (states[s][root])
      out.initial.push_back(id_of(s, 0));
  while (!work.empty()) {
    auto [s, level] = work.back();
    work.pop_back();
    std::uint32_t from = ids.at({s, level});
    std::size_t next_level = level;
    if (untils.empty() || in_accept_set(states[s], level))
      next_level = (level + 1) % m;
    Cube g = guard_of(states[s]);
    for (std::size_t t = 0; t < states.size(); ++t)
      if (allowed(states[s], states[t]))
        out.edges.push_back({from, g, id_of(t, next_level)});
  }
  return out;
}

bool buchi_accepts(const BuchiAutomaton &b, const LassoWord &w) {
  if (w.loop.empty())
    throw std::invalid_argument("lasso loop must be nonempty");
  std::vector<Letter> letters = w.stem;
  letters.insert(letters.end(), w.loop.begin(), w.loop.end());
  const std::size_t len = letters.size();
  auto succ = [&](std::size_t i) { return i + 1 < len ? i + 1 : w.stem.size(); };
  auto node = [&](std::uint32_t q, std::size_t i) {
    return static_cast<std::uint32_t>(q * len + i);
  };

  const auto out = b.out_edges();
  std::vector<std::vector<std::uint32_t>> adj(b.num_states * len);
  std::vector<bool> seen(adj.size(), false);
  std::vector<std::uint32_t> work;
  for (auto q : b.initial)
    if (!seen[node(q, 0)]) {
      seen[node(q, 0)] = true;
      work.push_back(node(q, 0));
    }
  while (!work.empty()) {
    std::uint32_t v = work.back();
    work.pop_back();
    std::uint32_t q = v / len;
    std::size_t i = v % len;
    for (auto e : out[q]) {
      if (!b.edges[e].guard.satisfied_by(letters[i]))
        continue;
      std::uint32_t t = node(b.edges[e].to, succ(i));
      adj[v].push_back(t);
      if (!seen[t]) {
        seen[t] = true;
        work.push_back(t);
      }
    }
  }

  auto comp = detail::scc_ids(adj);
  std::vector<std::size_t> comp_size(adj.size(), 0);
  for (std::uint32_t v = 0; v < adj.size(); ++v)
    if (seen[v])
      ++comp_size[comp[v]];
  for (std::uint32_t v = 0; v < adj.size(); ++v) {
    if (!seen[v] || !b.accepting[v / len])
      continue;
    if (comp_size[comp[v]] > 1)
      return true;
    if (std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end())
      return true;
  }
  return false;
}

} // namespace shylock
