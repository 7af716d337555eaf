#include "shylock/poststar.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "scc.hpp"

namespace shylock {

std::vector<PHead> repeating_heads(const HeadGraph &g) {
  std::vector<std::vector<std::uint32_t>> adj(g.nodes.size());
  for (const auto &e : g.edges)
    adj[e.from].push_back(e.to);
  auto comp = detail::scc_ids(adj);
  std::vector<bool> hot(g.nodes.size(), false);
  for (const auto &e : g.edges)
    if (e.accepting && comp[e.from] == comp[e.to])
      hot[comp[e.from]] = true;
  std::vector<PHead> out;
  for (std::uint32_t v = 0; v < g.nodes.size(); ++v)
    if (hot[comp[v]])
      out.push_back(g.nodes[v]);
  std::sort(out.begin(), out.end());
  return out;
}

PostStar::PostStar(RuleSystem &sys, std::size_t max_controls)
    : sys_(sys), max_controls_(max_controls) {}

std::uint32_t PostStar::control_state(PState p) {
  auto it = control_ids_.find(p);
  if (it != control_ids_.end())
    return it->second;
  if (++num_controls_ > max_controls_)
    throw std::runtime_error("saturation discovered more than " +
                             std::to_string(max_controls_) + " controls");
  auto id = static_cast<std::uint32_t>(states_.size());
  states_.push_back({Kind::Control, p, 0});
  out_.emplace_back();
  eps_in_.emplace_back();
  control_ids_.emplace(p, id);
  return id;
}

std::uint32_t PostStar::mid_state(PState p, PSym g) {
  std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | g;
  auto it = mid_ids_.find(key);
  if (it != mid_ids_.end())
    return it->second;
  auto id = static_cast<std::uint32_t>(states_.size());
  states_.push_back({Kind::Mid, p, g});
  out_.emplace_back();
  eps_in_.emplace_back();
  mid_ids_.emplace(key, id);
  return id;
}

std::optional<std::uint32_t> PostStar::find_control(PState p) const {
  auto it = control_ids_.find(p);
  if (it == control_ids_.end())
    return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> PostStar::find_mid(PState p, PSym g) const {
  auto it = mid_ids_.find((static_cast<std::uint64_t>(p) << 32) | g);
  if (it == mid_ids_.end())
    return std::nullopt;
  return it->second;
}

void PostStar::push(std::uint32_t from, PSym sym, std::uint32_t to, bool b) {
  auto it = rel_.find({from, sym, to});
  if (it != rel_.end() && (it->second || !b))
    return;
  work_.push_back({{from, sym, to}, b});
}

bool PostStar::bit(std::uint32_t from, PSym sym, std::uint32_t to) const {
  return rel_.at({from, sym, to});
}

void PostStar::saturate(const std::vector<PConfig> &initial) {
  initial_ = initial;
  final_ = static_cast<std::uint32_t>(states_.size());
  states_.push_back({Kind::Final, 0, 0});
  out_.emplace_back();
  eps_in_.emplace_back();

  for (const auto &c : initial) {
    if (c.stack.empty())
      throw std::invalid_argument("initial configuration needs a stack symbol");
    std::uint32_t from = control_state(c.control);
    for (std::size_t i = 0; i < c.stack.size(); ++i) {
      std::uint32_t to = final_;
      if (i + 1 < c.stack.size()) {
        to = static_cast<std::uint32_t>(states_.size());
        states_.push_back({Kind::Aux, 0, 0});
        out_.emplace_back();
        eps_in_.emplace_back();
      }
      push(from, c.stack[i], to, false);
      from = to;
    }
  }

  while (!work_.empty()) {
    Pending t = work_.back();
    work_.pop_back();
    auto [it, inserted] = rel_.emplace(t.key, t.bit);
    if (!inserted) {
      if (it->second || !t.bit)
        continue;
      it->second = true;
    } else {
      out_[t.key.from].emplace_back(t.key.sym, t.key.to);
      if (t.key.sym == kEps)
        eps_in_[t.key.to].push_back(t.key.from);
    }
    const auto [p, g, q] = t.key;
    const bool b = t.bit;

    if (g == kEps) {
      for (auto [g2, q2] : out_[q])
        if (g2 != kEps)
          push(p, g2, q2, b || bit(q, g2, q2));
      continue;
    }

    for (auto p2 : eps_in_[p])
      push(p2, g, q, b || bit(p2, kEps, p));

    if (states_[p].kind != Kind::Control)
      continue;
    const PState c = states_[p].control;
    const bool acc = sys_.accepting(c);
    const bool bb = b || acc;
    const auto &rules = sys_.rules(c, g);
    for (const auto &r : rules) {
      std::uint32_t to = control_state(r.to);
      switch (r.word.size()) {
      case 0:
        push(to, kEps, q, bb);
        break;
      case 1:
        push(to, r.word[0], q, bb);
        break;
      case 2: {
        std::uint32_t m = mid_state(r.to, r.word[0]);
        push(to, r.word[0], m, false);
        push(m, r.word[1], q, bb);
        break;
      }
      default:
        throw std::invalid_argument("rule pushes more than two symbols");
      }
    }
  }
}

bool PostStar::accepts(const PConfig &c) const {
  auto start = find_control(c.control);
  if (!start)
    return false;
  std::set<std::uint32_t> cur{*start};
  for (auto [g, q] : out_[*start])
    if (g == kEps)
      cur.insert(q);
  for (auto sym : c.stack) {
    std::set<std::uint32_t> next;
    for (auto s : cur)
      for (auto [g, q] : out_[s])
        if (g == sym)
          next.insert(q);
    cur = std::move(next);
    if (cur.empty())
      return false;
  }
  return cur.count(final_) > 0;
}

std::vector<PHead> PostStar::heads() const {
  std::set<PHead> hs;
  for (const auto &[p, id] : control_ids_)
    for (auto [g, q] : out_[id])
      if (g != kEps)
        hs.insert({p, g});
  return {hs.begin(), hs.end()};
}

std::vector<PState> PostStar::controls() const {
  std::set<PState> cs;
  for (auto h : heads())
    cs.insert(h.control);
  for (const auto &[p, id] : control_ids_)
    for (auto [g, q] : out_[id])
      if (g == kEps && q == final_)
        cs.insert(p);
  return {cs.begin(), cs.end()};
}

std::size_t PostStar::eps_into_final() const { return eps_in_[final_].size(); }

HeadGraph PostStar::head_graph() const {
  HeadGraph g;
  g.nodes = heads();
  std::map<PHead, std::uint32_t> index;
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i)
    index.emplace(g.nodes[i], i);
  auto node = [&](PHead h) {
    auto it = index.find(h);
    if (it == index.end())
      throw std::logic_error("head graph edge leaves the reachable heads");
    return it->second;
  };
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) {
    const PHead h = g.nodes[i];
    const bool acc = sys_.accepting(h.control);
    for (const auto &r : sys_.rules(h.control, h.top)) {
      if (r.word.empty())
        continue;
      g.edges.push_back({i, node({r.to, r.word[0]}), acc});
      if (r.word.size() < 2)
        continue;
      auto m = find_mid(r.to, r.word[0]);
      if (!m)
        continue;
      for (auto p2 : eps_in_[*m])
        g.edges.push_back({i, node({states_[p2].control, r.word[1]}),
                           acc || bit(p2, kEps, *m)});
    }
  }
  return g;
}

PostStar::SummaryMap PostStar::summaries() const {
  SummaryMap s;
  const auto hs = heads();
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto h : hs) {
      const auto &rules = sys_.rules(h.control, h.top);
      for (std::size_t i = 0; i < rules.size(); ++i) {
        const PRule &r = rules[i];
        auto add = [&](PState end, Derivation d) {
          if (s[h].emplace(end, d).second)
            changed = true;
        };
        if (r.word.empty()) {
          add(r.to, {Derivation::Kind::Pop, i, 0, r.to});
          continue;
        }
        auto first = s.find({r.to, r.word[0]});
        if (first == s.end())
          continue;
        std::vector<PState> mids;
        for (const auto &[end, d] : first->second)
          mids.push_back(end);
        for (auto mid : mids) {
          if (r.word.size() == 1) {
            add(mid, {Derivation::Kind::Swap, i, 0, mid});
            continue;
          }
          auto second = s.find({mid, r.word[1]});
          if (second == s.end())
            continue;
          std::vector<PState> ends;
          for (const auto &[end, d] : second->second)
            ends.push_back(end);
          for (auto end : ends)
            add(end, {Derivation::Kind::Push, i, mid, end});
        }
      }
    }
  }
  return s;
}

void PostStar::expand(const SummaryMap &s, PHead h, PState end,
                      std::vector<WitnessStep> &out) const {
  const Derivation &d = s.at(h).at(end);
  out.push_back({h, d.rule});
  const PRule &r = sys_.rules(h.control, h.top)[d.rule];
  switch (d.kind) {
  case Derivation::Kind::Pop:
    break;
  case Derivation::Kind::Swap:
    expand(s, {r.to, r.word[0]}, end, out);
    break;
  case Derivation::Kind::Push:
    expand(s, {r.to, r.word[0]}, d.mid1, out);
    expand(s, {d.mid1, r.word[1]}, end, out);
    break;
  }
}

std::optional<Witness>
PostStar::witness(const std::function<bool(PHead)> &target) const {
  // A node is a head plus where its stack continues: `base` means the rest
  // of the stack is the suffix of initial configuration `init` after
  // position `level`; otherwise it is never popped on the way to the target.
  struct Node {
    PHead head;
    std::uint32_t init;
    std::uint32_t level;
    bool base;
    auto operator<=>(const Node &) const = default;
  };
  struct Via {
    Node prev;
    WitnessStep step;
    std::optional<std::pair<PHead, PState>> summary;
  };

  const SummaryMap s = summaries();
  std::map<Node, std::optional<Via>> parent;
  std::deque<Node> queue;
  for (std::uint32_t k = 0; k < initial_.size(); ++k) {
    Node n{{initial_[k].control, initial_[k].stack[0]}, k, 0, true};
    if (parent.emplace(n, std::nullopt).second)
      queue.push_back(n);
  }

  auto visit = [&](Node n, Via via) {
    if (parent.emplace(n, via).second)
      queue.push_back(n);
  };
  std::optional<Node> found;
  while (!queue.empty() && !found) {
    Node n = queue.front();
    queue.pop_front();
    if (target(n.head)) {
      found = n;
      break;
    }
    const auto &rules = sys_.rules(n.head.control, n.head.top);
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const PRule &r = rules[i];
      WitnessStep st{n.head, i};
      if (r.word.empty()) {
        const auto &stack = initial_[n.init].stack;
        if (n.base && n.level + 1 < stack.size())
          visit({{r.to, stack[n.level + 1]}, n.init, n.level + 1, true},
                {n, st, std::nullopt});
        continue;
      }
      PHead first{r.to, r.word[0]};
      if (r.word.size() == 1) {
        visit({first, n.init, n.level, n.base}, {n, st, std::nullopt});
        continue;
      }
      visit({first, 0, 0, false}, {n, st, std::nullopt});
      auto sums = s.find(first);
      if (sums == s.end())
        continue;
      for (const auto &[mid, d] : sums->second)
        visit({{mid, r.word[1]}, n.init, n.level, n.base},
              {n, st, std::make_pair(first, mid)});
    }
  }
  if (!found)
    return std::nullopt;

  std::vector<const Via *> chain;
  Node cur = *found;
  while (const auto &via = parent.at(cur)) {
    chain.push_back(&*via);
    cur = via->prev;
  }
  Witness w{cur.init, {}, found->head};
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    w.steps.push_back((*it)->step);
    if ((*it)->summary)
      expand(s, (*it)->summary->first, (*it)->summary->second, w.steps);
  }
  return w;
}

std::set<PConfig> PostStar::configurations(std::size_t max_depth) const {
  std::set<PConfig> out;
  std::vector<PSym> word;
  std::function<void(PState, std::uint32_t)> walk = [&](PState p,
                                                        std::uint32_t s) {
    if (s == final_)
      out.insert({p, word});
    for (auto [g, q] : out_[s]) {
      if (g == kEps) {
        walk(p, q);
        continue;
      }
      if (word.size() == max_depth)
        continue;
      word.push_back(g);
      walk(p, q);
      word.pop_back();
    }
  };
  for (const auto &[p, id] : control_ids_)
    walk(p, id);
  return out;
}

} // namespace shylock
