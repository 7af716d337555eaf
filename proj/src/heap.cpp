#include "shylock/heap.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

namespace shylock {

std::string Identity::to_string() const {
  return is_bot() ? "bot" : std::to_string(value_);
}

std::ostream &operator<<(std::ostream &os, Identity id) {
  return os << id.to_string();
}

Heap::Heap(std::shared_ptr<const Signature> sig)
    : sig_(std::move(sig)), vars_(sig_->num_vars()),
      fields_(sig_->num_fields()) {}

void Heap::set_var(VarId v, Identity id) {
  if (v == sig_->nil() && !id.is_bot())
    throw std::logic_error("nil must stay undefined");
  vars_.at(v) = id;
}

void Heap::set_cut(std::uint32_t i, Identity id) {
  if (i >= cuts_.size()) {
    if (id.is_bot())
      return;
    cuts_.resize(i + 1);
  }
  cuts_[i] = id;
  trim_cuts();
}

void Heap::trim_cuts() {
  while (!cuts_.empty() && cuts_.back().is_bot())
    cuts_.pop_back();
}

Identity Heap::field(FieldId f, Identity n) const {
  if (n.is_bot())
    return n;
  const auto &m = fields_.at(f);
  auto it = std::lower_bound(
      m.begin(), m.end(), n.nat(),
      [](const auto &e, std::uint32_t key) { return e.first < key; });
  if (it == m.end() || it->first != n.nat())
    return Identity::bot();
  return it->second;
}

void Heap::set_field(FieldId f, Identity n, Identity value) {
  if (n.is_bot())
    throw std::logic_error("field update at an undefined object");
  auto &m = fields_.at(f);
  auto it = std::lower_bound(
      m.begin(), m.end(), n.nat(),
      [](const auto &e, std::uint32_t key) { return e.first < key; });
  bool present = it != m.end() && it->first == n.nat();
  if (value.is_bot()) {
    if (present)
      m.erase(it);
  } else if (present) {
    it->second = value;
  } else {
    m.insert(it, {n.nat(), value});
  }
}

void Heap::clear_object(Identity n) {
  for (FieldId f = 0; f < fields_.size(); ++f)
    set_field(f, n, Identity::bot());
}

VarRef Heap::resolve(std::string_view name) const {
  if (auto v = sig_->find_var(name))
    return VarRef::program(*v);
  if (auto c = cut_var_index(name))
    return VarRef::cut(*c);
  throw std::invalid_argument("unknown variable name '" + std::string(name) +
                              "'");
}

std::vector<VarRef> Heap::all_vars() const {
  std::vector<VarRef> out;
  for (VarId v = 0; v < vars_.size(); ++v)
    out.push_back(VarRef::program(v));
  for (std::uint32_t c = 0; c < cuts_.size(); ++c)
    out.push_back(VarRef::cut(c));
  return out;
}

std::vector<VarRef> Heap::global_vars() const {
  std::vector<VarRef> out;
  for (VarId v = 0; v < sig_->num_globals(); ++v)
    out.push_back(VarRef::program(v));
  return out;
}

std::vector<VarRef> Heap::local_side_vars() const {
  std::vector<VarRef> out;
  for (auto v = static_cast<VarId>(sig_->num_globals()); v < vars_.size(); ++v)
    out.push_back(VarRef::program(v));
  for (std::uint32_t c = 0; c < cuts_.size(); ++c)
    out.push_back(VarRef::cut(c));
  return out;
}

bool Heap::operator==(const Heap &o) const {
  return vars_ == o.vars_ && cuts_ == o.cuts_ && fields_ == o.fields_;
}

std::size_t Heap::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (auto v : vars_)
    mix(v.nat());
  mix(0xC0FFEEull);
  for (auto c : cuts_)
    mix(c.nat());
  for (const auto &m : fields_) {
    mix(0xF1E1Dull);
    for (const auto &[s, v] : m) {
      mix(s);
      mix(v.nat());
    }
  }
  return static_cast<std::size_t>(h);
}

void drop_garbage(Heap &h, const IdentitySet &live) {
  for (auto &m : h.fields_)
    std::erase_if(m, [&](const auto &e) {
      return !live.count(Identity(e.first));
    });
  h.trim_cuts();
}

// ---------------------------------------------------------------------------

IdentitySet reachable(const Heap &h, const std::vector<VarRef> &vs) {
  IdentitySet out;
  std::vector<Identity> work;
  auto visit = [&](Identity n) {
    if (out.insert(n).second)
      work.push_back(n);
  };
  for (auto v : vs)
    visit(h.get(v));
  const auto nf = static_cast<FieldId>(h.sig().num_fields());
  while (!work.empty()) {
    Identity n = work.back();
    work.pop_back();
    if (n.is_bot())
      continue;
    for (FieldId f = 0; f < nf; ++f)
      visit(h.field(f, n));
  }
  return out;
}

IdentitySet reachable(const Heap &h, const std::vector<std::string> &names) {
  std::vector<VarRef> vs;
  for (const auto &n : names)
    vs.push_back(h.resolve(n));
  return reachable(h, vs);
}

IdentitySet reachable_all(const Heap &h) { return reachable(h, h.all_vars()); }

IdentitySet purely_local(const Heap &h) {
  IdentitySet local = reachable(h, h.local_side_vars());
  IdentitySet global = reachable(h, h.global_vars());
  IdentitySet out;
  std::set_difference(local.begin(), local.end(), global.begin(), global.end(),
                      std::inserter(out, out.end()));
  return out;
}

IdentitySet cut_points(const Heap &h) {
  IdentitySet global = reachable(h, h.global_vars());
  IdentitySet border;
  for (auto v : h.local_side_vars())
    border.insert(h.get(v));
  const auto nf = static_cast<FieldId>(h.sig().num_fields());
  for (auto n : purely_local(h))
    for (FieldId f = 0; f < nf; ++f)
      border.insert(h.field(f, n));
  IdentitySet out;
  for (auto n : border)
    if (!n.is_bot() && global.count(n))
      out.insert(n);
  return out;
}

std::size_t visible_size(const Heap &h) {
  auto r = reachable_all(h);
  return r.size() - r.count(Identity::bot());
}

// ---------------------------------------------------------------------------

void Renaming::add_swap(std::uint32_t n, std::uint32_t m) {
  if (n == m)
    return;
  if (map_.count(n) || map_.count(m))
    throw std::logic_error("renaming transpositions must be disjoint");
  map_.emplace(n, m);
  map_.emplace(m, n);
}

Identity Renaming::operator()(Identity id) const {
  if (id.is_bot())
    return id;
  auto it = map_.find(id.nat());
  return it == map_.end() ? id : Identity(it->second);
}

Heap apply_renaming(const Renaming &r, const Heap &h) {
  // ρ is self-inverse: the entry at source n moves to ρ(n).
  return h.map_identities([&r](Identity id) { return r(id); });
}

std::optional<IsoMap> isomorphic(const Heap &h1, const Heap &h2) {
  IsoMap fwd, bwd;
  std::deque<std::pair<Identity, Identity>> work;
  auto bind = [&](Identity a, Identity b) {
    if (a.is_bot() != b.is_bot())
      return false;
    auto f = fwd.find(a);
    auto g = bwd.find(b);
    if (f != fwd.end() || g != bwd.end())
      return f != fwd.end() && g != bwd.end() && f->second == b &&
             g->second == a;
    fwd.emplace(a, b);
    bwd.emplace(b, a);
    work.emplace_back(a, b);
    return true;
  };
  const std::size_t nv = h1.sig().num_vars();
  if (nv != h2.sig().num_vars() ||
      h1.sig().num_fields() != h2.sig().num_fields())
    return std::nullopt;
  for (VarId v = 0; v < nv; ++v)
    if (!bind(h1.var(v), h2.var(v)))
      return std::nullopt;
  const auto nc = std::max(h1.cut_count(), h2.cut_count());
  for (std::uint32_t c = 0; c < nc; ++c)
    if (!bind(h1.cut(c), h2.cut(c)))
      return std::nullopt;
  const auto nf = static_cast<FieldId>(h1.sig().num_fields());
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    for (FieldId f = 0; f < nf; ++f)
      if (!bind(h1.field(f, a), h2.field(f, b)))
        return std::nullopt;
  }
  return fwd;
}

Heap normalize(const Heap &h) {
  Heap out = h;
  drop_garbage(out, reachable_all(h));
  return out;
}

bool is_normalized(const Heap &h) { return normalize(h) == h; }

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> dump_lines(const Heap &h) {
  const Signature &sig = h.sig();
  std::vector<std::pair<std::string, Identity>> vars;
  for (VarId v = 0; v < sig.num_vars(); ++v)
    vars.emplace_back(sig.var_name(v), h.var(v));
  for (std::uint32_t c = 0; c < h.cut_count(); ++c)
    if (!h.cut(c).is_bot())
      vars.emplace_back(cut_var_name(c), h.cut(c));
  std::sort(vars.begin(), vars.end());

  std::vector<std::string> lines;
  for (const auto &[name, id] : vars)
    lines.push_back("var " + name + " = " + id.to_string());

  std::vector<std::pair<std::string, FieldId>> fields;
  for (FieldId f = 0; f < sig.num_fields(); ++f)
    fields.emplace_back(sig.field_name(f), f);
  std::sort(fields.begin(), fields.end());
  IdentitySet live = reachable_all(h);
  for (const auto &[name, f] : fields) {
    std::string line = "field " + name + ":";
    bool first = true;
    for (auto n : live) {
      if (n.is_bot())
        continue;
      line += first ? " " : ", ";
      first = false;
      line += n.to_string() + " -> " + h.field(f, n).to_string();
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

} // namespace

std::string dump(const Heap &h) {
  std::string out;
  for (const auto &l : dump_lines(h))
    out += l + "\n";
  return out;
}

std::string dump_line(const Heap &h) {
  std::string out;
  for (const auto &l : dump_lines(h))
    out += (out.empty() ? "" : "; ") + l;
  return out;
}

} // namespace shylock
