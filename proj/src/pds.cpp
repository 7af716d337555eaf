#include "shylock/pds.hpp"

#include <cstdio>
#include <stdexcept>

namespace shylock {

ControlId ControlTable::intern(const Heap &h) {
  auto it = ids_.find(h);
  if (it != ids_.end())
    return it->second;
  auto id = static_cast<ControlId>(heaps_.size());
  if (id == kTop)
    throw std::length_error("control table is full");
  heaps_.push_back(h);
  ids_.emplace(h, id);
  return id;
}

namespace {
constexpr std::uint32_t kValueMask = (1u << 30) - 1;
}

std::uint32_t StackSym::encode() const {
  if (value > kValueMask)
    throw std::length_error("stack symbol out of range");
  return (static_cast<std::uint32_t>(kind) << 30) | value;
}

StackSym StackSym::decode(std::uint32_t code) {
  return {static_cast<Kind>(code >> 30), code & kValueMask};
}

Pds::Pds(std::shared_ptr<const ProgramDecl> prog, std::size_t k)
    : prog_(std::move(prog)), k_(k) {}

ControlId Pds::initial_control() {
  return controls_.intern(initial_config(*prog_, Semantics::Abstract).current);
}

std::vector<StackSym> Pds::initial_stack() const {
  return {StackSym::stmt(prog_->initial_call()), StackSym::z()};
}

const std::vector<PdsMove> &Pds::successors(Head h) {
  std::uint64_t key = (static_cast<std::uint64_t>(h.control) << 32) | h.top.encode();
  auto it = cache_.find(key);
  if (it == cache_.end())
    it = cache_.emplace(key, compute_successors(h)).first;
  return it->second;
}

std::vector<PdsMove> Pds::compute_successors(Head h) {
  if (h.control == kTop)
    return {{kTop, {h.top}, "top"}};
  if (h.top.kind == StackSym::Kind::Z)
    return {{h.control, {h.top}, "stutter"}};

  const Heap &heap = controls_.heap(h.control);
  Frame top = h.top.kind == StackSym::Kind::Stmt
                  ? Frame{StmtId{h.top.value}}
                  : Frame{controls_.heap(h.top.value)};
  TopResult res = step_top(heap, top, *prog_, Semantics::Abstract);
  if (res.moves.empty())
    return {{h.control, {StackSym::z()}, "stuck"}};

  std::vector<PdsMove> out;
  for (auto &m : res.moves) {
    if (visible_size(m.heap) > k_) {
      out.push_back({kTop, {h.top}, "bound"});
      continue;
    }
    PdsMove move{controls_.intern(m.heap), {}, rule_name(m.rule)};
    for (const auto &f : m.push) {
      if (const auto *s = std::get_if<StmtId>(&f))
        move.word.push_back(StackSym::stmt(*s));
      else
        move.word.push_back(StackSym::saved(controls_.intern(std::get<Heap>(f))));
    }
    out.push_back(std::move(move));
  }
  return out;
}

std::string Pds::control_tag(ControlId c) const {
  if (c == kTop)
    return "top";
  char buf[16];
  std::snprintf(buf, sizeof buf, "h%08x",
                static_cast<unsigned>(controls_.heap(c).hash() & 0xffffffffu));
  return buf;
}

std::string Pds::symbol_text(StackSym s) const {
  switch (s.kind) {
  case StackSym::Kind::Stmt:
    return "<" + to_string(*prog_, StmtId{s.value}) + ">";
  case StackSym::Kind::Saved:
    return "@" + control_tag(s.value);
  case StackSym::Kind::Z:
    return "Z";
  }
  return "?";
}

} // namespace shylock
