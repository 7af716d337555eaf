#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shylock::testing {

std::shared_ptr<const Signature> sec3_sig() {
  static auto sig = std::make_shared<const Signature>(
      std::vector<std::string>{"nil", "g"}, std::vector<std::string>{"l"},
      std::vector<std::string>{"f"});
  return sig;
}

namespace {

void set(Heap &h, const std::string &var, std::uint32_t n) {
  h.set(h.resolve(var), Identity(n));
}

} // namespace

Heap h1() {
  Heap h(sec3_sig());
  set(h, "l", 0);
  set(h, "g", 1);
  h.set_field(0, Identity(0), Identity(1));
  return h;
}

Heap h2() {
  Heap h(sec3_sig());
  set(h, "g", 1);
  set(h, "c0", 1);
  return h;
}

Heap h3() {
  Heap h(sec3_sig());
  set(h, "g", 0);
  set(h, "c0", 1);
  return h;
}

Heap h4() {
  Heap h(sec3_sig());
  set(h, "l", 0);
  set(h, "g", 2);
  h.set_field(0, Identity(0), Identity(1));
  return h;
}

std::shared_ptr<const Signature> list_sig() {
  static auto sig = std::make_shared<const Signature>(
      std::vector<std::string>{"nil", "first", "last"},
      std::vector<std::string>{}, std::vector<std::string>{"next"});
  return sig;
}

Heap list_fixture(bool cut) {
  Heap h(list_sig());
  set(h, "first", 0);
  set(h, "last", 2);
  h.set_field(0, Identity(0), Identity(1));
  if (!cut)
    h.set_field(0, Identity(1), Identity(2));
  return h;
}

std::string corpus_path(const std::string &name) {
  return std::string(SHYLOCK_CORPUS_DIR) + "/" + name + ".shy";
}

std::shared_ptr<const ProgramDecl> program(const std::string &text) {
  return std::make_shared<const ProgramDecl>(parse_program(text));
}

StmtId find_stmt(const ProgramDecl &p, const std::string &text) {
  for (std::uint32_t i = 0; i < p.num_stmts(); ++i)
    if (to_string(p, StmtId{i}) == text)
      return StmtId{i};
  throw std::runtime_error("no statement '" + text + "'");
}

std::shared_ptr<const ProgramDecl> load_corpus(const std::string &name) {
  std::ifstream in(corpus_path(name));
  if (!in)
    throw std::runtime_error("missing corpus program " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return program(ss.str());
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  for (const auto &e : std::filesystem::directory_iterator(SHYLOCK_CORPUS_DIR))
    if (e.path().extension() == ".shy")
      out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace shylock::testing
