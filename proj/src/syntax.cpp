#include "shylock/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "lexer.hpp"

namespace shylock {

ParseError::ParseError(const std::string &msg, unsigned line, unsigned column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                         ": " + msg),
      line_(line), column_(column) {}

namespace detail {

std::vector<Token> tokenize(std::string_view text,
                            const std::vector<std::string_view> &puncts) {
  std::vector<Token> out;
  unsigned line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n')
        advance(1);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      out.push_back({TokKind::Ident, std::string(text.substr(i, j - i)), line,
                     col});
      advance(j - i);
      continue;
    }
    std::string_view best;
    for (auto p : puncts)
      if (p.size() > best.size() && text.substr(i, p.size()) == p)
        best = p;
    if (best.empty())
      throw ParseError(std::string("unexpected character '") + c + "'", line,
                       col);
    out.push_back({TokKind::Punct, std::string(best), line, col});
    advance(best.size());
  }
  out.push_back({TokKind::End, "", line, col});
  return out;
}

const Token &TokenStream::peek(std::size_t ahead) const {
  return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
}

const Token &TokenStream::next() {
  const Token &t = toks_[pos_];
  if (pos_ + 1 < toks_.size())
    ++pos_;
  return t;
}

bool TokenStream::is(std::string_view punct, std::size_t ahead) const {
  const Token &t = peek(ahead);
  return t.kind == TokKind::Punct && t.text == punct;
}

bool TokenStream::accept(std::string_view punct) {
  if (!is(punct))
    return false;
  next();
  return true;
}

void TokenStream::expect(std::string_view punct) {
  if (!accept(punct))
    fail("expected '" + std::string(punct) + "'");
}

void TokenStream::expect_keyword(std::string_view kw) {
  if (!is_keyword(kw))
    fail("expected '" + std::string(kw) + "'");
  next();
}

std::string TokenStream::expect_ident() {
  if (!is_ident())
    fail("expected identifier");
  return next().text;
}

void TokenStream::fail(const std::string &msg) const { fail_at(peek(), msg); }

void TokenStream::fail_at(const Token &t, const std::string &msg) const {
  std::string found = t.kind == TokKind::End ? "end of input"
                                             : "'" + t.text + "'";
  throw ParseError(msg + ", found " + found, t.line, t.column);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Names

bool is_reserved_name(std::string_view name) {
  return name == "oc" || cut_var_index(name).has_value();
}

std::optional<std::uint32_t> cut_var_index(std::string_view name) {
  if (name.size() < 2 || name[0] != 'c')
    return std::nullopt;
  std::uint32_t v = 0;
  auto digits = name.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    return std::nullopt;
  return v;
}

std::string cut_var_name(std::uint32_t index) {
  return "c" + std::to_string(index);
}

Signature::Signature(std::vector<std::string> globals,
                     std::vector<std::string> locals,
                     std::vector<std::string> fields)
    : globals_(std::move(globals)), locals_(std::move(locals)),
      fields_(std::move(fields)) {
  if (std::find(globals_.begin(), globals_.end(), "nil") == globals_.end())
    globals_.insert(globals_.begin(), "nil");
  auto add_var = [&](const std::string &n) {
    if (is_reserved_name(n))
      throw ValidationError("reserved name '" + n + "' may not be declared");
    auto id = static_cast<VarId>(var_index_.size());
    if (!var_index_.emplace(n, id).second)
      throw ValidationError("variable '" + n + "' declared twice");
  };
  for (const auto &g : globals_)
    add_var(g);
  for (const auto &l : locals_)
    add_var(l);
  for (const auto &f : fields_) {
    if (is_reserved_name(f))
      throw ValidationError("reserved name '" + f + "' may not be declared");
    if (var_index_.count(f))
      throw ValidationError("'" + f + "' declared as both variable and field");
    if (!field_index_.emplace(f, static_cast<FieldId>(field_index_.size()))
             .second)
      throw ValidationError("field '" + f + "' declared twice");
  }
  nil_ = var_index_.at("nil");
}

const std::string &Signature::var_name(VarId v) const {
  return v < globals_.size() ? globals_.at(v) : locals_.at(v - globals_.size());
}

std::optional<VarId> Signature::find_var(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end())
    return std::nullopt;
  return it->second;
}

std::optional<FieldId> Signature::find_field(std::string_view name) const {
  auto it = field_index_.find(std::string(name));
  if (it == field_index_.end())
    return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// ProgramDecl

std::size_t ProgramDecl::NodeHash::operator()(const StmtNode &n) const {
  std::size_t h = static_cast<std::size_t>(n.kind);
  for (std::size_t v : {std::size_t(n.x), std::size_t(n.y),
                        std::size_t(n.field), std::size_t(n.proc),
                        std::size_t(index_of(n.left)),
                        std::size_t(index_of(n.right))})
    h = h * 1000003u ^ v;
  return h;
}

StmtId ProgramDecl::intern(const StmtNode &n) {
  auto it = interned_.find(n);
  if (it != interned_.end())
    return it->second;
  StmtId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(n);
  interned_.emplace(n, id);
  return id;
}

ProcId ProgramDecl::declare_proc(std::string name) {
  if (auto existing = find_proc(name))
    return *existing;
  auto id = static_cast<ProcId>(procs_.size());
  proc_index_.emplace(name, id);
  procs_.push_back({std::move(name), StmtId{0}});
  return id;
}

std::optional<ProcId> ProgramDecl::find_proc(std::string_view name) const {
  auto it = proc_index_.find(std::string(name));
  if (it == proc_index_.end())
    return std::nullopt;
  return it->second;
}

void ProgramDecl::finish() {
  auto m = find_proc("main");
  if (!m)
    throw ValidationError("missing procedure 'main'");
  initial_ = *m;
  StmtNode call{StmtKind::Call};
  call.proc = initial_;
  initial_call_ = intern(call);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

using detail::Token;
using detail::TokenStream;

const std::vector<std::string_view> kProgramPuncts = {
    ";", ",", "{", "}", "[", "]", "=", "!=", ":=", ".", "+"};

bool is_keyword(std::string_view s) {
  return s == "globals" || s == "locals" || s == "fields" || s == "proc" ||
         s == "new";
}

class ProgramParser {
public:
  explicit ProgramParser(std::string_view text)
      : ts_(detail::tokenize(text, kProgramPuncts)) {}

  ProgramDecl parse() {
    auto globals = id_list("globals");
    auto locals = id_list("locals");
    auto fields = id_list("fields");
    auto sig = std::make_shared<const Signature>(globals, locals, fields);
    ProgramDecl prog(sig);
    prog_ = &prog;

    if (!ts_.is_keyword("proc"))
      ts_.fail("expected at least one 'proc'");
    while (ts_.is_keyword("proc")) {
      ts_.next();
      const Token name_tok = ts_.peek();
      auto name = ts_.expect_ident();
      check_fresh_name(name_tok, name);
      if (prog.find_proc(name))
        fail_sem(name_tok, "procedure '" + name + "' declared twice");
      ProcId p = prog.declare_proc(name);
      ts_.expect("{");
      StmtId body = stmt();
      ts_.expect("}");
      prog.define_proc(p, body);
    }
    if (!ts_.at_end())
      ts_.fail("expected 'proc' or end of input");
    for (const auto &[tok, name] : unresolved_calls_)
      if (!prog.find_proc(name))
        fail_sem(tok, "undeclared procedure '" + name + "'");
    // Calls were interned with placeholder ids; rewrite now that all
    // procedures are known.
    prog_ = nullptr;
    return relink(prog);
  }

private:
  std::vector<std::string> id_list(std::string_view kw) {
    ts_.expect_keyword(kw);
    std::vector<std::string> out;
    if (ts_.accept(";"))
      return out;
    do {
      const Token t = ts_.peek();
      auto name = ts_.expect_ident();
      if (is_keyword(name))
        fail_sem(t, "keyword '" + name + "' used as a name");
      if (is_reserved_name(name))
        fail_sem(t, "reserved name '" + name + "' may not be declared");
      out.push_back(std::move(name));
    } while (ts_.accept(","));
    ts_.expect(";");
    return out;
  }

  void check_fresh_name(const Token &t, const std::string &name) {
    if (is_keyword(name))
      fail_sem(t, "keyword '" + name + "' used as a name");
    if (is_reserved_name(name))
      fail_sem(t, "reserved name '" + name + "' may not be declared");
    if (prog_->sig().find_var(name) || prog_->sig().find_field(name))
      fail_sem(t, "procedure '" + name + "' clashes with a variable or field");
  }

  [[noreturn]] void fail_sem(const Token &t, const std::string &msg) {
    throw ValidationError(std::to_string(t.line) + ":" +
                          std::to_string(t.column) + ": " + msg);
  }

  VarId var(const Token &t) {
    if (is_reserved_name(t.text))
      fail_sem(t, "reserved name '" + t.text + "' may not be used");
    auto v = prog_->sig().find_var(t.text);
    if (!v)
      fail_sem(t, "undeclared variable '" + t.text + "'");
    return *v;
  }

  VarId target_var(const Token &t) {
    VarId v = var(t);
    if (v == prog_->sig().nil())
      fail_sem(t, "nil is constant");
    return v;
  }

  FieldId field(const Token &t) {
    auto f = prog_->sig().find_field(t.text);
    if (!f)
      fail_sem(t, "undeclared field '" + t.text + "'");
    return *f;
  }

  StmtId stmt() {
    StmtId left = seq();
    while (ts_.accept("+")) {
      StmtNode n{StmtKind::Choice};
      n.left = left;
      n.right = seq();
      left = prog_->intern(n);
    }
    return left;
  }

  StmtId seq() {
    StmtId first = basic();
    if (!ts_.accept(";"))
      return first;
    StmtNode n{StmtKind::Seq};
    n.left = first;
    n.right = seq();
    return prog_->intern(n);
  }

  StmtId basic() {
    if (ts_.accept("{")) {
      StmtId s = stmt();
      ts_.expect("}");
      return s;
    }
    if (ts_.accept("[")) {
      const Token xt = ts_.peek();
      ts_.expect_ident();
      StmtNode n{StmtKind::GuardEq};
      if (ts_.accept("!="))
        n.kind = StmtKind::GuardNeq;
      else
        ts_.expect("=");
      const Token yt = ts_.peek();
      ts_.expect_ident();
      ts_.expect("]");
      n.x = var(xt);
      n.y = var(yt);
      n.left = basic();
      return prog_->intern(n);
    }
    if (!ts_.is_ident())
      ts_.fail("expected statement");
    const Token head = ts_.next();
    if (is_keyword(head.text))
      ts_.fail_at(head, "expected statement");
    if (ts_.accept(".")) { // x.f := y
      const Token ft = ts_.peek();
      ts_.expect_ident();
      ts_.expect(":=");
      const Token yt = ts_.peek();
      ts_.expect_ident();
      StmtNode n{StmtKind::FieldWrite};
      n.x = target_var(head);
      n.field = field(ft);
      n.y = var(yt);
      return prog_->intern(n);
    }
    if (ts_.accept(":=")) {
      if (ts_.is_keyword("new")) {
        ts_.next();
        StmtNode n{StmtKind::New};
        n.x = target_var(head);
        return prog_->intern(n);
      }
      const Token yt = ts_.peek();
      ts_.expect_ident();
      if (ts_.accept(".")) { // x := y.f
        const Token ft = ts_.peek();
        ts_.expect_ident();
        StmtNode n{StmtKind::FieldRead};
        n.x = target_var(head);
        n.y = var(yt);
        n.field = field(ft);
        return prog_->intern(n);
      }
      StmtNode n{StmtKind::VarCopy};
      n.x = target_var(head);
      n.y = var(yt);
      return prog_->intern(n);
    }
    // Procedure call; resolved after all headers are seen.
    if (is_reserved_name(head.text))
      fail_sem(head, "reserved name '" + head.text + "' may not be used");
    auto it = std::find(call_names_.begin(), call_names_.end(), head.text);
    std::uint32_t slot;
    if (it == call_names_.end()) {
      slot = static_cast<std::uint32_t>(call_names_.size());
      call_names_.push_back(head.text);
      unresolved_calls_.emplace_back(head, head.text);
    } else {
      slot = static_cast<std::uint32_t>(it - call_names_.begin());
    }
    StmtNode n{StmtKind::Call};
    n.proc = slot;
    return prog_->intern(n);
  }

  // Rebuilds the program so Call nodes carry real procedure ids. Interning is
  // replayed bottom-up, which keeps StmtIds dense and deterministic.
  ProgramDecl relink(const ProgramDecl &draft) {
    ProgramDecl out(draft.sig_ptr());
    for (const auto &p : draft.procs())
      out.declare_proc(p.name);
    std::vector<std::optional<StmtId>> memo(draft.num_stmts());
    auto rebuild = [&](auto &self, StmtId s) -> StmtId {
      auto &slot = memo[index_of(s)];
      if (slot)
        return *slot;
      StmtNode n = draft.node(s);
      switch (n.kind) {
      case StmtKind::Call:
        n.proc = *out.find_proc(call_names_.at(n.proc));
        break;
      case StmtKind::GuardEq:
      case StmtKind::GuardNeq:
        n.left = self(self, n.left);
        break;
      case StmtKind::Choice:
      case StmtKind::Seq:
        n.left = self(self, n.left);
        n.right = self(self, n.right);
        break;
      default:
        break;
      }
      StmtId id = out.intern(n);
      slot = id;
      return id;
    };
    for (ProcId p = 0; p < draft.procs().size(); ++p)
      out.define_proc(p, rebuild(rebuild, draft.body(p)));
    out.finish();
    return out;
  }

  TokenStream ts_;
  ProgramDecl *prog_ = nullptr;
  std::vector<std::string> call_names_;
  std::vector<std::pair<Token, std::string>> unresolved_calls_;
};

} // namespace

ProgramDecl parse_program(std::string_view text) {
  return ProgramParser(text).parse();
}

// ---------------------------------------------------------------------------
// Closure

namespace {

void collect(const ProgramDecl &prog, StmtId s, std::set<StmtId> &out) {
  const StmtNode &n = prog.node(s);
  switch (n.kind) {
  case StmtKind::Seq:
    collect(prog, n.left, out);
    collect(prog, n.right, out);
    return;
  case StmtKind::Choice:
    out.insert(s);
    collect(prog, n.left, out);
    collect(prog, n.right, out);
    return;
  case StmtKind::GuardEq:
  case StmtKind::GuardNeq:
    out.insert(s);
    collect(prog, n.left, out);
    return;
  default:
    out.insert(s);
    return;
  }
}

} // namespace

std::set<StmtId> closure(const ProgramDecl &prog, StmtId s) {
  std::set<StmtId> out;
  collect(prog, s, out);
  return out;
}

std::set<StmtId> closure(const ProgramDecl &prog) {
  std::set<StmtId> out;
  for (const auto &p : prog.procs())
    collect(prog, p.body, out);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// 0 = choice, 1 = seq, 2 = basic
int precedence(StmtKind k) {
  switch (k) {
  case StmtKind::Choice:
    return 0;
  case StmtKind::Seq:
    return 1;
  default:
    return 2;
  }
}

void print(const ProgramDecl &prog, StmtId s, int min_prec, std::ostream &os) {
  const StmtNode &n = prog.node(s);
  const Signature &sig = prog.sig();
  if (precedence(n.kind) < min_prec) {
    os << "{ ";
    print(prog, s, 0, os);
    os << " }";
    return;
  }
  switch (n.kind) {
  case StmtKind::FieldWrite:
    os << sig.var_name(n.x) << "." << sig.field_name(n.field)
       << " := " << sig.var_name(n.y);
    break;
  case StmtKind::FieldRead:
    os << sig.var_name(n.x) << " := " << sig.var_name(n.y) << "."
       << sig.field_name(n.field);
    break;
  case StmtKind::New:
    os << sig.var_name(n.x) << " := new";
    break;
  case StmtKind::VarCopy:
    os << sig.var_name(n.x) << " := " << sig.var_name(n.y);
    break;
  case StmtKind::GuardEq:
  case StmtKind::GuardNeq:
    os << "[" << sig.var_name(n.x)
       << (n.kind == StmtKind::GuardEq ? " = " : " != ") << sig.var_name(n.y)
       << "] ";
    print(prog, n.left, 2, os);
    break;
  case StmtKind::Choice:
    print(prog, n.left, 0, os);
    os << " + ";
    print(prog, n.right, 1, os);
    break;
  case StmtKind::Seq:
    print(prog, n.left, 2, os);
    os << "; ";
    print(prog, n.right, 1, os);
    break;
  case StmtKind::Call:
    os << prog.procs().at(n.proc).name;
    break;
  }
}

std::string join(const std::vector<std::string> &xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += (i ? ", " : "") + xs[i];
  return out;
}

} // namespace

std::string to_string(const ProgramDecl &prog, StmtId s) {
  std::ostringstream os;
  print(prog, s, 0, os);
  return os.str();
}

std::string to_string(const ProgramDecl &prog) {
  std::ostringstream os;
  const Signature &sig = prog.sig();
  os << "globals " << join(sig.globals()) << ";\n";
  os << "locals " << join(sig.locals()) << ";\n";
  os << "fields " << join(sig.fields()) << ";\n";
  for (const auto &p : prog.procs())
    os << "proc " << p.name << " { " << to_string(prog, p.body) << " }\n";
  return os.str();
}

} // namespace shylock
