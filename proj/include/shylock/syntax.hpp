#pragma once

// Abstract syntax of Shylock programs, the `.shy` parser, and the statement
// closure used as the pushdown stack alphabet.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace shylock {

using VarId = std::uint32_t;
using FieldId = std::uint32_t;
using ProcId = std::uint32_t;

enum class StmtId : std::uint32_t {};

inline std::uint32_t index_of(StmtId s) { return static_cast<std::uint32_t>(s); }

/// Raised for lexical and syntactic errors; carries a 1-based position.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &msg, unsigned line, unsigned column);
  unsigned line() const { return line_; }
  unsigned column() const { return column_; }

private:
  unsigned line_;
  unsigned column_;
};

/// Raised when a syntactically valid program breaks a declaration rule.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Declared names of a program. Variables are numbered globals first, then
/// locals; `nil` is always a global.
class Signature {
public:
  Signature(std::vector<std::string> globals, std::vector<std::string> locals,
            std::vector<std::string> fields);

  std::size_t num_globals() const { return globals_.size(); }
  std::size_t num_locals() const { return locals_.size(); }
  std::size_t num_vars() const { return globals_.size() + locals_.size(); }
  std::size_t num_fields() const { return fields_.size(); }

  bool is_global(VarId v) const { return v < globals_.size(); }
  bool is_local(VarId v) const {
    return v >= globals_.size() && v < num_vars();
  }
  VarId nil() const { return nil_; }

  const std::string &var_name(VarId v) const;
  const std::string &field_name(FieldId f) const { return fields_.at(f); }
  const std::vector<std::string> &globals() const { return globals_; }
  const std::vector<std::string> &locals() const { return locals_; }
  const std::vector<std::string> &fields() const { return fields_; }

  std::optional<VarId> find_var(std::string_view name) const;
  std::optional<FieldId> find_field(std::string_view name) const;

private:
  std::vector<std::string> globals_;
  std::vector<std::string> locals_;
  std::vector<std::string> fields_;
  std::unordered_map<std::string, VarId> var_index_;
  std::unordered_map<std::string, FieldId> field_index_;
  VarId nil_ = 0;
};

/// `c0, c1, ...` and `oc` are reserved for the semantics.
bool is_reserved_name(std::string_view name);

/// Parses `c<k>`; returns k.
std::optional<std::uint32_t> cut_var_index(std::string_view name);
std::string cut_var_name(std::uint32_t index);

enum class StmtKind : std::uint8_t {
  FieldWrite, // x.f := y
  FieldRead,  // x := y.f
  New,        // x := new
  VarCopy,    // x := y
  GuardEq,    // [x = y] body
  GuardNeq,   // [x != y] body
  Choice,     // left + right
  Seq,        // first ; second
  Call,       // p
};

/// Statements are hash-consed inside a ProgramDecl, so two structurally equal
/// statements always share one StmtId.
struct StmtNode {
  StmtKind kind;
  VarId x = 0;
  VarId y = 0;
  FieldId field = 0;
  ProcId proc = 0;
  StmtId left{0}; // guard body, choice left, seq first
  StmtId right{0}; // choice right, seq second

  bool operator==(const StmtNode &) const = default;
};

struct ProcDecl {
  std::string name;
  StmtId body;
};

class ProgramDecl {
public:
  ProgramDecl(std::shared_ptr<const Signature> sig)
      : sig_(std::move(sig)) {}

  const Signature &sig() const { return *sig_; }
  const std::shared_ptr<const Signature> &sig_ptr() const { return sig_; }

  const StmtNode &node(StmtId s) const { return nodes_.at(index_of(s)); }
  std::size_t num_stmts() const { return nodes_.size(); }

  const std::vector<ProcDecl> &procs() const { return procs_; }
  std::optional<ProcId> find_proc(std::string_view name) const;
  ProcId initial() const { return initial_; }
  StmtId body(ProcId p) const { return procs_.at(p).body; }

  /// The `main` call statement that heads the initial stack.
  StmtId initial_call() const { return initial_call_; }

  // Construction API used by the parser.
  StmtId intern(const StmtNode &n);
  ProcId declare_proc(std::string name);
  void define_proc(ProcId p, StmtId body) { procs_.at(p).body = body; }
  void finish(); // validates and fixes `main`

private:
  struct NodeHash {
    std::size_t operator()(const StmtNode &n) const;
  };

  std::shared_ptr<const Signature> sig_;
  std::vector<StmtNode> nodes_;
  std::unordered_map<StmtNode, StmtId, NodeHash> interned_;
  std::vector<ProcDecl> procs_;
  std::unordered_map<std::string, ProcId> proc_index_;
  ProcId initial_ = 0;
  StmtId initial_call_{0};
};

ProgramDecl parse_program(std::string_view text);

/// Union of cl(B) over all procedure bodies.
std::set<StmtId> closure(const ProgramDecl &prog);

/// cl of a single statement.
std::set<StmtId> closure(const ProgramDecl &prog, StmtId s);

std::string to_string(const ProgramDecl &prog, StmtId s);

/// Canonical concrete syntax of the whole program; re-parses to the same AST.
std::string to_string(const ProgramDecl &prog);

} // namespace shylock
