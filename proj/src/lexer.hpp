#pragma once

// Small shared tokenizer for the program and formula grammars.

#include <string>
#include <string_view>
#include <vector>

#include "shylock/syntax.hpp"

namespace shylock::detail {

enum class TokKind { Ident, Punct, End };

struct Token {
  TokKind kind;
  std::string text;
  unsigned line;
  unsigned column;
};

/// Splits `text` into identifiers ([A-Za-z_][A-Za-z0-9_]*) and the given
/// punctuators (longest match first). `//` starts a line comment.
std::vector<Token> tokenize(std::string_view text,
                            const std::vector<std::string_view> &puncts);

class TokenStream {
public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token &peek(std::size_t ahead = 0) const;
  const Token &next();
  bool at_end() const { return peek().kind == TokKind::End; }

  bool is(std::string_view punct, std::size_t ahead = 0) const;
  bool is_ident(std::size_t ahead = 0) const {
    return peek(ahead).kind == TokKind::Ident;
  }
  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const {
    return is_ident(ahead) && peek(ahead).text == kw;
  }
  bool accept(std::string_view punct);
  void expect(std::string_view punct);
  void expect_keyword(std::string_view kw);
  std::string expect_ident();

  [[noreturn]] void fail(const std::string &msg) const;
  [[noreturn]] void fail_at(const Token &t, const std::string &msg) const;

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace shylock::detail
