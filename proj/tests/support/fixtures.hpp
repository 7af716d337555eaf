#pragma once

// Hand-built heaps and corpus access shared by the test binaries.

#include <memory>
#include <string>
#include <vector>

#include "shylock/heap.hpp"
#include "shylock/syntax.hpp"

namespace shylock::testing {

/// globals nil, g; locals l; fields f.
std::shared_ptr<const Signature> sec3_sig();

/// l ↦ 0, g ↦ 1, f: 0 ↦ 1.
Heap h1();
/// The callee heap for H1: g ↦ 1, c0 ↦ 1.
Heap h2();
/// H2 after g := new: g ↦ 0, c0 ↦ 1.
Heap h3();
/// The caller heap after returning: l ↦ 0, g ↦ 2, f: 0 ↦ 1.
Heap h4();

/// globals nil, first, last; no locals; fields next.
std::shared_ptr<const Signature> list_sig();
/// first ↦ 0, last ↦ 2, next: 0 ↦ 1, 1 ↦ 2. With `cut`, 1 ↦ ⊥ instead.
Heap list_fixture(bool cut = false);

std::string corpus_path(const std::string &name);
std::shared_ptr<const ProgramDecl> load_corpus(const std::string &name);
/// Base names of every corpus program, sorted.
std::vector<std::string> corpus_names();

std::shared_ptr<const ProgramDecl> program(const std::string &text);

/// The statement whose printed form is `text`; throws if there is none.
StmtId find_stmt(const ProgramDecl &p, const std::string &text);

} // namespace shylock::testing
