#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "random.hpp"
#include "shylock/checker.hpp"
#include "shylock/pds.hpp"
#include "shylock/poststar.hpp"

namespace shylock {
namespace {

using testing::find_stmt;
using testing::load_corpus;
using testing::program;

struct Explored {
  std::shared_ptr<Pds> pds;
  std::shared_ptr<PlainSystem> sys;
  std::unique_ptr<PostStar> post;
};

Explored explore(std::shared_ptr<const ProgramDecl> p, std::size_t k) {
  Explored e;
  e.pds = std::make_shared<Pds>(std::move(p), k);
  e.sys = std::make_shared<PlainSystem>(e.pds);
  e.post = std::make_unique<PostStar>(*e.sys, 100000);
  e.post->saturate({e.sys->initial_config()});
  return e;
}

TEST(StackSym, EncodeRoundTrip) {
  for (auto s : {StackSym::z(), StackSym::stmt(StmtId{17}),
                 StackSym::saved(123456)})
    EXPECT_EQ(StackSym::decode(s.encode()), s);
}

TEST(Successors, LiftedNew) {
  auto p = load_corpus("sec3");
  Pds pds(p, 2);
  ControlId h2 = pds.controls().intern(testing::h2());
  ControlId h3 = pds.controls().intern(testing::h3());
  const auto &moves =
      pds.successors({h2, StackSym::stmt(find_stmt(*p, "g := new"))});
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].to, h3);
  EXPECT_TRUE(moves[0].word.empty());
  EXPECT_EQ(moves[0].label, "new");
}

TEST(Successors, SeqPushesTwo) {
  auto p = load_corpus("list3");
  Pds pds(p, 3);
  ControlId c = pds.initial_control();
  StmtId first = find_stmt(*p, "first := new");
  StmtId rest = find_stmt(*p, "t := new; first.next := t; last := new; t.next := last");
  StmtId seq = find_stmt(*p, "first := new; t := new; first.next := t; last := "
                             "new; t.next := last");
  const auto &moves = pds.successors({c, StackSym::stmt(seq)});
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].to, c);
  EXPECT_EQ(moves[0].word,
            (std::vector<StackSym>{StackSym::stmt(first), StackSym::stmt(rest)}));
}

TEST(Successors, OutOfBound) {
  auto p = load_corpus("alloc_global");
  Pds pds(p, 0);
  ControlId c = pds.initial_control();
  StackSym sym = StackSym::stmt(find_stmt(*p, "x := new"));
  const auto &moves = pds.successors({c, sym});
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0].to, kTop);
  EXPECT_EQ(moves[0].word, std::vector<StackSym>{sym});
  EXPECT_EQ(moves[0].label, "bound");

  Pds roomy(p, 1);
  EXPECT_NE(roomy.successors({roomy.initial_control(), sym}).at(0).to, kTop);
}

TEST(Successors, TopStutterStuck) {
  auto p = load_corpus("file_nil");
  Pds pds(p, 2);
  StackSym sym = StackSym::stmt(find_stmt(*p, "[z != nil] z := nil"));
  const auto &top = pds.successors({kTop, sym});
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].to, kTop);
  EXPECT_EQ(top[0].word, std::vector<StackSym>{sym});

  ControlId c = pds.initial_control();
  const auto &z = pds.successors({c, StackSym::z()});
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0].to, c);
  EXPECT_EQ(z[0].word, std::vector<StackSym>{StackSym::z()});
  EXPECT_EQ(z[0].label, "stutter");

  // z is ⊥ initially, so the guard is disabled.
  const auto &stuck = pds.successors({c, sym});
  ASSERT_EQ(stuck.size(), 1u);
  EXPECT_EQ(stuck[0].to, c);
  EXPECT_EQ(stuck[0].word, std::vector<StackSym>{StackSym::z()});
  EXPECT_EQ(stuck[0].label, "stuck");
}

TEST(Successors, CacheMatchesRecompute) {
  auto e = explore(load_corpus("file"), 2);
  for (auto h : e.post->heads()) {
    Head head{h.control, StackSym::decode(h.top)};
    EXPECT_EQ(e.pds->successors(head), e.pds->compute_successors(head));
  }
}

// Closure members, plus every sequence occurring in a body: the Seq and
// Call rules push sequences whole.
std::set<StmtId> stack_alphabet(const ProgramDecl &p) {
  std::set<StmtId> out = closure(p);
  out.insert(p.initial_call());
  std::vector<StmtId> work;
  for (const auto &proc : p.procs())
    work.push_back(proc.body);
  while (!work.empty()) {
    StmtId s = work.back();
    work.pop_back();
    const StmtNode &n = p.node(s);
    switch (n.kind) {
    case StmtKind::Seq:
      out.insert(s);
      [[fallthrough]];
    case StmtKind::Choice:
      work.push_back(n.left);
      work.push_back(n.right);
      break;
    case StmtKind::GuardEq:
    case StmtKind::GuardNeq:
      work.push_back(n.left);
      break;
    default:
      break;
    }
  }
  return out;
}

void check_rules(std::shared_ptr<const ProgramDecl> p, std::size_t k,
                 const std::string &what) {
  auto e = explore(p, k);
  auto cl = stack_alphabet(*p);
  for (auto h : e.post->heads()) {
    StackSym top = StackSym::decode(h.top);
    if (top.kind == StackSym::Kind::Stmt) {
      EXPECT_TRUE(cl.count(StmtId{top.value})) << what;
    }
    for (const auto &m : e.pds->successors({h.control, top})) {
      EXPECT_LE(m.word.size(), 2u) << what;
      for (auto s : m.word)
        if (s.kind == StackSym::Kind::Stmt) {
          EXPECT_TRUE(cl.count(StmtId{s.value})) << what;
        }
    }
  }
  EXPECT_EQ(e.post->eps_into_final(), 0u) << what;
}

TEST(PdsInvariants, Corpus) {
  for (const auto &name : testing::corpus_names())
    for (std::size_t k = 0; k <= 3; ++k)
      check_rules(load_corpus(name), k, name + " k=" + std::to_string(k));
}

TEST(PdsInvariants, RandomPrograms) {
  testing::Rng rng(51);
  for (int i = 0; i < 25; ++i) {
    std::string text = testing::random_program(rng);
    check_rules(program(text), 2, text);
  }
}

TEST(Boundedness, RecursiveAllocIsOneBounded) {
  auto e = explore(load_corpus("rec_alloc"), 1);
  auto controls = e.post->controls();
  EXPECT_LE(controls.size(), 4u);
  for (auto c : controls) {
    ASSERT_NE(c, kTop);
    EXPECT_LE(visible_size(e.pds->controls().heap(c)), 1u);
  }
}

TEST(ControlTag, Format) {
  auto p = load_corpus("rec_alloc");
  Pds pds(p, 1);
  EXPECT_EQ(pds.control_tag(kTop), "top");
  std::string tag = pds.control_tag(pds.initial_control());
  EXPECT_EQ(tag.size(), 9u);
  EXPECT_EQ(tag[0], 'h');
  EXPECT_EQ(pds.symbol_text(StackSym::z()), "Z");
}

} // namespace
} // namespace shylock
