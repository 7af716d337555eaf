#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "random.hpp"
#include "shylock/semantics.hpp"

namespace shylock {
namespace {

using testing::h1;
using testing::h2;
using testing::h3;
using testing::h4;
using testing::program;

const Identity kBot = Identity::bot();
Identity id(std::uint32_t n) { return Identity(n); }

// The sec3 program: main calls p, which allocates into g.
std::shared_ptr<const ProgramDecl> sec3_program() {
  return testing::load_corpus("sec3");
}

TEST(ConcreteStep, NewUsesCounter) {
  auto p = sec3_program();
  Config c{h1(), {testing::find_stmt(*p, "g := new")}, 7u};
  auto next = concrete_step(c, *p);
  ASSERT_EQ(next.steps.size(), 1u);
  const Config &d = next.steps[0].next;
  EXPECT_EQ(d.current.get(d.current.resolve("g")), id(7));
  EXPECT_EQ(d.current.field(0, id(7)), kBot);
  EXPECT_EQ(d.current.field(0, id(0)), id(1));
  EXPECT_EQ(d.counter, 8u);
  EXPECT_TRUE(d.stack.empty());
}

TEST(ConcreteStep, SeqPushesBoth) {
  auto p = program("globals nil, g; locals l; fields f; proc main { g := new; "
                   "l := g }");
  Config c = initial_config(*p, Semantics::Concrete);
  auto call = concrete_step(c, *p);
  ASSERT_EQ(call.steps.size(), 1u);
  auto seq = concrete_step(call.steps[0].next, *p);
  ASSERT_EQ(seq.steps.size(), 1u);
  EXPECT_EQ(seq.steps[0].rule, Rule::Seq);
  const auto &st = seq.steps[0].next.stack;
  ASSERT_GE(st.size(), 2u);
  EXPECT_EQ(to_string(*p, std::get<StmtId>(st[st.size() - 1])), "g := new");
  EXPECT_EQ(to_string(*p, std::get<StmtId>(st[st.size() - 2])), "l := g");
}

TEST(ConcreteStep, GuardDisabled) {
  auto p = program("globals nil, g; locals l; fields f; proc main { [g != nil] "
                   "l := g }");
  Config c{Heap(p->sig_ptr()), {testing::find_stmt(*p, "[g != nil] l := g")}, 0u};
  auto next = concrete_step(c, *p);
  EXPECT_TRUE(next.steps.empty());
  EXPECT_EQ(next.fault, Fault::GuardDisabled);
}

TEST(ConcreteStep, NullWrite) {
  auto p = program("globals nil, g; locals l; fields f; proc main { g.f := l }");
  Config c{Heap(p->sig_ptr()), {testing::find_stmt(*p, "g.f := l")}, 0u};
  auto next = concrete_step(c, *p);
  EXPECT_TRUE(next.steps.empty());
  EXPECT_EQ(next.fault, Fault::NullWrite);
}

TEST(ConcreteStep, EmptyStackTerminates) {
  auto p = sec3_program();
  Config c{h1(), {}, 0u};
  EXPECT_EQ(concrete_step(c, *p).fault, Fault::Terminated);
}

TEST(FreshMin, Examples) {
  EXPECT_EQ(fresh_min(h2()), id(0));
  EXPECT_EQ(fresh_min(h3()), id(2));
  EXPECT_EQ(fresh_min(Heap(testing::sec3_sig())), id(0));
}

TEST(CallHeap, Examples) {
  EXPECT_EQ(dump(call_heap(h1())), dump(h2()));

  Heap h(testing::sec3_sig());
  h.set(h.resolve("g"), id(3));
  EXPECT_EQ(dump(call_heap(h)), "var g = 3\nvar l = bot\nvar nil = bot\nfield f: 3 -> bot\n");

  // Cut points {2, 5}: l reaches 2 through a purely local node.
  auto sig = std::make_shared<const Signature>(
      std::vector<std::string>{"nil", "a", "b"},
      std::vector<std::string>{"l", "m"}, std::vector<std::string>{"f"});
  Heap k(sig);
  k.set(k.resolve("a"), id(2));
  k.set(k.resolve("b"), id(5));
  k.set(k.resolve("l"), id(0));
  k.set(k.resolve("m"), id(5));
  k.set_field(0, id(0), id(2));
  Heap c = call_heap(k);
  EXPECT_EQ(c.get(c.resolve("c0")), id(2));
  EXPECT_EQ(c.get(c.resolve("c1")), id(5));
  EXPECT_EQ(c.get(c.resolve("l")), kBot);
}

TEST(ReturnCombine, Examples) {
  EXPECT_EQ(dump(return_combine(h3(), h1())), dump(h4()));

  Heap none = return_combine(h2(), h1());
  EXPECT_EQ(dump(none), dump(h1()));

  Heap two(testing::sec3_sig());
  two.set(two.resolve("g"), id(2));
  two.set(two.resolve("c0"), id(1));
  EXPECT_EQ(dump(return_combine(normalize(two), h1())), dump(h4()));
}

TEST(AbstractStep, WorkedExample) {
  auto p = sec3_program();
  Config c{h2(), {Frame{h1()}, Frame{testing::find_stmt(*p, "g := new")}}, {}};
  auto s1 = abstract_step(c, *p);
  ASSERT_EQ(s1.steps.size(), 1u);
  EXPECT_EQ(dump(s1.steps[0].next.current), dump(h3()));
  auto s2 = abstract_step(s1.steps[0].next, *p);
  ASSERT_EQ(s2.steps.size(), 1u);
  EXPECT_EQ(s2.steps[0].rule, Rule::Return);
  EXPECT_EQ(dump(s2.steps[0].next.current), dump(h4()));
  EXPECT_TRUE(s2.steps[0].next.stack.empty());
}

TEST(AbstractStep, ChoiceHasTwoSuccessors) {
  auto p = program("globals nil, g; locals l; fields f; proc main { g := new + "
                   "l := g }");
  Config c{Heap(p->sig_ptr()), {testing::find_stmt(*p, "g := new + l := g")}, {}};
  auto next = abstract_step(c, *p);
  ASSERT_EQ(next.steps.size(), 2u);
  EXPECT_EQ(next.steps[0].rule, Rule::ChoiceLeft);
  EXPECT_EQ(next.steps[1].rule, Rule::ChoiceRight);
}

TEST(IsProper, Examples) {
  EXPECT_TRUE(is_proper(std::vector<Frame>{h1()}));
  EXPECT_FALSE(is_proper(std::vector<Frame>{h1(), h1()}));
  auto p = sec3_program();
  EXPECT_TRUE(is_proper(std::vector<Frame>{h1(), testing::find_stmt(*p, "g := new")}));
}

TEST(CpIdentification, Examples) {
  EXPECT_TRUE(cp_identification(h2(), h1(), h2(), h1()));

  Renaming r;
  r.add_swap(1, 9);
  EXPECT_TRUE(cp_identification(h2(), h1(), apply_renaming(r, h2()),
                                apply_renaming(r, h1())));

  Heap dropped = h2();
  dropped.clear_cuts();
  EXPECT_FALSE(cp_identification(dropped, h1(), h2(), h1()));

  EXPECT_THROW(cp_identification(h2(), h1(), h2(), h4()), std::invalid_argument);
}

// Random walks under the abstract semantics on generated programs.
class AbstractRuns : public ::testing::Test {
protected:
  template <typename Fn> void walk(std::uint64_t seed, Fn &&check) {
    testing::Rng rng(seed);
    for (int prog = 0; prog < 40; ++prog) {
      auto p = program(testing::random_program(rng));
      for (int trial = 0; trial < 5; ++trial) {
        Config c = initial_config(*p, Semantics::Abstract);
        for (int i = 0; i < 60; ++i) {
          auto next = abstract_step(c, *p);
          if (next.steps.empty())
            break;
          check(*p, c, next);
          c = next.steps[rng() % next.steps.size()].next;
        }
      }
    }
  }
};

TEST_F(AbstractRuns, Deterministic) {
  walk(31, [](const ProgramDecl &p, const Config &c, const Successors &next) {
    auto again = abstract_step(c, p);
    ASSERT_EQ(again.steps.size(), next.steps.size());
    for (std::size_t i = 0; i < next.steps.size(); ++i) {
      EXPECT_EQ(again.steps[i].rule, next.steps[i].rule);
      EXPECT_EQ(again.steps[i].next.current, next.steps[i].next.current);
      EXPECT_EQ(again.steps[i].next.stack, next.steps[i].next.stack);
    }
  });
}

TEST_F(AbstractRuns, NormalizedAndNoCounter) {
  walk(32, [](const ProgramDecl &, const Config &, const Successors &next) {
    for (const auto &s : next.steps) {
      EXPECT_TRUE(is_normalized(s.next.current));
      EXPECT_FALSE(s.next.counter);
    }
  });
}

TEST_F(AbstractRuns, NewPostcondition) {
  walk(33, [](const ProgramDecl &p, const Config &c, const Successors &next) {
    for (const auto &s : next.steps) {
      if (s.rule != Rule::New)
        continue;
      const StmtNode &n = p.node(std::get<StmtId>(c.stack.back()));
      Identity fresh = s.next.current.var(n.x);
      EXPECT_FALSE(fresh.is_bot());
      EXPECT_FALSE(reachable_all(c.current).count(fresh));
      for (FieldId f = 0; f < p.sig().num_fields(); ++f)
        EXPECT_EQ(s.next.current.field(f, fresh), kBot);
    }
  });
}

TEST_F(AbstractRuns, IdentityCeiling) {
  testing::Rng rng(34);
  for (int prog = 0; prog < 40; ++prog) {
    auto p = program(testing::random_program(rng));
    for (int trial = 0; trial < 5; ++trial) {
      Config c = initial_config(*p, Semantics::Abstract);
      std::size_t k = 0;
      std::uint32_t top = 0;
      auto note = [&](const Heap &h) {
        k = std::max(k, visible_size(h));
        for (auto n : reachable_all(h))
          if (!n.is_bot())
            top = std::max(top, n.nat());
      };
      note(c.current);
      for (int i = 0; i < 60; ++i) {
        auto next = abstract_step(c, *p);
        if (next.steps.empty())
          break;
        c = next.steps[rng() % next.steps.size()].next;
        note(c.current);
        if (top > 0) {
          EXPECT_LE(top, 2 * k) << to_string(*p);
        }
      }
    }
  }
}

TEST(ConcreteRuns, StayProper) {
  testing::Rng rng(35);
  for (int prog = 0; prog < 40; ++prog) {
    auto p = program(testing::random_program(rng));
    for (int trial = 0; trial < 5; ++trial) {
      Config c = initial_config(*p, Semantics::Concrete);
      for (int i = 0; i < 60; ++i) {
        ASSERT_TRUE(is_proper(c)) << to_string(*p);
        auto next = concrete_step(c, *p);
        if (next.steps.empty())
          break;
        c = next.steps[rng() % next.steps.size()].next;
        for (auto n : reachable_all(c.current))
          if (!n.is_bot()) {
            EXPECT_LT(n.nat(), *c.counter);
          }
      }
    }
  }
}

} // namespace
} // namespace shylock
