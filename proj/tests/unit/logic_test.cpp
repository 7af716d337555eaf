#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "random.hpp"
#include "shylock/logic.hpp"

namespace shylock {
namespace {

using testing::list_fixture;
using testing::list_sig;

const Identity kBot = Identity::bot();
Identity id(std::uint32_t n) { return Identity(n); }

const char *kListExpr = "first . next* . last + ~first";

TEST(ParseFormula, Examples) {
  const Signature &sig = *list_sig();
  EXPECT_EQ(parse_formula("G { eps }", sig).key(),
            Formula::always(Formula::atom(Rite::eps())).key());

  Rite list = Rite::alt(
      Rite::cat(Rite::cat(Rite::test("first"), Rite::star(Rite::act("next"))),
                Rite::test("last")),
      Rite::neg_test("first"));
  EXPECT_EQ(parse_formula(std::string("F { ") + kListExpr + " }", sig).key(),
            Formula::eventually(Formula::atom(list)).key());

  auto sig2 = std::make_shared<const Signature>(
      std::vector<std::string>{"nil", "x", "y"}, std::vector<std::string>{},
      std::vector<std::string>{"f"});
  EXPECT_EQ(parse_formula("{x} U X {y.f}", *sig2).key(),
            Formula::until(Formula::atom(Rite::test("x")),
                           Formula::next(Formula::atom(
                               Rite::cat(Rite::test("y"), Rite::act("f")))))
                .key());
}

TEST(ParseFormula, Errors) {
  const Signature &sig = *list_sig();
  EXPECT_ANY_THROW(parse_formula("G { bogus }", sig));
  EXPECT_ANY_THROW(parse_formula("G { first", sig));
  EXPECT_ANY_THROW(parse_formula("{ first } &", sig));
}

TEST(ParseFormula, PrintReparse) {
  testing::Rng rng(61);
  const Signature &sig = *list_sig();
  for (int i = 0; i < 200; ++i) {
    std::vector<Rite> ats{testing::random_rite(rng, sig, 2),
                          testing::random_rite(rng, sig, 2)};
    Formula f = testing::random_formula(rng, ats, 6);
    EXPECT_EQ(parse_formula(f.to_string(), sig).key(), f.key()) << f.to_string();
  }
}

TEST(RiteTargets, Examples) {
  EXPECT_EQ(rite_targets(testing::h1(), Rite::eps(), id(0)), IdentitySet{id(0)});
  EXPECT_EQ(rite_targets(testing::h1(),
                         Rite::cat(Rite::test("l"), Rite::act("f")), id(0)),
            IdentitySet{id(1)});
  EXPECT_EQ(rite_targets(list_fixture(), Rite::star(Rite::act("next")), id(0)),
            (IdentitySet{id(0), id(1), id(2), kBot}));
}

TEST(HeapSat, Examples) {
  const Signature &sig = *list_sig();
  Rite list = parse_rite(kListExpr, sig);
  EXPECT_TRUE(heap_sat(list_fixture(), Rite::eps()));
  EXPECT_TRUE(heap_sat(list_fixture(), list));
  EXPECT_FALSE(heap_sat(list_fixture(true), list));
  EXPECT_EQ(testing::naive_sat(list_fixture(), list), true);
  EXPECT_EQ(testing::naive_sat(list_fixture(true), list), false);
}

TEST(RiteTargets, MatchesNaiveRelation) {
  testing::Rng rng(62);
  auto sig = testing::sec3_sig();
  for (int i = 0; i < 300; ++i) {
    Heap h = testing::random_heap(rng, sig, 6, i % 2 == 0);
    Rite r = testing::random_rite(rng, *sig, 3);
    for (std::uint32_t n = 0; n <= 6; ++n) {
      Identity src = n == 6 ? kBot : id(n);
      EXPECT_EQ(rite_targets(h, r, src), testing::naive_targets(h, r, src))
          << r.to_string() << "\n" << dump(h);
    }
    EXPECT_EQ(heap_sat(h, r), testing::naive_sat(h, r));
  }
}

TEST(RiteTargets, StarIsClosure) {
  testing::Rng rng(63);
  auto sig = list_sig();
  for (int i = 0; i < 200; ++i) {
    Heap h = testing::random_heap(rng, sig, 6);
    Rite r = testing::random_rite(rng, *sig, 2);
    for (std::uint32_t n = 0; n < 6; ++n) {
      // Iterate one-step images until nothing new appears.
      IdentitySet closure{id(n)}, frontier{id(n)};
      while (!frontier.empty()) {
        IdentitySet next;
        for (auto m : frontier)
          for (auto t : rite_targets(h, r, m))
            if (closure.insert(t).second)
              next.insert(t);
        frontier = std::move(next);
      }
      EXPECT_EQ(rite_targets(h, Rite::star(r), id(n)), closure);
    }
  }
}

TEST(RiteTargets, AltCatAlgebra) {
  testing::Rng rng(64);
  auto sig = testing::sec3_sig();
  for (int i = 0; i < 200; ++i) {
    Heap h = testing::random_heap(rng, sig, 5, true);
    Rite a = testing::random_rite(rng, *sig, 2);
    Rite b = testing::random_rite(rng, *sig, 2);
    for (std::uint32_t n = 0; n < 5; ++n) {
      IdentitySet ta = rite_targets(h, a, id(n));
      IdentitySet tb = rite_targets(h, b, id(n));
      IdentitySet u = ta;
      u.insert(tb.begin(), tb.end());
      EXPECT_EQ(rite_targets(h, Rite::alt(a, b), id(n)), u);
      IdentitySet comp;
      for (auto m : ta)
        for (auto t : rite_targets(h, b, m))
          comp.insert(t);
      EXPECT_EQ(rite_targets(h, Rite::cat(a, b), id(n)), comp);
    }
  }
}

TEST(HeapSat, InvariantUnderNormalizeAndRenaming) {
  testing::Rng rng(65);
  auto sig = testing::sec3_sig();
  for (int i = 0; i < 300; ++i) {
    Heap h = testing::random_heap(rng, sig, 5, i % 2 == 0);
    Rite r = testing::random_rite(rng, *sig, 3);
    Renaming rho;
    rho.add_swap(static_cast<std::uint32_t>(rng() % 5), 5 + rng() % 4);
    bool s = heap_sat(h, r);
    EXPECT_EQ(heap_sat(normalize(h), r), s);
    EXPECT_EQ(heap_sat(apply_renaming(rho, h), r), s);
  }
}

TEST(Atoms, SortedUnique) {
  const Signature &sig = *list_sig();
  Formula f = parse_formula("G ({first} & X {first} | {last} U {first})", sig);
  auto ats = atoms(f);
  ASSERT_EQ(ats.size(), 2u);
  EXPECT_LT(ats[0].key(), ats[1].key());
  EXPECT_TRUE(atoms(Formula::truth()).empty());
}

Letter bit(std::size_t i) { return Letter{1} << i; }

TEST(WordSat, Examples) {
  std::vector<Rite> al{Rite::eps()};
  Formula r = Formula::atom(Rite::eps());
  LassoWord w{{0}, {bit(0)}};
  EXPECT_FALSE(word_sat(w, r, al));
  EXPECT_TRUE(word_sat(w, Formula::next(r), al));
  EXPECT_TRUE(word_sat(w, Formula::eventually(r), al));
  EXPECT_FALSE(word_sat(w, Formula::always(r), al));
  EXPECT_TRUE(word_sat(w, Formula::eventually(Formula::always(r)), al));

  LassoWord alternating{{}, {0, bit(0)}};
  EXPECT_TRUE(word_sat(alternating,
                       Formula::always(Formula::eventually(r)), al));
  EXPECT_FALSE(word_sat(alternating,
                        Formula::eventually(Formula::always(r)), al));
  EXPECT_TRUE(word_sat(alternating,
                       Formula::until(Formula::truth(), Formula::negation(r)),
                       al));
}

TEST(WordSat, RotationInvariant) {
  // stem·loop^ω equals (stem·loop_0)·(loop_1..loop_0)^ω.
  testing::Rng rng(66);
  for (int i = 0; i < 200; ++i) {
    std::vector<Rite> ats{Rite::test("first"), Rite::test("last"),
                          Rite::act("next")};
    Formula f = testing::random_formula(rng, ats, 6);
    LassoWord w = testing::random_lasso(rng, 3, 4, 4);
    LassoWord u = w;
    u.stem.push_back(w.loop.front());
    std::rotate(u.loop.begin(), u.loop.begin() + 1, u.loop.end());
    EXPECT_EQ(word_sat(w, f, ats), word_sat(u, f, ats)) << f.to_string();
    EXPECT_NE(word_sat(w, f, ats), word_sat(w, Formula::negation(f), ats));
  }
}

} // namespace
} // namespace shylock
