#include <gtest/gtest.h>

#include <random>

#include "lmw/text.hpp"

using namespace lmw;

namespace {

FoFormula fo(const char* s) { return parse_fo(s); }
VarId v(int i) { return VarId{i}; }

TEST(FreeVars, BinderRemovesOnlyItsScope) {
  auto f = fo("p0(v0) & forall v0 . p1(v0)");
  EXPECT_EQ(free_vars(f), (std::set<VarId>{v(0)}));
}

TEST(FreeVars, Equality) {
  auto f = fo("v0 = v1");
  EXPECT_EQ(free_vars(f), (std::set<VarId>{v(0), v(1)}));
}

TEST(FreeVars, Sentence) {
  auto f = fo("forall v0 . exists v1 . E(v0,v1)");
  EXPECT_TRUE(free_vars(f).empty());
}

TEST(Substitutable, CaptureDetected) {
  auto f = fo("forall v1 . E(v0,v1)");
  EXPECT_FALSE(substitutable(f, v(0), v(1)));
  EXPECT_TRUE(substitutable(f, v(0), v(2)));
}

TEST(Substitutable, IdentitySubstitution) {
  EXPECT_TRUE(substitutable(fo("p0(v0)"), v(0), v(0)));
}

TEST(SubstVar, ReplacesFreeOccurrences) {
  EXPECT_EQ(subst_var(fo("E(v0,v1)"), v(0), v(2)), fo("E(v2,v1)"));
}

TEST(SubstVar, NoFreeOccurrenceIsNoop) {
  auto f = fo("forall v0 . p0(v0)");
  EXPECT_EQ(subst_var(f, v(0), v(1)), f);
}

TEST(SubstVar, CaptureThrows) {
  EXPECT_THROW(subst_var(fo("forall v1 . E(v0,v1)"), v(0), v(1)), CaptureError);
}

TEST(Nnf, PushThroughAndCancelDouble) {
  EXPECT_EQ(nnf(fo("~(p0(v0) & ~(v0 = v1))")), fo("~p0(v0) | (v0 = v1)"));
}

TEST(Nnf, NegatedImplication) {
  EXPECT_EQ(nnf(fo("~(p0(v0) -> p1(v0))")), fo("p0(v0) & ~p1(v0)"));
}

TEST(Nnf, NegatedForall) {
  EXPECT_EQ(nnf(fo("~(forall v0 . p0(v0))")), fo("exists v0 . ~p0(v0)"));
}

TEST(IsNnf, Cases) {
  EXPECT_TRUE(is_nnf(fo("~p0(v0)")));
  EXPECT_FALSE(is_nnf(fo("~~p0(v0)")));
  EXPECT_TRUE(is_nnf(fo("forall v0 . (~E(v0,v1) | p0(v0))")));
}

TEST(Subformulas, Atom) {
  auto s = subformulas(fo("p0(v0)"));
  EXPECT_EQ(s.size(), 1u);
  EXPECT_TRUE(s.count(fo("p0(v0)")));
}

TEST(Subformulas, Negation) {
  auto s = subformulas(fo("~p0(v0)"));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.count(fo("p0(v0)")));
  EXPECT_TRUE(s.count(fo("~p0(v0)")));
}

TEST(Subformulas, Conjunction) {
  auto s = subformulas(fo("p0(v0) & p1(v0)"));
  EXPECT_EQ(s.size(), 3u);
  EXPECT_TRUE(s.count(fo("p0(v0) & p1(v0)")));
  EXPECT_TRUE(s.count(fo("p0(v0)")));
  EXPECT_TRUE(s.count(fo("p1(v0)")));
}

TEST(ReplaceTriv, TrivialAtomReplaced) {
  EXPECT_EQ(replace_triv(fo("v0 = v0"), fo("p0(v1)")), fo("p0(v1)"));
}

TEST(ReplaceTriv, OtherAtomsUntouched) {
  EXPECT_EQ(replace_triv(fo("p0(v0)"), fo("p1(v1)")), fo("p0(v0)"));
}

TEST(ReplaceTriv, UnconditionalUnderBinders) {
  auto chi = fo("(v0 = v0) & forall v2 . (v0 = v0)");
  EXPECT_EQ(replace_triv(chi, fo("p0(v1)")), fo("p0(v1) & forall v2 . p0(v1)"));
}

TEST(ReplaceTriv, IdentityOnTrivialPsi) {
  auto chi = fo("forall v0 . (p0(v0) -> (v0 = v0))");
  EXPECT_EQ(replace_triv(chi, fo("v0 = v0")), chi);
}

TEST(ExpandDerived, Ampersand) {
  auto got = expand_derived(DerivedKind::Ampersand, fo("p0(v0)"), fo("p1(v0)"));
  EXPECT_EQ(got, fo("~(p0(v0) -> ~p1(v0))"));
}

TEST(ExpandDerived, StrongImpReflexive) {
  auto got = expand_derived(DerivedKind::StrongImp, fo("p0(v0)"), fo("p0(v0)"));
  EXPECT_EQ(got, fo("(p0(v0) -> p0(v0)) & (~p0(v0) -> ~p0(v0))"));
}

TEST(ExpandDerived, StrongEquivIsBothStrongImps) {
  auto a = fo("p0(v0)");
  auto b = fo("p1(v1)");
  auto got = expand_derived(DerivedKind::StrongEquiv, a, b);
  EXPECT_EQ(got,
            FoFormula::and_(expand_derived(DerivedKind::StrongImp, a, b),
                            expand_derived(DerivedKind::StrongImp, b, a)));
}

TEST(ExpandDiamondTo, Definition) {
  auto got = expand_diamondto(parse_cn("p0"), parse_cn("p1"));
  EXPECT_EQ(got, parse_cn("~(p0 []> ~p1)"));
}

TEST(ExpandDiamondTo, NoDoubleNegSimplification) {
  auto got = expand_diamondto(parse_cn("p0"), parse_cn("~p1"));
  EXPECT_EQ(got, parse_cn("~(p0 []> ~~p1)"));
}

TEST(ExpandDiamondTo, ShapeRecoverable) {
  auto a = parse_cn("p0 & p1");
  auto b = parse_cn("p1 | p0");
  auto e = expand_diamondto(a, b);
  ASSERT_EQ(e.kind(), CnKind::StrongNeg);
  ASSERT_EQ(e.left().kind(), CnKind::BoxTo);
  EXPECT_EQ(e.left().left(), a);
  ASSERT_EQ(e.left().right().kind(), CnKind::StrongNeg);
  EXPECT_EQ(e.left().right().left(), b);
}

// Properties from the module contract.

FoFormula random_fo(std::mt19937_64& rng, int depth);

FoFormula random_atom(std::mt19937_64& rng) {
  switch (rng() % 3) {
    case 0:
      return FoFormula::pred(PredSym::prop(int(rng() % 2)),
                             {VarId{int(rng() % 3)}});
    case 1:
      return FoFormula::eq(VarId{int(rng() % 3)}, VarId{int(rng() % 3)});
    default:
      return FoFormula::pred(*PredSym::classify("E"),
                             {VarId{int(rng() % 3)}, VarId{int(rng() % 3)}});
  }
}

FoFormula random_fo(std::mt19937_64& rng, int depth) {
  if (depth == 0) return random_atom(rng);
  switch (rng() % 7) {
    case 0:
      return FoFormula::and_(random_fo(rng, depth - 1), random_fo(rng, depth - 1));
    case 1:
      return FoFormula::or_(random_fo(rng, depth - 1), random_fo(rng, depth - 1));
    case 2:
      return FoFormula::imp(random_fo(rng, depth - 1), random_fo(rng, depth - 1));
    case 3:
      return FoFormula::neg(random_fo(rng, depth - 1));
    case 4:
      return FoFormula::forall(VarId{int(rng() % 3)}, random_fo(rng, depth - 1));
    case 5:
      return FoFormula::exists(VarId{int(rng() % 3)}, random_fo(rng, depth - 1));
    default:
      return random_atom(rng);
  }
}

TEST(NnfProperties, IdempotentAndNormal) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    auto f = random_fo(rng, 4);
    auto n = nnf(f);
    EXPECT_TRUE(is_nnf(n)) << print_fo(f);
    EXPECT_EQ(nnf(n), n) << print_fo(f);
  }
}

TEST(SubstProperties, FreeVarsAfterSubstitution) {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int i = 0; i < 800; ++i) {
    auto f = random_fo(rng, 3);
    VarId x{int(rng() % 3)}, y{int(rng() % 4)};
    auto fv = free_vars(f);
    if (!fv.count(x) || !substitutable(f, x, y)) continue;
    ++checked;
    auto g = subst_var(f, x, y);
    auto gv = free_vars(g);
    std::set<VarId> allowed = fv;
    allowed.erase(x);
    allowed.insert(y);
    for (auto w : gv) EXPECT_TRUE(allowed.count(w)) << print_fo(f);
  }
  EXPECT_GT(checked, 50);
}

TEST(ReplaceTrivProperties, TrivialPsiIsIdentity) {
  std::mt19937_64 rng(9);
  auto triv = FoFormula::eq(VarId{0}, VarId{0});
  for (int i = 0; i < 300; ++i) {
    auto f = random_fo(rng, 4);
    EXPECT_EQ(replace_triv(f, triv), f);
  }
}

TEST(ExpandProperties, NoNewPredicateSymbols) {
  std::mt19937_64 rng(10);
  auto collect = [](const FoFormula& f) {
    std::set<std::string> syms;
    for (const auto& sub : subformulas(f))
      if (sub.kind() == FoKind::Pred) syms.insert(sub.node().sym.name);
    return syms;
  };
  for (int i = 0; i < 200; ++i) {
    auto a = random_fo(rng, 2);
    auto b = random_fo(rng, 2);
    auto base = collect(FoFormula::and_(a, b));
    for (auto kind : {DerivedKind::StrongImp, DerivedKind::StrongEquiv,
                      DerivedKind::Ampersand, DerivedKind::Equiv}) {
      auto e = expand_derived(kind, a, b);
      EXPECT_EQ(collect(e), base);
    }
  }
}

}  // namespace
