#include <gtest/gtest.h>

#include <random>

#include "lmw/classical.hpp"
#include "lmw/text.hpp"
#include "lmw/translate.hpp"

using namespace lmw;

namespace {

TEST(TrN4, NegatedImplicationOfEqualities) {
  // ~(v0 = v1 -> v1 = v2)  |->  (v0 = v1) & eps(v1,v2)
  auto phi = parse_fo("~((v0 = v1) -> (v1 = v2))");
  EXPECT_EQ(tr_n4(phi), parse_fo("(v0 = v1) & eps(v1,v2)"));
}

TEST(TrN4, NonInjectivityExhibit) {
  auto a = parse_fo("~((v0 = v1) -> (v1 = v2))");
  auto b = parse_fo("(v0 = v1) & ~(v1 = v2)");
  EXPECT_NE(a, b);
  EXPECT_EQ(tr_n4(a), tr_n4(b));
}

TEST(TrN4, SignedAtoms) {
  EXPECT_EQ(tr_n4(parse_fo("p0(v0) & ~(v1 = v2)")),
            parse_fo("p0+(v0) & eps(v1,v2)"));
  EXPECT_EQ(tr_n4(parse_fo("~S(v0)")), parse_fo("S-(v0)"));
}

TEST(TrInverse, AtomClauses) {
  EXPECT_EQ(tr_inverse(parse_fo("p0-(v0)")), parse_fo("~p0(v0)"));
  EXPECT_EQ(tr_inverse(parse_fo("eps(v0,v1)")), parse_fo("~(v0 = v1)"));
  EXPECT_THROW(tr_inverse(parse_fo("S(v0)")), NotInImage);
  EXPECT_THROW(tr_inverse(parse_fo("~p0-(v0)")), NotInImage);
}

FoFormula random_fo(std::mt19937_64& rng, int depth) {
  if (depth == 0) {
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
  switch (rng() % 7) {
    case 0:
      return FoFormula::and_(random_fo(rng, depth - 1), random_fo(rng, depth - 1));
    case 1:
      return FoFormula::or_(random_fo(rng, depth - 1), random_fo(rng, depth - 1));
    case 2:
      return FoFormula::imp(random_fo(rng, depth - 1), random_fo(rng, depth - 1));
    case 3:
    case 4:
      return FoFormula::neg(random_fo(rng, depth - 1));
    case 5:
      return FoFormula::forall(VarId{int(rng() % 3)}, random_fo(rng, depth - 1));
    default:
      return FoFormula::exists(VarId{int(rng() % 3)}, random_fo(rng, depth - 1));
  }
}

TEST(TrN4, AgreesOnNnf1000) {
  std::mt19937_64 rng(20);
  for (int i = 0; i < 1000; ++i) {
    auto phi = random_fo(rng, 4);
    EXPECT_EQ(tr_n4(phi), tr_n4(nnf(phi))) << print_fo(phi);
  }
}

TEST(TrInverse, RoundTripOnNnf1000) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 1000; ++i) {
    auto phi = nnf(random_fo(rng, 4));
    EXPECT_EQ(tr_inverse(tr_n4(phi)), phi) << print_fo(phi);
  }
}

TEST(StModal, BoxClause) {
  EXPECT_EQ(st_modal(VarId{0}, parse_md("[]p0")),
            parse_fo("forall v1 . (E(v0,v1) -> p0(v1))"));
}

TEST(StModal, DiamondVariants) {
  auto dia = parse_md("<>p0", MdDialect::Diamond);
  EXPECT_EQ(st_modal(VarId{0}, dia, StModalVariant::DiamondExists),
            parse_fo("exists v1 . (E(v0,v1) & p0(v1))"));
  EXPECT_EQ(st_modal(VarId{0}, dia, StModalVariant::DiamondNegForall),
            parse_fo("~(forall v1 . (E(v0,v1) -> ~p0(v1)))"));
  EXPECT_THROW(st_modal(VarId{0}, dia, StModalVariant::BoxOnly),
               DiamondInBoxOnly);
}

TEST(StCk, BoxToClause) {
  auto got = st_ck(VarId{0}, parse_cn("p0 []> p1"));
  auto want = parse_fo(
      "exists v1 . ((S(v1) & forall v2 . (O(v2) -> ((E(v2,v1) -> p0(v2)) & "
      "(p0(v2) -> E(v2,v1))))) & forall v3 . (R(v0,v1,v3) -> p1(v3)))");
  EXPECT_EQ(got, want);
}

TEST(StCk, SingleFreeVariable) {
  std::mt19937_64 rng(22);
  auto random_cn = [&](auto&& self, int depth) -> CnFormula {
    if (depth == 0) return CnFormula::prop("p" + std::to_string(rng() % 2));
    switch (rng() % 5) {
      case 0: return CnFormula::and_(self(self, depth - 1), self(self, depth - 1));
      case 1: return CnFormula::or_(self(self, depth - 1), self(self, depth - 1));
      case 2: return CnFormula::imp(self(self, depth - 1), self(self, depth - 1));
      case 3: return CnFormula::neg(self(self, depth - 1));
      default: return CnFormula::boxto(self(self, depth - 1), self(self, depth - 1));
    }
  };
  for (int i = 0; i < 200; ++i) {
    VarId x{int(rng() % 3)};
    auto phi = random_cn(random_cn, 3);
    auto fv = free_vars(st_ck(x, phi));
    for (auto v : fv) EXPECT_EQ(v, x);
    auto fv2 = free_vars(st_n4ck(x, phi));
    for (auto v : fv2) EXPECT_EQ(v, x);
  }
}

TEST(StCk, CommutesWithNeg) {
  auto phi = parse_cn("~(p0 []> p1)");
  EXPECT_EQ(st_ck(VarId{0}, phi),
            FoFormula::neg(st_ck(VarId{0}, parse_cn("p0 []> p1"))));
}

TEST(StN4ck, TopShapeIsAmpersand) {
  auto got = st_n4ck(VarId{0}, parse_cn("p0 []> p1"));
  ASSERT_EQ(got.kind(), FoKind::Exists);
  // exists v1 . ~((S(v1) & ...) -> ~forall v3 (...))
  auto body = got.left();
  ASSERT_EQ(body.kind(), FoKind::StrongNeg);
  ASSERT_EQ(body.left().kind(), FoKind::Imp);
  EXPECT_EQ(body.left().left().kind(), FoKind::And);
  ASSERT_EQ(body.left().right().kind(), FoKind::StrongNeg);
  EXPECT_EQ(body.left().right().left().kind(), FoKind::Forall);
}

// The two conditional translations differ exactly at the <->-vs-<=> and
// /\-vs-& positions of each boxto clause.
void assert_structural_diff(const FoFormula& ck, const FoFormula& n4) {
  if (ck == n4) return;
  // ampersand-vs-conjunction: ~(head -> ~tail) against (head /\ tail)
  if (n4.kind() == FoKind::StrongNeg && ck.kind() == FoKind::And) {
    auto inner = n4.left();
    ASSERT_EQ(inner.kind(), FoKind::Imp);
    ASSERT_EQ(inner.right().kind(), FoKind::StrongNeg);
    assert_structural_diff(ck.left(), inner.left());
    assert_structural_diff(ck.right(), inner.right().left());
    return;
  }
  // equivalence-vs-strong-equivalence
  if (ck.kind() == FoKind::And && n4.kind() == FoKind::And &&
      n4.left().kind() == FoKind::And && n4.right().kind() == FoKind::And &&
      ck.left().kind() == FoKind::Imp && ck.right().kind() == FoKind::Imp &&
      n4.left().left().kind() == FoKind::Imp) {
    // ck: (A -> B) /\ (B -> A); n4: ((A' -> B') /\ (~B' -> ~A')) /\ (sym)
    assert_structural_diff(ck.left(), n4.left().left());
    assert_structural_diff(ck.right(), n4.right().left());
    return;
  }
  ASSERT_EQ(ck.kind(), n4.kind());
  switch (ck.kind()) {
    case FoKind::StrongNeg:
      assert_structural_diff(ck.left(), n4.left());
      return;
    case FoKind::Forall:
    case FoKind::Exists:
      ASSERT_EQ(ck.node().bound, n4.node().bound);
      assert_structural_diff(ck.left(), n4.left());
      return;
    case FoKind::And:
    case FoKind::Or:
    case FoKind::Imp:
      assert_structural_diff(ck.left(), n4.left());
      assert_structural_diff(ck.right(), n4.right());
      return;
    default:
      FAIL() << "translations diverge at " << print_fo(ck) << " vs "
             << print_fo(n4);
  }
}

TEST(StN4ck, DiffersFromStCkOnlyAtMarkedPositions) {
  for (const char* s : {"p0 []> p1", "(p0 []> p1) []> p0", "~(p0 []> ~p1)",
                        "p0 & (p1 []> (p0 | p1))"}) {
    auto phi = parse_cn(s);
    assert_structural_diff(st_ck(VarId{0}, phi), st_n4ck(VarId{0}, phi));
  }
}

TEST(Companions, NoCaptureInNestedTranslations) {
  // every companion binder introduced deeper has a strictly larger index
  std::mt19937_64 rng(23);
  std::function<void(const FoFormula&, int)> scan =
      [&](const FoFormula& f, int outer_max) {
        switch (f.kind()) {
          case FoKind::Forall:
          case FoKind::Exists:
            EXPECT_GT(f.node().bound.index, outer_max);
            scan(f.left(), std::max(outer_max, f.node().bound.index));
            return;
          case FoKind::StrongNeg:
            scan(f.left(), outer_max);
            return;
          case FoKind::And:
          case FoKind::Or:
          case FoKind::Imp:
            scan(f.left(), outer_max);
            scan(f.right(), outer_max);
            return;
          default:
            return;
        }
      };
  auto random_cn = [&](auto&& self, int depth) -> CnFormula {
    if (depth == 0) return CnFormula::prop("p" + std::to_string(rng() % 2));
    switch (rng() % 4) {
      case 0: return CnFormula::and_(self(self, depth - 1), self(self, depth - 1));
      case 1: return CnFormula::imp(self(self, depth - 1), self(self, depth - 1));
      case 2: return CnFormula::neg(self(self, depth - 1));
      default: return CnFormula::boxto(self(self, depth - 1), self(self, depth - 1));
    }
  };
  for (int i = 0; i < 120; ++i) {
    auto phi = random_cn(random_cn, 5);
    scan(st_ck(VarId{0}, phi), 0);
    scan(st_n4ck(VarId{0}, phi), 0);
  }
}

// Classical agreement of the two translations on arbitrary classical models.
TEST(StN4ck, ClassicallyEquivalentToStCk) {
  std::mt19937_64 rng(24);
  Signature sig = Signature::standard(2);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + int(rng() % 3);
    std::vector<std::string> dom;
    for (int i = 0; i < n; ++i) dom.push_back("e" + std::to_string(i));
    ClassicalModel m(sig, dom);
    auto rnd_elem = [&] { return dom[rng() % dom.size()]; };
    for (int k = 0; k < n; ++k) {
      if (rng() % 2) m.add_tuple("S", {rnd_elem()});
      if (rng() % 2) m.add_tuple("O", {rnd_elem()});
      m.add_tuple("E", {rnd_elem(), rnd_elem()});
      m.add_tuple("R", {rnd_elem(), rnd_elem(), rnd_elem()});
      if (rng() % 2) m.add_tuple("p0", {rnd_elem()});
      if (rng() % 2) m.add_tuple("p1", {rnd_elem()});
    }
    auto random_cn = [&](auto&& self, int depth) -> CnFormula {
      if (depth == 0) return CnFormula::prop("p" + std::to_string(rng() % 2));
      switch (rng() % 5) {
        case 0: return CnFormula::and_(self(self, depth - 1), self(self, depth - 1));
        case 1: return CnFormula::or_(self(self, depth - 1), self(self, depth - 1));
        case 2: return CnFormula::imp(self(self, depth - 1), self(self, depth - 1));
        case 3: return CnFormula::neg(self(self, depth - 1));
        default: return CnFormula::boxto(self(self, depth - 1), self(self, depth - 1));
      }
    };
    for (int k = 0; k < 10; ++k) {
      auto phi = random_cn(random_cn, 2);
      Assignment f{{VarId{0}, rnd_elem()}};
      EXPECT_EQ(eval_c(m, f, st_ck(VarId{0}, phi)),
                eval_c(m, f, st_n4ck(VarId{0}, phi)))
          << print_cn(phi);
    }
  }
}

}  // namespace
