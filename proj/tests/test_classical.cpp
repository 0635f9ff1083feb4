#include <gtest/gtest.h>

#include <random>

#include "lmw/classical.hpp"
#include "lmw/text.hpp"

using namespace lmw;

namespace {

ClassicalModel one_point() {
  ClassicalModel m(Signature::props_only(2), {"a"});
  m.add_tuple("p0", {"a"});
  return m;
}

TEST(EvalC, AtomOnSingleton) {
  auto m = one_point();
  Assignment f{{VarId{0}, "a"}};
  EXPECT_TRUE(eval_c(m, f, parse_fo("p0(v0)")));
  EXPECT_FALSE(eval_c(m, f, parse_fo("~p0(v0)")));
}

TEST(EvalC, ExistsOverTwoElements) {
  Signature sig = Signature::props_only(0);
  sig.add(*PredSym::classify("E"));
  ClassicalModel m(sig, {"a", "b"});
  m.add_tuple("E", {"a", "b"});
  auto phi = parse_fo("exists v1 . E(v0,v1)");
  EXPECT_TRUE(eval_c(m, {{VarId{0}, "a"}}, phi));
  EXPECT_FALSE(eval_c(m, {{VarId{0}, "b"}}, phi));
}

TEST(EvalC, Errors) {
  auto m = one_point();
  EXPECT_THROW(eval_c(m, {}, parse_fo("p0(v0)")), UnboundVariable);
  EXPECT_THROW(eval_c(m, {{VarId{0}, "a"}}, parse_fo("S(v0)")), UnknownSymbol);
}

TEST(EvalBisetC, VacuousAndContradictory) {
  auto m = one_point();
  Assignment f{{VarId{0}, "a"}};
  EXPECT_TRUE(eval_biset_c(m, f, {}, {}));
  auto p = parse_fo("p0(v0)");
  EXPECT_FALSE(eval_biset_c(m, f, {p}, {p}));
  // p0 holds, p1 does not
  EXPECT_TRUE(eval_biset_c(m, f, {p}, {parse_fo("p1(v0)")}));
}

TEST(Homomorphism, IdentityAndViolation) {
  auto m = one_point();
  EXPECT_TRUE(is_homomorphism({{"a", "a"}}, m, m));

  ClassicalModel n(Signature::props_only(2), {"a", "b"});
  n.add_tuple("p0", {"a"});
  // constant map onto b drops the p0 tuple
  EXPECT_FALSE(is_homomorphism({{"a", "b"}, {"b", "b"}}, n, n));
  EXPECT_THROW(is_homomorphism({{"a", "a"}}, n, n), NotTotal);
}

TEST(Homomorphism, EmptyInterpretationsVacuous) {
  ClassicalModel m(Signature::props_only(1), {"a", "b"});
  EXPECT_TRUE(is_homomorphism({{"a", "b"}, {"b", "a"}}, m, m));
}

TEST(ThCk, SentenceCounts) {
  EXPECT_EQ(th_ck(Signature::standard(1)).size(), 5u);
  EXPECT_EQ(th_ck(Signature::standard(3)).size(), 7u);
  EXPECT_THROW(th_ck(Signature::props_only(1)), MissingSymbol);
}

TEST(ThCk, Thc1GoldenForm) {
  auto th = th_ck(Signature::standard(1));
  EXPECT_EQ(print_fo(th[0]),
            "forall v0 . (forall v1 . (((S(v0) & S(v1)) & (forall v2 . (O(v2) "
            "-> ((E(v2,v0) -> E(v2,v1)) & (E(v2,v1) -> E(v2,v0)))))) -> (v0 = "
            "v1)))");
  for (const auto& s : th) EXPECT_TRUE(free_vars(s).empty());
}

TEST(ThN4, CountsAndShape) {
  auto th = th_n4(Signature::standard(1));
  EXPECT_EQ(th.size(), 6u);  // Th1, Th2[p0], Th3, Th4/\, Th4->, Th5
  auto th3 = th_n4(Signature::standard(3));
  EXPECT_EQ(th3.size(), 8u);
  // Th4 instances: exactly one /\ and one -> inside the equivalence body
  auto ext = th_n4(Signature::standard(2), ThVariant::IExtension);
  EXPECT_EQ(ext.size(), 7u + 4u + 2u);
}

TEST(EvalCProperties, IrrelevantBindingsIgnored) {
  std::mt19937_64 rng(11);
  Signature sig = Signature::standard(2);
  ClassicalModel m(sig, {"a", "b", "c"});
  m.add_tuple("p0", {"a"});
  m.add_tuple("p1", {"b"});
  m.add_tuple("E", {"a", "b"});
  m.add_tuple("E", {"b", "c"});
  m.add_tuple("S", {"c"});
  auto phi = parse_fo("exists v1 . (E(v0,v1) & (p0(v0) | ~p1(v1)))");
  for (int i = 0; i < 50; ++i) {
    std::string e0 = m.domain()[rng() % 3];
    Assignment base{{VarId{0}, e0}};
    Assignment noisy = base;
    noisy[VarId{7}] = m.domain()[rng() % 3];
    noisy[VarId{9}] = m.domain()[rng() % 3];
    EXPECT_EQ(eval_c(m, base, phi), eval_c(m, noisy, phi));
  }
}

TEST(EvalCProperties, ClassicalDoubleNegation) {
  Signature sig = Signature::standard(1);
  ClassicalModel m(sig, {"a", "b"});
  m.add_tuple("p0", {"b"});
  m.add_tuple("R", {"a", "b", "a"});
  std::mt19937_64 rng(12);
  for (int i = 0; i < 40; ++i) {
    auto phi = parse_fo(rng() % 2 ? "forall v1 . (R(v0,v1,v0) -> p0(v1))"
                                  : "p0(v0) | ~p0(v0)");
    Assignment f{{VarId{0}, m.domain()[rng() % 2]},
                 {VarId{1}, m.domain()[rng() % 2]}};
    EXPECT_EQ(eval_c(m, f, FoFormula::neg(FoFormula::neg(phi))),
              eval_c(m, f, phi));
  }
}

TEST(EvalCProperties, SentencesIgnoreAssignment) {
  Signature sig = Signature::standard(1);
  ClassicalModel m(sig, {"a", "b"});
  m.add_tuple("S", {"a"});
  auto s = parse_fo("exists v0 . S(v0)");
  EXPECT_EQ(eval_c(m, {}, s), eval_c(m, {{VarId{3}, "b"}}, s));
  EXPECT_TRUE(eval_c(m, {}, s));
}

TEST(HomomorphismProperties, CompositionClosed) {
  std::mt19937_64 rng(13);
  Signature sig = Signature::props_only(2);
  sig.add(*PredSym::classify("E"));
  auto random_model = [&](int n) {
    std::vector<std::string> dom;
    for (int i = 0; i < n; ++i) dom.push_back(std::string(1, char('a' + i)));
    ClassicalModel m(sig, dom);
    return m;
  };
  for (int trial = 0; trial < 60; ++trial) {
    ClassicalModel a = random_model(2 + int(rng() % 2));
    ClassicalModel b = random_model(2 + int(rng() % 2));
    ClassicalModel c = random_model(2 + int(rng() % 2));
    // random total maps
    std::map<std::string, std::string> f, g, fg;
    for (const auto& e : a.domain())
      f[e] = b.domain()[rng() % b.domain().size()];
    for (const auto& e : b.domain())
      g[e] = c.domain()[rng() % c.domain().size()];
    // seed predicate rows in a, push them forward so f and g are homs
    for (int k = 0; k < 3; ++k) {
      std::string x = a.domain()[rng() % a.domain().size()];
      std::string y = a.domain()[rng() % a.domain().size()];
      const_cast<ClassicalModel&>(a).add_tuple("E", {x, y});
      const_cast<ClassicalModel&>(b).add_tuple("E", {f[x], f[y]});
      const_cast<ClassicalModel&>(c).add_tuple("E", {g[f[x]], g[f[y]]});
    }
    ASSERT_TRUE(is_homomorphism(f, a, b));
    ASSERT_TRUE(is_homomorphism(g, b, c));
    for (const auto& e : a.domain()) fg[e] = g[f[e]];
    EXPECT_TRUE(is_homomorphism(fg, a, c));
  }
}

}  // namespace
