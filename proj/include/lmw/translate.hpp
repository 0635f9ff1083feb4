#pragma once

#include "lmw/formula.hpp"

namespace lmw {

/// Deterministic companion variables: the modal translation pairs v_i with
/// v_{i+1}; the conditional translations use the disjoint triple
/// (v_{3i+1}, v_{3i+2}, v_{3i+3}). Companion indices always exceed their
/// source, so nested translations can never capture.
struct CompanionScheme {
  static VarId modal(VarId x) { return VarId{x.index + 1}; }
  struct Triple {
    VarId y, z, w;
  };
  static Triple conditional(VarId x) {
    return {VarId{3 * x.index + 1}, VarId{3 * x.index + 2},
            VarId{3 * x.index + 3}};
  }
};

// ---------------------------------------------------------------------------
// Tr : FO(Omega) -> FO+(Omega± ∪ {eps})
// ---------------------------------------------------------------------------

inline FoFormula tr_n4(const FoFormula& phi) {
  switch (phi.kind()) {
    case FoKind::Pred: {
      const PredSym& s = phi.node().sym;
      if (s.is_signed() || s.kind == SymKind::Epsilon)
        throw WrongSignature("Tr input must be over an unsigned signature");
      return FoFormula::pred(s.with_sign(true), phi.node().args);
    }
    case FoKind::Eq:
      return phi;
    case FoKind::And:
    case FoKind::Or:
    case FoKind::Imp:
      return FoFormula::binary(phi.kind(), tr_n4(phi.left()),
                               tr_n4(phi.right()));
    case FoKind::Forall:
    case FoKind::Exists:
      return FoFormula::quant(phi.kind(), phi.node().bound, tr_n4(phi.left()));
    case FoKind::StrongNeg: {
      FoFormula g = phi.left();
      switch (g.kind()) {
        case FoKind::Pred: {
          const PredSym& s = g.node().sym;
          if (s.is_signed() || s.kind == SymKind::Epsilon)
            throw WrongSignature("Tr input must be over an unsigned signature");
          return FoFormula::pred(s.with_sign(false), g.node().args);
        }
        case FoKind::Eq:
          return FoFormula::pred(eps_sym(),
                                 {g.node().args[0], g.node().args[1]});
        case FoKind::StrongNeg:
          return tr_n4(g.left());
        case FoKind::And:
          return FoFormula::or_(tr_n4(FoFormula::neg(g.left())),
                                tr_n4(FoFormula::neg(g.right())));
        case FoKind::Or:
          return FoFormula::and_(tr_n4(FoFormula::neg(g.left())),
                                 tr_n4(FoFormula::neg(g.right())));
        case FoKind::Imp:
          return FoFormula::and_(tr_n4(g.left()),
                                 tr_n4(FoFormula::neg(g.right())));
        case FoKind::Forall:
          return FoFormula::exists(g.node().bound,
                                   tr_n4(FoFormula::neg(g.left())));
        case FoKind::Exists:
          return FoFormula::forall(g.node().bound,
                                   tr_n4(FoFormula::neg(g.left())));
      }
    }
  }
  throw Error("unreachable");
}

/// Inverse of Tr restricted to negation normal forms.
inline FoFormula tr_inverse(const FoFormula& psi) {
  switch (psi.kind()) {
    case FoKind::Pred: {
      const PredSym& s = psi.node().sym;
      if (s.kind == SymKind::Epsilon)
        return FoFormula::neg(
            FoFormula::eq(psi.node().args[0], psi.node().args[1]));
      if (s.kind == SymKind::SignedPos) {
        auto base = PredSym::classify(s.base);
        return FoFormula::pred(*base, psi.node().args);
      }
      if (s.kind == SymKind::SignedNeg) {
        auto base = PredSym::classify(s.base);
        return FoFormula::neg(FoFormula::pred(*base, psi.node().args));
      }
      throw NotInImage("symbol '" + s.name + "' is outside the signed signature");
    }
    case FoKind::Eq:
      return psi;
    case FoKind::And:
    case FoKind::Or:
    case FoKind::Imp:
      return FoFormula::binary(psi.kind(), tr_inverse(psi.left()),
                               tr_inverse(psi.right()));
    case FoKind::Forall:
    case FoKind::Exists:
      return FoFormula::quant(psi.kind(), psi.node().bound,
                              tr_inverse(psi.left()));
    case FoKind::StrongNeg:
      throw NotInImage("strong negation cannot occur in a Tr image");
  }
  throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// Modal standard translation
// ---------------------------------------------------------------------------

enum class StModalVariant { BoxOnly, DiamondExists, DiamondNegForall };

inline FoFormula st_modal(VarId x, const MdFormula& phi,
                          StModalVariant variant = StModalVariant::BoxOnly) {
  auto prop_atom = [&](const std::string& p, VarId v) {
    return FoFormula::pred(*PredSym::classify(p), {v});
  };
  auto Exy = [](VarId a, VarId b) {
    return FoFormula::pred(*PredSym::classify("E"), {a, b});
  };
  switch (phi.kind()) {
    case MdKind::Prop:
      return prop_atom(phi.node().prop, x);
    case MdKind::StrongNeg:
      return FoFormula::neg(st_modal(x, phi.left(), variant));
    case MdKind::And:
      return FoFormula::and_(st_modal(x, phi.left(), variant),
                             st_modal(x, phi.right(), variant));
    case MdKind::Or:
      return FoFormula::or_(st_modal(x, phi.left(), variant),
                            st_modal(x, phi.right(), variant));
    case MdKind::Imp:
      return FoFormula::imp(st_modal(x, phi.left(), variant),
                            st_modal(x, phi.right(), variant));
    case MdKind::Box: {
      VarId y = CompanionScheme::modal(x);
      return FoFormula::forall(
          y, FoFormula::imp(Exy(x, y), st_modal(y, phi.left(), variant)));
    }
    case MdKind::Diamond: {
      if (variant == StModalVariant::BoxOnly)
        throw DiamondInBoxOnly("diamond not allowed in the box-only translation");
      VarId y = CompanionScheme::modal(x);
      if (variant == StModalVariant::DiamondExists)
        return FoFormula::exists(
            y, FoFormula::and_(Exy(x, y), st_modal(y, phi.left(), variant)));
      return FoFormula::neg(FoFormula::forall(
          y, FoFormula::imp(Exy(x, y),
                            FoFormula::neg(st_modal(y, phi.left(), variant)))));
    }
  }
  throw Error("unreachable");
}

// ---------------------------------------------------------------------------
// Conditional standard translations
// ---------------------------------------------------------------------------

namespace st_detail {

inline FoFormula S(VarId x) { return FoFormula::pred(*PredSym::classify("S"), {x}); }
inline FoFormula O(VarId x) { return FoFormula::pred(*PredSym::classify("O"), {x}); }
inline FoFormula E(VarId a, VarId b) {
  return FoFormula::pred(*PredSym::classify("E"), {a, b});
}
inline FoFormula R(VarId a, VarId b, VarId c) {
  return FoFormula::pred(*PredSym::classify("R"), {a, b, c});
}

/// Both conditional translations share one spine; the Nelsonian one uses the
/// strong equivalence in the set-encoding conjunct and the ampersand as the
/// main connective of the boxto clause.
inline FoFormula st_cond(VarId x, const CnFormula& phi, bool nelsonian) {
  switch (phi.kind()) {
    case CnKind::Prop:
      return FoFormula::pred(*PredSym::classify(phi.node().prop), {x});
    case CnKind::StrongNeg:
      return FoFormula::neg(st_cond(x, phi.left(), nelsonian));
    case CnKind::And:
      return FoFormula::and_(st_cond(x, phi.left(), nelsonian),
                             st_cond(x, phi.right(), nelsonian));
    case CnKind::Or:
      return FoFormula::or_(st_cond(x, phi.left(), nelsonian),
                            st_cond(x, phi.right(), nelsonian));
    case CnKind::Imp:
      return FoFormula::imp(st_cond(x, phi.left(), nelsonian),
                            st_cond(x, phi.right(), nelsonian));
    case CnKind::BoxTo: {
      auto [y, z, w] = CompanionScheme::conditional(x);
      FoFormula set_enc = FoFormula::forall(
          z, FoFormula::imp(
                 O(z), expand_derived(nelsonian ? DerivedKind::StrongEquiv
                                                : DerivedKind::Equiv,
                                      E(z, y),
                                      st_cond(z, phi.left(), nelsonian))));
      FoFormula head = FoFormula::and_(S(y), set_enc);
      FoFormula tail = FoFormula::forall(
          w, FoFormula::imp(R(x, y, w), st_cond(w, phi.right(), nelsonian)));
      FoFormula body = nelsonian
                           ? expand_derived(DerivedKind::Ampersand, head, tail)
                           : FoFormula::and_(head, tail);
      return FoFormula::exists(y, body);
    }
  }
  throw Error("unreachable");
}

}  // namespace st_detail

inline FoFormula st_ck(VarId x, const CnFormula& phi) {
  return st_detail::st_cond(x, phi, false);
}

inline FoFormula st_n4ck(VarId x, const CnFormula& phi) {
  return st_detail::st_cond(x, phi, true);
}

}  // namespace lmw
