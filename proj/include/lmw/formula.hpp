#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lmw/error.hpp"

namespace lmw {

/// Individual variable v_n; identity is the index.
struct VarId {
  int index = 0;
  friend bool operator==(VarId a, VarId b) { return a.index == b.index; }
  friend bool operator!=(VarId a, VarId b) { return a.index != b.index; }
  friend bool operator<(VarId a, VarId b) { return a.index < b.index; }
  std::string name() const { return "v" + std::to_string(index); }
};

enum class SymKind { Prop, S, O, E, R, Epsilon, SignedPos, SignedNeg };

/// Verification (+) or falsification (−) in a two-polarity semantics.
enum class Polarity { Pos, Neg };
inline Polarity flip(Polarity p) {
  return p == Polarity::Pos ? Polarity::Neg : Polarity::Pos;
}

/// Predicate letter with fixed arity. Signed symbols keep their base name.
struct PredSym {
  std::string name;
  std::string base;  // equals name for unsigned symbols
  int arity = 1;
  SymKind kind = SymKind::Prop;

  friend bool operator==(const PredSym& a, const PredSym& b) {
    return a.name == b.name;
  }
  friend bool operator<(const PredSym& a, const PredSym& b) {
    return a.name < b.name;
  }

  bool is_signed() const {
    return kind == SymKind::SignedPos || kind == SymKind::SignedNeg;
  }

  /// Classifies a symbol name: pN, S, O, E, R, eps and their +/- signings.
  static std::optional<PredSym> classify(const std::string& name) {
    if (name.empty()) return std::nullopt;
    char sign = name.back();
    if (sign == '+' || sign == '-') {
      auto base = classify(name.substr(0, name.size() - 1));
      if (!base || base->is_signed() || base->kind == SymKind::Epsilon)
        return std::nullopt;
      PredSym s;
      s.name = name;
      s.base = base->name;
      s.arity = base->arity;
      s.kind = sign == '+' ? SymKind::SignedPos : SymKind::SignedNeg;
      return s;
    }
    if (name == "S") return PredSym{name, name, 1, SymKind::S};
    if (name == "O") return PredSym{name, name, 1, SymKind::O};
    if (name == "E") return PredSym{name, name, 2, SymKind::E};
    if (name == "R") return PredSym{name, name, 3, SymKind::R};
    if (name == "eps") return PredSym{name, name, 2, SymKind::Epsilon};
    if (name.size() >= 2 && name[0] == 'p' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](unsigned char c) { return std::isdigit(c); }))
      return PredSym{name, name, 1, SymKind::Prop};
    return std::nullopt;
  }

  static PredSym prop(int n) {
    std::string nm = "p" + std::to_string(n);
    return PredSym{nm, nm, 1, SymKind::Prop};
  }

  PredSym with_sign(bool positive) const {
    PredSym s = *this;
    s.base = name;
    s.name = name + (positive ? "+" : "-");
    s.kind = positive ? SymKind::SignedPos : SymKind::SignedNeg;
    return s;
  }
};

inline PredSym eps_sym() { return PredSym{"eps", "eps", 2, SymKind::Epsilon}; }

/// Finite predicate signature with an ordered list of active props.
struct Signature {
  std::vector<PredSym> symbols;     // sorted by name, unique
  std::vector<std::string> props;   // ordered active Prop subset

  const PredSym* find(const std::string& name) const {
    auto it = std::lower_bound(symbols.begin(), symbols.end(), name,
                               [](const PredSym& s, const std::string& n) {
                                 return s.name < n;
                               });
    if (it != symbols.end() && it->name == name) return &*it;
    return nullptr;
  }

  void add(PredSym s) {
    if (find(s.name)) return;
    symbols.push_back(std::move(s));
    std::sort(symbols.begin(), symbols.end());
  }

  /// props + S, O, E, R — the Pi-style signature used by the conditional theories.
  static Signature standard(int nprops) {
    Signature sig;
    for (int i = 0; i < nprops; ++i) {
      sig.symbols.push_back(PredSym::prop(i));
      sig.props.push_back(sig.symbols.back().name);
    }
    for (const char* n : {"S", "O", "E", "R"}) sig.add(*PredSym::classify(n));
    return sig;
  }

  static Signature props_only(int nprops) {
    Signature sig;
    for (int i = 0; i < nprops; ++i) {
      sig.symbols.push_back(PredSym::prop(i));
      sig.props.push_back(sig.symbols.back().name);
    }
    return sig;
  }

  /// The signed signature over this one plus eps.
  Signature signed_with_eps() const {
    Signature out;
    for (const auto& s : symbols) {
      if (s.is_signed() || s.kind == SymKind::Epsilon)
        throw WrongSignature("signature is already signed");
      out.add(s.with_sign(true));
      out.add(s.with_sign(false));
    }
    out.add(eps_sym());
    out.props = props;
    return out;
  }
};

namespace detail {
inline std::size_t hash_combine(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
inline std::vector<int> fv_union(const std::vector<int>& a,
                                 const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}
inline std::vector<int> fv_minus(const std::vector<int>& a, int x) {
  std::vector<int> out;
  for (int v : a)
    if (v != x) out.push_back(v);
  return out;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// First-order formulas.
// ---------------------------------------------------------------------------

enum class FoKind { Pred, Eq, And, Or, Imp, StrongNeg, Forall, Exists };

class FoFormula {
 public:
  struct Node {
    FoKind kind;
    PredSym sym;               // Pred
    std::vector<VarId> args;   // Pred arguments; Eq uses args[0], args[1]
    VarId bound{-1};           // binders
    std::shared_ptr<const Node> left, right;
    std::vector<int> fv;       // sorted free-variable indices
    std::size_t hash = 0;
  };
  using Ptr = std::shared_ptr<const Node>;

  FoFormula() = default;
  explicit FoFormula(Ptr p) : node_(std::move(p)) {}

  const Node& node() const { return *node_; }
  const Ptr& ptr() const { return node_; }
  FoKind kind() const { return node_->kind; }
  FoFormula left() const { return FoFormula(node_->left); }
  FoFormula right() const { return FoFormula(node_->right); }
  bool valid() const { return node_ != nullptr; }

  static FoFormula pred(PredSym sym, std::vector<VarId> args) {
    if (static_cast<int>(args.size()) != sym.arity)
      throw Error("arity mismatch for " + sym.name);
    auto n = std::make_shared<Node>();
    n->kind = FoKind::Pred;
    n->sym = std::move(sym);
    n->args = std::move(args);
    for (auto v : n->args) n->fv.push_back(v.index);
    std::sort(n->fv.begin(), n->fv.end());
    n->fv.erase(std::unique(n->fv.begin(), n->fv.end()), n->fv.end());
    n->hash = detail::hash_combine(std::hash<std::string>{}(n->sym.name),
                                   static_cast<std::size_t>(FoKind::Pred));
    for (auto v : n->args)
      n->hash = detail::hash_combine(n->hash, std::size_t(v.index) + 11);
    return FoFormula(std::move(n));
  }

  static FoFormula eq(VarId x, VarId y) {
    auto n = std::make_shared<Node>();
    n->kind = FoKind::Eq;
    n->args = {x, y};
    n->fv = {x.index, y.index};
    std::sort(n->fv.begin(), n->fv.end());
    n->fv.erase(std::unique(n->fv.begin(), n->fv.end()), n->fv.end());
    n->hash = detail::hash_combine(
        detail::hash_combine(0x517cc1b7, std::size_t(x.index)),
        std::size_t(y.index));
    return FoFormula(std::move(n));
  }

  static FoFormula binary(FoKind k, FoFormula a, FoFormula b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->left = a.node_;
    n->right = b.node_;
    n->fv = detail::fv_union(a.node_->fv, b.node_->fv);
    n->hash = detail::hash_combine(
        detail::hash_combine(static_cast<std::size_t>(k) + 0x100, a.node_->hash),
        b.node_->hash);
    return FoFormula(std::move(n));
  }

  static FoFormula and_(FoFormula a, FoFormula b) {
    return binary(FoKind::And, std::move(a), std::move(b));
  }
  static FoFormula or_(FoFormula a, FoFormula b) {
    return binary(FoKind::Or, std::move(a), std::move(b));
  }
  static FoFormula imp(FoFormula a, FoFormula b) {
    return binary(FoKind::Imp, std::move(a), std::move(b));
  }

  static FoFormula neg(FoFormula a) {
    auto n = std::make_shared<Node>();
    n->kind = FoKind::StrongNeg;
    n->left = a.node_;
    n->fv = a.node_->fv;
    n->hash = detail::hash_combine(0xabc1, a.node_->hash);
    return FoFormula(std::move(n));
  }

  static FoFormula quant(FoKind k, VarId x, FoFormula a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->bound = x;
    n->left = a.node_;
    n->fv = detail::fv_minus(a.node_->fv, x.index);
    n->hash = detail::hash_combine(
        detail::hash_combine(static_cast<std::size_t>(k) + 0x200,
                             std::size_t(x.index)),
        a.node_->hash);
    return FoFormula(std::move(n));
  }

  static FoFormula forall(VarId x, FoFormula a) {
    return quant(FoKind::Forall, x, std::move(a));
  }
  static FoFormula exists(VarId x, FoFormula a) {
    return quant(FoKind::Exists, x, std::move(a));
  }

  friend bool operator==(const FoFormula& a, const FoFormula& b) {
    return equal(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const FoFormula& a, const FoFormula& b) {
    return !(a == b);
  }
  std::size_t hash() const { return node_->hash; }

 private:
  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->kind != b->kind) return false;
    switch (a->kind) {
      case FoKind::Pred:
        return a->sym == b->sym && a->args == b->args;
      case FoKind::Eq:
        return a->args == b->args;
      case FoKind::StrongNeg:
        return equal(a->left.get(), b->left.get());
      case FoKind::Forall:
      case FoKind::Exists:
        return a->bound == b->bound && equal(a->left.get(), b->left.get());
      default:
        return equal(a->left.get(), b->left.get()) &&
               equal(a->right.get(), b->right.get());
    }
  }
  Ptr node_;
};

// ---------------------------------------------------------------------------
// Conditional formulas.
// ---------------------------------------------------------------------------

enum class CnKind { Prop, And, Or, Imp, StrongNeg, BoxTo };

class CnFormula {
 public:
  struct Node {
    CnKind kind;
    std::string prop;
    std::shared_ptr<const Node> left, right;
    std::size_t hash = 0;
  };
  using Ptr = std::shared_ptr<const Node>;

  CnFormula() = default;
  explicit CnFormula(Ptr p) : node_(std::move(p)) {}
  const Node& node() const { return *node_; }
  const Ptr& ptr() const { return node_; }
  CnKind kind() const { return node_->kind; }
  CnFormula left() const { return CnFormula(node_->left); }
  CnFormula right() const { return CnFormula(node_->right); }
  bool valid() const { return node_ != nullptr; }

  static CnFormula prop(std::string p) {
    auto n = std::make_shared<Node>();
    n->kind = CnKind::Prop;
    n->prop = std::move(p);
    n->hash = detail::hash_combine(1, std::hash<std::string>{}(n->prop));
    return CnFormula(std::move(n));
  }
  static CnFormula binary(CnKind k, CnFormula a, CnFormula b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->left = a.node_;
    n->right = b.node_;
    n->hash = detail::hash_combine(
        detail::hash_combine(static_cast<std::size_t>(k) + 0x300, a.node_->hash),
        b.node_->hash);
    return CnFormula(std::move(n));
  }
  static CnFormula and_(CnFormula a, CnFormula b) {
    return binary(CnKind::And, std::move(a), std::move(b));
  }
  static CnFormula or_(CnFormula a, CnFormula b) {
    return binary(CnKind::Or, std::move(a), std::move(b));
  }
  static CnFormula imp(CnFormula a, CnFormula b) {
    return binary(CnKind::Imp, std::move(a), std::move(b));
  }
  static CnFormula boxto(CnFormula a, CnFormula b) {
    return binary(CnKind::BoxTo, std::move(a), std::move(b));
  }
  static CnFormula neg(CnFormula a) {
    auto n = std::make_shared<Node>();
    n->kind = CnKind::StrongNeg;
    n->left = a.node_;
    n->hash = detail::hash_combine(0xabc2, a.node_->hash);
    return CnFormula(std::move(n));
  }

  friend bool operator==(const CnFormula& a, const CnFormula& b) {
    return equal(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const CnFormula& a, const CnFormula& b) {
    return !(a == b);
  }
  std::size_t hash() const { return node_->hash; }

 private:
  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->kind != b->kind) return false;
    if (a->kind == CnKind::Prop) return a->prop == b->prop;
    if (a->kind == CnKind::StrongNeg) return equal(a->left.get(), b->left.get());
    return equal(a->left.get(), b->left.get()) &&
           equal(a->right.get(), b->right.get());
  }
  Ptr node_;
};

// ---------------------------------------------------------------------------
// Modal formulas.
// ---------------------------------------------------------------------------

enum class MdKind { Prop, And, Or, Imp, StrongNeg, Box, Diamond };

/// Diamond nodes are admitted only when the dialect is MdDialect::Diamond.
enum class MdDialect { BoxOnly, Diamond };

class MdFormula {
 public:
  struct Node {
    MdKind kind;
    std::string prop;
    std::shared_ptr<const Node> left, right;
    std::size_t hash = 0;
  };
  using Ptr = std::shared_ptr<const Node>;

  MdFormula() = default;
  explicit MdFormula(Ptr p) : node_(std::move(p)) {}
  const Node& node() const { return *node_; }
  const Ptr& ptr() const { return node_; }
  MdKind kind() const { return node_->kind; }
  MdFormula left() const { return MdFormula(node_->left); }
  MdFormula right() const { return MdFormula(node_->right); }
  bool valid() const { return node_ != nullptr; }

  static MdFormula prop(std::string p) {
    auto n = std::make_shared<Node>();
    n->kind = MdKind::Prop;
    n->prop = std::move(p);
    n->hash = detail::hash_combine(2, std::hash<std::string>{}(n->prop));
    return MdFormula(std::move(n));
  }
  static MdFormula binary(MdKind k, MdFormula a, MdFormula b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->left = a.node_;
    n->right = b.node_;
    n->hash = detail::hash_combine(
        detail::hash_combine(static_cast<std::size_t>(k) + 0x400, a.node_->hash),
        b.node_->hash);
    return MdFormula(std::move(n));
  }
  static MdFormula and_(MdFormula a, MdFormula b) {
    return binary(MdKind::And, std::move(a), std::move(b));
  }
  static MdFormula or_(MdFormula a, MdFormula b) {
    return binary(MdKind::Or, std::move(a), std::move(b));
  }
  static MdFormula imp(MdFormula a, MdFormula b) {
    return binary(MdKind::Imp, std::move(a), std::move(b));
  }
  static MdFormula unary(MdKind k, MdFormula a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->left = a.node_;
    n->hash = detail::hash_combine(static_cast<std::size_t>(k) + 0x500,
                                   a.node_->hash);
    return MdFormula(std::move(n));
  }
  static MdFormula neg(MdFormula a) { return unary(MdKind::StrongNeg, std::move(a)); }
  static MdFormula box(MdFormula a) { return unary(MdKind::Box, std::move(a)); }
  static MdFormula diamond(MdFormula a) { return unary(MdKind::Diamond, std::move(a)); }

  bool has_diamond() const { return has_diamond(node_.get()); }

  friend bool operator==(const MdFormula& a, const MdFormula& b) {
    return equal(a.node_.get(), b.node_.get());
  }
  friend bool operator!=(const MdFormula& a, const MdFormula& b) {
    return !(a == b);
  }
  std::size_t hash() const { return node_->hash; }

 private:
  static bool has_diamond(const Node* n) {
    if (!n) return false;
    if (n->kind == MdKind::Diamond) return true;
    return has_diamond(n->left.get()) || has_diamond(n->right.get());
  }
  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->hash != b->hash || a->kind != b->kind) return false;
    if (a->kind == MdKind::Prop) return a->prop == b->prop;
    return equal(a->left.get(), b->left.get()) &&
           equal(a->right.get(), b->right.get());
  }
  Ptr node_;
};

// ---------------------------------------------------------------------------
// Operations on first-order formulas.
// ---------------------------------------------------------------------------

inline std::set<VarId> free_vars(const FoFormula& f) {
  std::set<VarId> out;
  for (int i : f.node().fv) out.insert(VarId{i});
  return out;
}

inline bool is_atom(const FoFormula& f) {
  return f.kind() == FoKind::Pred || f.kind() == FoKind::Eq;
}

/// True iff no free occurrence of x in f lies in the scope of a binder on y.
inline bool substitutable(const FoFormula& f, VarId x, VarId y) {
  switch (f.kind()) {
    case FoKind::Pred:
    case FoKind::Eq:
      return true;
    case FoKind::StrongNeg:
      return substitutable(f.left(), x, y);
    case FoKind::Forall:
    case FoKind::Exists: {
      VarId b = f.node().bound;
      if (b == x) return true;  // no free x below
      bool x_free_below =
          std::binary_search(f.node().left->fv.begin(),
                             f.node().left->fv.end(), x.index);
      if (!x_free_below) return true;
      if (b == y) return false;  // capture
      return substitutable(f.left(), x, y);
    }
    default:
      return substitutable(f.left(), x, y) && substitutable(f.right(), x, y);
  }
}

/// f[x/y]: replaces all free occurrences of x by y. Pre: substitutable(f,x,y).
inline FoFormula subst_var(const FoFormula& f, VarId x, VarId y) {
  if (!substitutable(f, x, y))
    throw CaptureError("variable " + y.name() + " not substitutable for " +
                       x.name());
  struct Impl {
    VarId x, y;
    FoFormula run(const FoFormula& f) {
      if (!std::binary_search(f.node().fv.begin(), f.node().fv.end(), x.index))
        return f;
      switch (f.kind()) {
        case FoKind::Pred: {
          auto args = f.node().args;
          for (auto& a : args)
            if (a == x) a = y;
          return FoFormula::pred(f.node().sym, std::move(args));
        }
        case FoKind::Eq: {
          VarId a = f.node().args[0], b = f.node().args[1];
          return FoFormula::eq(a == x ? y : a, b == x ? y : b);
        }
        case FoKind::StrongNeg:
          return FoFormula::neg(run(f.left()));
        case FoKind::Forall:
        case FoKind::Exists:
          // bound == x is excluded by the fv guard above
          return FoFormula::quant(f.kind(), f.node().bound, run(f.left()));
        default:
          return FoFormula::binary(f.kind(), run(f.left()), run(f.right()));
      }
    }
  };
  return Impl{x, y}.run(f);
}

/// True iff every strong-negation node sits directly on an atom.
inline bool is_nnf(const FoFormula& f) {
  switch (f.kind()) {
    case FoKind::Pred:
    case FoKind::Eq:
      return true;
    case FoKind::StrongNeg:
      return is_atom(f.left());
    case FoKind::Forall:
    case FoKind::Exists:
      return is_nnf(f.left());
    default:
      return is_nnf(f.left()) && is_nnf(f.right());
  }
}

/// Negation normal form; pushes ~ through connectives and cancels ~~.
inline FoFormula nnf(const FoFormula& f) {
  switch (f.kind()) {
    case FoKind::Pred:
    case FoKind::Eq:
      return f;
    case FoKind::And:
    case FoKind::Or:
    case FoKind::Imp:
      return FoFormula::binary(f.kind(), nnf(f.left()), nnf(f.right()));
    case FoKind::Forall:
    case FoKind::Exists:
      return FoFormula::quant(f.kind(), f.node().bound, nnf(f.left()));
    case FoKind::StrongNeg: {
      FoFormula g = f.left();
      switch (g.kind()) {
        case FoKind::Pred:
        case FoKind::Eq:
          return f;  // literal
        case FoKind::StrongNeg:
          return nnf(g.left());
        case FoKind::And:
          return FoFormula::or_(nnf(FoFormula::neg(g.left())),
                                nnf(FoFormula::neg(g.right())));
        case FoKind::Or:
          return FoFormula::and_(nnf(FoFormula::neg(g.left())),
                                 nnf(FoFormula::neg(g.right())));
        case FoKind::Imp:
          return FoFormula::and_(nnf(g.left()), nnf(FoFormula::neg(g.right())));
        case FoKind::Forall:
          return FoFormula::exists(g.node().bound,
                                   nnf(FoFormula::neg(g.left())));
        case FoKind::Exists:
          return FoFormula::forall(g.node().bound,
                                   nnf(FoFormula::neg(g.left())));
      }
    }
  }
  throw Error("unreachable");
}

struct FoFormulaHash {
  std::size_t operator()(const FoFormula& f) const { return f.hash(); }
};

inline std::unordered_set<FoFormula, FoFormulaHash> subformulas(
    const FoFormula& f) {
  std::unordered_set<FoFormula, FoFormulaHash> out;
  struct Impl {
    std::unordered_set<FoFormula, FoFormulaHash>& out;
    void run(const FoFormula& f) {
      out.insert(f);
      switch (f.kind()) {
        case FoKind::Pred:
        case FoKind::Eq:
          return;
        case FoKind::StrongNeg:
        case FoKind::Forall:
        case FoKind::Exists:
          run(f.left());
          return;
        default:
          run(f.left());
          run(f.right());
      }
    }
  };
  Impl{out}.run(f);
  return out;
}

/// chi/psi: replaces every occurrence of v0 = v0 by psi, through all
/// connectives and binders unconditionally.
inline FoFormula replace_triv(const FoFormula& chi, const FoFormula& psi) {
  switch (chi.kind()) {
    case FoKind::Eq:
      if (chi.node().args[0].index == 0 && chi.node().args[1].index == 0)
        return psi;
      return chi;
    case FoKind::Pred:
      return chi;
    case FoKind::StrongNeg:
      return FoFormula::neg(replace_triv(chi.left(), psi));
    case FoKind::Forall:
    case FoKind::Exists:
      return FoFormula::quant(chi.kind(), chi.node().bound,
                              replace_triv(chi.left(), psi));
    default:
      return FoFormula::binary(chi.kind(), replace_triv(chi.left(), psi),
                               replace_triv(chi.right(), psi));
  }
}

enum class DerivedKind { StrongImp, StrongEquiv, Ampersand, Equiv };

/// Expands the derived connectives over an arbitrary formula type.
template <class F>
F expand_derived(DerivedKind kind, const F& a, const F& b) {
  switch (kind) {
    case DerivedKind::StrongImp:
      return F::and_(F::imp(a, b), F::imp(F::neg(b), F::neg(a)));
    case DerivedKind::StrongEquiv:
      return F::and_(expand_derived(DerivedKind::StrongImp, a, b),
                     expand_derived(DerivedKind::StrongImp, b, a));
    case DerivedKind::Ampersand:
      return F::neg(F::imp(a, F::neg(b)));
    case DerivedKind::Equiv:
      return F::and_(F::imp(a, b), F::imp(b, a));
  }
  throw Error("unreachable");
}

/// phi <>-> psi expands to ~(phi []> ~psi).
inline CnFormula expand_diamondto(const CnFormula& a, const CnFormula& b) {
  return CnFormula::neg(CnFormula::boxto(a, CnFormula::neg(b)));
}

struct CnFormulaHash {
  std::size_t operator()(const CnFormula& f) const { return f.hash(); }
};
struct MdFormulaHash {
  std::size_t operator()(const MdFormula& f) const { return f.hash(); }
};

}  // namespace lmw
