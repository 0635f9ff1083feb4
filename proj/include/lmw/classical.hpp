#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lmw/formula.hpp"

namespace lmw {

/// Finite map from variables to element names.
using Assignment = std::map<VarId, std::string>;

/// Finite relational model: nonempty domain plus one tuple set per symbol.
class ClassicalModel {
 public:
  ClassicalModel() = default;

  ClassicalModel(Signature sig, std::vector<std::string> domain)
      : sig_(std::move(sig)), domain_(std::move(domain)) {
    std::sort(domain_.begin(), domain_.end());
    domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
    if (domain_.empty()) throw Error("classical model domain must be nonempty");
    for (int i = 0; i < int(domain_.size()); ++i) index_[domain_[i]] = i;
    for (const auto& s : sig_.symbols) interp_[s.name];  // empty extensions
  }

  const Signature& sig() const { return sig_; }
  const std::vector<std::string>& domain() const { return domain_; }
  int size() const { return int(domain_.size()); }

  int index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
      throw UnknownElement("element '" + name + "' not in domain");
    return it->second;
  }
  const std::string& name_of(int i) const { return domain_[i]; }
  bool has_element(const std::string& name) const { return index_.count(name); }

  void add_tuple(const std::string& sym, const std::vector<std::string>& tup) {
    const PredSym* s = sig_.find(sym);
    if (!s) throw UnknownSymbol("symbol '" + sym + "' not in signature");
    if (int(tup.size()) != s->arity)
      throw Error("arity mismatch for " + sym);
    std::vector<int> idx;
    for (const auto& e : tup) idx.push_back(index_of(e));
    interp_[sym].insert(std::move(idx));
  }
  void add_tuple_idx(const std::string& sym, std::vector<int> tup) {
    const PredSym* s = sig_.find(sym);
    if (!s) throw UnknownSymbol("symbol '" + sym + "' not in signature");
    if (int(tup.size()) != s->arity) throw Error("arity mismatch for " + sym);
    interp_[sym].insert(std::move(tup));
  }

  bool holds(const std::string& sym, const std::vector<int>& tup) const {
    auto it = interp_.find(sym);
    if (it == interp_.end())
      throw UnknownSymbol("symbol '" + sym + "' not in signature");
    return it->second.count(tup) != 0;
  }

  const std::set<std::vector<int>>& tuples(const std::string& sym) const {
    auto it = interp_.find(sym);
    if (it == interp_.end())
      throw UnknownSymbol("symbol '" + sym + "' not in signature");
    return it->second;
  }

  const std::map<std::string, std::set<std::vector<int>>>& interp() const {
    return interp_;
  }

 private:
  Signature sig_;
  std::vector<std::string> domain_;
  std::map<std::string, int> index_;
  std::map<std::string, std::set<std::vector<int>>> interp_;
};

namespace detail {

/// Memo key: node pointer plus the values of its free variables (in fv order).
struct EvalKey {
  const void* node;
  int world;
  int polarity;
  std::vector<int> vals;
  friend bool operator==(const EvalKey& a, const EvalKey& b) {
    return a.node == b.node && a.world == b.world && a.polarity == b.polarity &&
           a.vals == b.vals;
  }
};
struct EvalKeyHash {
  std::size_t operator()(const EvalKey& k) const {
    std::size_t h = std::hash<const void*>{}(k.node);
    h = hash_combine(h, std::size_t(k.world) * 2654435761u + k.polarity);
    for (int v : k.vals) h = hash_combine(h, std::size_t(v) + 0x51ed);
    return h;
  }
};

/// Variable environment with shadowing; lookup scans from the back.
struct Env {
  std::vector<std::pair<int, int>> stack;  // (var index, element index)
  int lookup(int var) const {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
      if (it->first == var) return it->second;
    throw UnboundVariable("variable v" + std::to_string(var) + " is unbound");
  }
  void push(int var, int val) { stack.emplace_back(var, val); }
  void pop() { stack.pop_back(); }
  std::vector<int> restrict_to(const std::vector<int>& fv) const {
    std::vector<int> out;
    out.reserve(fv.size());
    for (int v : fv) out.push_back(lookup(v));
    return out;
  }
};

}  // namespace detail

/// Classical satisfaction; memoizes per (subformula, free-variable values).
class ClassicalEvaluator {
 public:
  explicit ClassicalEvaluator(const ClassicalModel& m) : m_(m) {}

  bool eval(const FoFormula& f, detail::Env& env) {
    detail::EvalKey key{f.ptr().get(), 0, 0, env.restrict_to(f.node().fv)};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool out;
    switch (f.kind()) {
      case FoKind::Pred: {
        std::vector<int> tup;
        for (auto v : f.node().args) tup.push_back(env.lookup(v.index));
        const PredSym* s = m_.sig().find(f.node().sym.name);
        if (!s || s->arity != f.node().sym.arity)
          throw UnknownSymbol("symbol '" + f.node().sym.name +
                              "' not in model signature");
        out = m_.holds(f.node().sym.name, tup);
        break;
      }
      case FoKind::Eq:
        out = env.lookup(f.node().args[0].index) ==
              env.lookup(f.node().args[1].index);
        break;
      case FoKind::And:
        out = eval(f.left(), env) && eval(f.right(), env);
        break;
      case FoKind::Or:
        out = eval(f.left(), env) || eval(f.right(), env);
        break;
      case FoKind::Imp:
        out = !eval(f.left(), env) || eval(f.right(), env);
        break;
      case FoKind::StrongNeg:
        out = !eval(f.left(), env);
        break;
      case FoKind::Forall:
      case FoKind::Exists: {
        bool forall = f.kind() == FoKind::Forall;
        out = forall;
        for (int a = 0; a < m_.size(); ++a) {
          env.push(f.node().bound.index, a);
          bool r = eval(f.left(), env);
          env.pop();
          if (forall && !r) { out = false; break; }
          if (!forall && r) { out = true; break; }
        }
        break;
      }
    }
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  const ClassicalModel& m_;
  std::unordered_map<detail::EvalKey, bool, detail::EvalKeyHash> memo_;
};

inline detail::Env make_env(const ClassicalModel& m, const Assignment& f) {
  detail::Env env;
  for (const auto& [var, elem] : f) env.push(var.index, m.index_of(elem));
  return env;
}

inline bool eval_c(const ClassicalModel& m, const Assignment& f,
                   const FoFormula& phi) {
  detail::Env env = make_env(m, f);
  ClassicalEvaluator ev(m);
  return ev.eval(phi, env);
}

/// True iff every member of gamma holds and every member of delta fails.
inline bool eval_biset_c(const ClassicalModel& m, const Assignment& f,
                         const std::vector<FoFormula>& gamma,
                         const std::vector<FoFormula>& delta) {
  detail::Env env = make_env(m, f);
  ClassicalEvaluator ev(m);
  for (const auto& g : gamma)
    if (!ev.eval(g, env)) return false;
  for (const auto& d : delta)
    if (ev.eval(d, env)) return false;
  return true;
}

/// Checks that h preserves every predicate extension of M into N.
inline bool is_homomorphism(const std::map<std::string, std::string>& h,
                            const ClassicalModel& m, const ClassicalModel& n) {
  std::vector<int> image(m.size());
  for (int i = 0; i < m.size(); ++i) {
    auto it = h.find(m.name_of(i));
    if (it == h.end())
      throw NotTotal("map is undefined on element '" + m.name_of(i) + "'");
    if (!n.has_element(it->second))
      throw NotTotal("map target '" + it->second + "' not in codomain");
    image[i] = n.index_of(it->second);
  }
  for (const auto& s : m.sig().symbols) {
    const PredSym* ns = n.sig().find(s.name);
    if (!ns || ns->arity != s.arity)
      throw UnknownSymbol("symbol '" + s.name + "' not in codomain signature");
    for (const auto& tup : m.tuples(s.name)) {
      std::vector<int> img;
      for (int a : tup) img.push_back(image[a]);
      if (!n.holds(s.name, img)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// First-order theories of conditional models.
// ---------------------------------------------------------------------------

namespace theory_detail {

inline FoFormula patom(const std::string& p, VarId x) {
  auto s = PredSym::classify(p);
  if (!s) throw MissingSymbol("bad prop symbol " + p);
  return FoFormula::pred(*s, {x});
}
inline FoFormula S(VarId x) { return FoFormula::pred(*PredSym::classify("S"), {x}); }
inline FoFormula O(VarId x) { return FoFormula::pred(*PredSym::classify("O"), {x}); }
inline FoFormula E(VarId x, VarId y) {
  return FoFormula::pred(*PredSym::classify("E"), {x, y});
}
inline FoFormula R(VarId x, VarId y, VarId z) {
  return FoFormula::pred(*PredSym::classify("R"), {x, y, z});
}
/// (forall x)_O phi  ==  forall x (Ox -> phi)
inline FoFormula all_O(VarId x, FoFormula phi) {
  return FoFormula::forall(x, FoFormula::imp(O(x), std::move(phi)));
}

inline void require_symbols(const Signature& sig) {
  for (const char* n : {"S", "O", "E", "R"})
    if (!sig.find(n)) throw MissingSymbol(std::string("signature lacks ") + n);
  for (const auto& p : sig.props)
    if (!sig.find(p)) throw MissingSymbol("signature lacks " + p);
}

/// The shared sentence schemas; eq chooses plain or strong equivalence.
inline std::vector<FoFormula> conditional_theory(const Signature& sig,
                                                 DerivedKind eq,
                                                 bool th4_imp_variant) {
  require_symbols(sig);
  auto and_ = [](FoFormula a, FoFormula b) {
    return FoFormula::and_(std::move(a), std::move(b));
  };
  auto imp = [](FoFormula a, FoFormula b) {
    return FoFormula::imp(std::move(a), std::move(b));
  };
  VarId x{0}, y{1}, z{2}, w{3}, u{4};
  auto EQ = [&](FoFormula a, FoFormula b) {
    return expand_derived(eq, std::move(a), std::move(b));
  };
  std::vector<FoFormula> out;
  // 1: extensionality
  out.push_back(FoFormula::forall(
      x, FoFormula::forall(
             y, imp(and_(and_(S(x), S(y)), all_O(z, EQ(E(z, x), E(z, y)))),
                    FoFormula::eq(x, y)))));
  // 2: one truth-set per prop
  for (const auto& p : sig.props)
    out.push_back(FoFormula::exists(
        x, and_(S(x), all_O(y, EQ(E(y, x), patom(p, y))))));
  // 3: complements
  out.push_back(FoFormula::forall(
      x, imp(S(x), FoFormula::exists(
                       y, and_(S(y), all_O(z, EQ(E(z, y),
                                                 FoFormula::neg(E(z, x)))))))));
  // 4: binary combinations (strong variant adds the -> instance)
  auto th4 = [&](FoKind op) {
    return FoFormula::forall(
        x, FoFormula::forall(
               y, imp(and_(S(x), S(y)),
                      FoFormula::exists(
                          z, and_(S(z),
                                  all_O(w, EQ(E(w, z),
                                              FoFormula::binary(
                                                  op, E(w, x), E(w, y)))))))));
  };
  out.push_back(th4(FoKind::And));
  if (th4_imp_variant) out.push_back(th4(FoKind::Imp));
  // 5: conditional truth-sets
  out.push_back(FoFormula::forall(
      x, FoFormula::forall(
             y, imp(and_(S(x), S(y)),
                    FoFormula::exists(
                        z, and_(S(z),
                                all_O(w, EQ(E(w, z),
                                            FoFormula::forall(
                                                u, imp(R(w, x, u),
                                                       E(u, y)))))))))));
  return out;
}

}  // namespace theory_detail

/// Th_ck: Thc1, Thc2 per prop, Thc3, Thc4, Thc5 with plain equivalences.
inline std::vector<FoFormula> th_ck(const Signature& sig) {
  return theory_detail::conditional_theory(sig, DerivedKind::Equiv, false);
}

enum class ThVariant { Base, IExtension };

/// Th: the strong-equivalence theory; Th4 instantiates over both /\ and ->.
/// The i-extension appends the sort-separation sentences.
inline std::vector<FoFormula> th_n4(const Signature& sig,
                                    ThVariant variant = ThVariant::Base) {
  auto out = theory_detail::conditional_theory(sig, DerivedKind::StrongEquiv,
                                               true);
  if (variant == ThVariant::IExtension) {
    using namespace theory_detail;
    auto and_ = [](FoFormula a, FoFormula b) {
      return FoFormula::and_(std::move(a), std::move(b));
    };
    auto imp = [](FoFormula a, FoFormula b) {
      return FoFormula::imp(std::move(a), std::move(b));
    };
    VarId x{0}, y{1}, z{2};
    out.push_back(FoFormula::forall(x, FoFormula::or_(S(x), O(x))));
    out.push_back(FoFormula::forall(x, FoFormula::neg(and_(S(x), O(x)))));
    for (const auto& p : sig.props)
      out.push_back(FoFormula::forall(x, imp(patom(p, x), O(x))));
    out.push_back(FoFormula::forall(
        x, FoFormula::forall(y, imp(E(x, y), and_(O(x), S(y))))));
    out.push_back(FoFormula::forall(
        x, FoFormula::forall(
               y, FoFormula::forall(
                      z, imp(R(x, y, z), and_(and_(O(x), S(y)), O(z)))))));
  }
  return out;
}

}  // namespace lmw
