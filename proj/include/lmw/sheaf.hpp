#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "lmw/classical.hpp"

namespace lmw {

namespace sheaf_detail {

/// Worlds, preorder and transport maps shared by both sheaf kinds.
struct Frame {
  std::vector<std::string> worlds;          // sorted unique
  std::vector<std::vector<bool>> leq;       // leq[w][v]
  std::map<std::pair<int, int>, std::vector<int>> hom;  // index maps

  int world_index(const std::string& name) const {
    auto it = std::lower_bound(worlds.begin(), worlds.end(), name);
    if (it == worlds.end() || *it != name)
      throw UnknownWorld("world '" + name + "' not in sheaf");
    return int(it - worlds.begin());
  }
  const std::vector<int>* hom_at(int w, int v) const {
    auto it = hom.find({w, v});
    return it == hom.end() ? nullptr : &it->second;
  }
};

}  // namespace sheaf_detail

/// Report produced by the sheaf validators.
struct SheafViolation {
  bool ok = true;
  std::string message;
  static SheafViolation fine() { return {}; }
  static SheafViolation bad(std::string msg) { return {false, std::move(msg)}; }
};

class IntuitionisticSheaf {
 public:
  IntuitionisticSheaf() = default;
  explicit IntuitionisticSheaf(std::vector<std::string> worlds) {
    frame_.worlds = std::move(worlds);
    std::sort(frame_.worlds.begin(), frame_.worlds.end());
    frame_.worlds.erase(
        std::unique(frame_.worlds.begin(), frame_.worlds.end()),
        frame_.worlds.end());
    if (frame_.worlds.empty()) throw Error("sheaf needs at least one world");
    int n = int(frame_.worlds.size());
    frame_.leq.assign(n, std::vector<bool>(n, false));
    models_.resize(n);
  }

  int n_worlds() const { return int(frame_.worlds.size()); }
  const std::vector<std::string>& worlds() const { return frame_.worlds; }
  int world_index(const std::string& w) const { return frame_.world_index(w); }
  const std::string& world_name(int w) const { return frame_.worlds[w]; }
  bool leq(int w, int v) const { return frame_.leq[w][v]; }
  void set_leq(int w, int v) { frame_.leq[w][v] = true; }

  const ClassicalModel& model_at(int w) const { return models_[w]; }
  void set_model(int w, ClassicalModel m) { models_[w] = std::move(m); }

  void set_hom(int w, int v, std::vector<int> idx_map) {
    frame_.hom[{w, v}] = std::move(idx_map);
  }
  void set_hom_named(const std::string& w, const std::string& v,
                     const std::map<std::string, std::string>& h) {
    int wi = world_index(w), vi = world_index(v);
    std::vector<int> idx(models_[wi].size(), -1);
    for (const auto& [from, to] : h) {
      if (!models_[wi].has_element(from))
        throw UnknownElement("hom source '" + from + "' not in domain");
      idx[models_[wi].index_of(from)] = models_[vi].index_of(to);
    }
    frame_.hom[{wi, vi}] = std::move(idx);
  }
  const std::vector<int>* hom(int w, int v) const { return frame_.hom_at(w, v); }
  const sheaf_detail::Frame& frame() const { return frame_; }
  sheaf_detail::Frame& frame() { return frame_; }

 private:
  sheaf_detail::Frame frame_;
  std::vector<ClassicalModel> models_;
};

class NelsonianSheaf {
 public:
  NelsonianSheaf() = default;
  explicit NelsonianSheaf(std::vector<std::string> worlds) {
    IntuitionisticSheaf tmp(std::move(worlds));
    frame_ = tmp.frame();
    pos_.resize(frame_.worlds.size());
    neg_.resize(frame_.worlds.size());
  }

  int n_worlds() const { return int(frame_.worlds.size()); }
  const std::vector<std::string>& worlds() const { return frame_.worlds; }
  int world_index(const std::string& w) const { return frame_.world_index(w); }
  const std::string& world_name(int w) const { return frame_.worlds[w]; }
  bool leq(int w, int v) const { return frame_.leq[w][v]; }
  void set_leq(int w, int v) { frame_.leq[w][v] = true; }

  const ClassicalModel& pos_at(int w) const { return pos_[w]; }
  const ClassicalModel& neg_at(int w) const { return neg_[w]; }
  void set_models(int w, ClassicalModel pos, ClassicalModel neg) {
    pos_[w] = std::move(pos);
    neg_[w] = std::move(neg);
  }

  void set_hom(int w, int v, std::vector<int> idx_map) {
    frame_.hom[{w, v}] = std::move(idx_map);
  }
  const std::vector<int>* hom(int w, int v) const { return frame_.hom_at(w, v); }
  const sheaf_detail::Frame& frame() const { return frame_; }
  sheaf_detail::Frame& frame() { return frame_; }

  /// The positive / negative intuitionistic components.
  IntuitionisticSheaf component(bool positive) const {
    IntuitionisticSheaf s(frame_.worlds);
    s.frame() = frame_;
    for (int w = 0; w < n_worlds(); ++w)
      s.set_model(w, positive ? pos_[w] : neg_[w]);
    return s;
  }

 private:
  sheaf_detail::Frame frame_;
  std::vector<ClassicalModel> pos_, neg_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace sheaf_detail {

inline SheafViolation validate_frame(
    const Frame& fr, const std::vector<const ClassicalModel*>& models) {
  int n = int(fr.worlds.size());
  for (int w = 0; w < n; ++w)
    if (!fr.leq[w][w])
      return SheafViolation::bad("preorder not reflexive at " + fr.worlds[w]);
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u)
        if (fr.leq[w][v] && fr.leq[v][u] && !fr.leq[w][u])
          return SheafViolation::bad("preorder not transitive through " +
                                     fr.worlds[v]);
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v) {
      if (!fr.leq[w][v]) continue;
      const std::vector<int>* h = fr.hom_at(w, v);
      if (!h)
        return SheafViolation::bad("missing hom at (" + fr.worlds[w] + "," +
                                   fr.worlds[v] + ")");
      if (int(h->size()) != models[w]->size())
        return SheafViolation::bad("hom not total at (" + fr.worlds[w] + "," +
                                   fr.worlds[v] + ")");
      for (int a : *h)
        if (a < 0 || a >= models[v]->size())
          return SheafViolation::bad("hom target out of range at (" +
                                     fr.worlds[w] + "," + fr.worlds[v] + ")");
      if (w == v)
        for (int a = 0; a < models[w]->size(); ++a)
          if ((*h)[a] != a)
            return SheafViolation::bad("hom(w,w) is not the identity at " +
                                       fr.worlds[w]);
    }
  // functoriality
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u) {
        if (!(fr.leq[w][v] && fr.leq[v][u])) continue;
        const auto& hwv = *fr.hom_at(w, v);
        const auto& hvu = *fr.hom_at(v, u);
        const auto& hwu = *fr.hom_at(w, u);
        for (std::size_t a = 0; a < hwv.size(); ++a)
          if (hvu[hwv[a]] != hwu[a])
            return SheafViolation::bad(
                "functoriality fails along " + fr.worlds[w] + " <= " +
                fr.worlds[v] + " <= " + fr.worlds[u]);
      }
  // each hom preserves predicate rows
  for (const auto& [wv, h] : fr.hom) {
    auto [w, v] = wv;
    if (!fr.leq[w][v])
      return SheafViolation::bad("hom given for a pair outside leq");
    for (const auto& s : models[w]->sig().symbols) {
      if (!models[v]->sig().find(s.name)) continue;
      for (const auto& tup : models[w]->tuples(s.name)) {
        std::vector<int> img;
        for (int a : tup) img.push_back(h[a]);
        if (!models[v]->holds(s.name, img))
          return SheafViolation::bad("hom not homomorphism at (" +
                                     fr.worlds[w] + "," + fr.worlds[v] +
                                     ") for " + s.name);
      }
    }
  }
  return SheafViolation::fine();
}

}  // namespace sheaf_detail

inline SheafViolation validate_sheaf(const IntuitionisticSheaf& s) {
  std::vector<const ClassicalModel*> ms;
  for (int w = 0; w < s.n_worlds(); ++w) ms.push_back(&s.model_at(w));
  return sheaf_detail::validate_frame(s.frame(), ms);
}

inline SheafViolation validate_sheaf(const NelsonianSheaf& s) {
  for (int w = 0; w < s.n_worlds(); ++w)
    if (s.pos_at(w).domain() != s.neg_at(w).domain())
      return SheafViolation::bad("pos/neg domains differ at " +
                                 s.world_name(w));
  std::vector<const ClassicalModel*> pos, neg;
  for (int w = 0; w < s.n_worlds(); ++w) {
    pos.push_back(&s.pos_at(w));
    neg.push_back(&s.neg_at(w));
  }
  auto r = sheaf_detail::validate_frame(s.frame(), pos);
  if (!r.ok) return SheafViolation::bad("positive component: " + r.message);
  r = sheaf_detail::validate_frame(s.frame(), neg);
  if (!r.ok) return SheafViolation::bad("negative component: " + r.message);
  return SheafViolation::fine();
}

// ---------------------------------------------------------------------------
// Satisfaction
// ---------------------------------------------------------------------------

/// Intuitionistic forcing over a sheaf; the input must be negation-free.
class IntSheafEvaluator {
 public:
  explicit IntSheafEvaluator(const IntuitionisticSheaf& s) : s_(s) {}

  bool eval(const FoFormula& f, int w, detail::Env& env) {
    detail::EvalKey key{f.ptr().get(), w, 0, env.restrict_to(f.node().fv)};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool out = compute(f, w, env);
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  bool compute(const FoFormula& f, int w, detail::Env& env) {
    const ClassicalModel& m = s_.model_at(w);
    switch (f.kind()) {
      case FoKind::Pred: {
        std::vector<int> tup;
        for (auto v : f.node().args) tup.push_back(env.lookup(v.index));
        if (!m.sig().find(f.node().sym.name))
          throw UnknownSymbol("symbol '" + f.node().sym.name +
                              "' not in sheaf signature");
        return m.holds(f.node().sym.name, tup);
      }
      case FoKind::Eq:
        return env.lookup(f.node().args[0].index) ==
               env.lookup(f.node().args[1].index);
      case FoKind::And:
        return eval(f.left(), w, env) && eval(f.right(), w, env);
      case FoKind::Or:
        return eval(f.left(), w, env) || eval(f.right(), w, env);
      case FoKind::StrongNeg:
        throw NegationInPositiveLanguage(
            "strong negation is not part of the positive language");
      case FoKind::Imp: {
        for (int v = 0; v < s_.n_worlds(); ++v) {
          if (!s_.leq(w, v)) continue;
          detail::Env tenv = transport(env, w, v);
          if (eval(f.left(), v, tenv) && !eval(f.right(), v, tenv))
            return false;
        }
        return true;
      }
      case FoKind::Exists: {
        for (int a = 0; a < m.size(); ++a) {
          env.push(f.node().bound.index, a);
          bool r = eval(f.left(), w, env);
          env.pop();
          if (r) return true;
        }
        return false;
      }
      case FoKind::Forall: {
        for (int v = 0; v < s_.n_worlds(); ++v) {
          if (!s_.leq(w, v)) continue;
          detail::Env tenv = transport(env, w, v);
          for (int a = 0; a < s_.model_at(v).size(); ++a) {
            tenv.push(f.node().bound.index, a);
            bool r = eval(f.left(), v, tenv);
            tenv.pop();
            if (!r) return false;
          }
        }
        return true;
      }
    }
    throw Error("unreachable");
  }

  detail::Env transport(const detail::Env& env, int w, int v) const {
    if (w == v) return env;
    const std::vector<int>* h = s_.hom(w, v);
    if (!h) throw Error("missing hom in evaluation");
    detail::Env out = env;
    for (auto& [var, val] : out.stack) val = (*h)[val];
    return out;
  }

  const IntuitionisticSheaf& s_;
  std::unordered_map<detail::EvalKey, bool, detail::EvalKeyHash> memo_;
};

/// Two-polarity satisfaction over a Nelsonian sheaf.
class NelsonianEvaluator {
 public:
  explicit NelsonianEvaluator(const NelsonianSheaf& s) : s_(s) {}

  bool eval(const FoFormula& f, int w, detail::Env& env, Polarity pol) {
    detail::EvalKey key{f.ptr().get(), w, pol == Polarity::Pos ? 0 : 1,
                        env.restrict_to(f.node().fv)};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool out = compute(f, w, env, pol);
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  bool compute(const FoFormula& f, int w, detail::Env& env, Polarity pol) {
    bool positive = pol == Polarity::Pos;
    const ClassicalModel& local =
        positive ? s_.pos_at(w) : s_.neg_at(w);
    switch (f.kind()) {
      case FoKind::Pred: {
        std::vector<int> tup;
        for (auto v : f.node().args) tup.push_back(env.lookup(v.index));
        if (!local.sig().find(f.node().sym.name))
          throw UnknownSymbol("symbol '" + f.node().sym.name +
                              "' not in sheaf signature");
        return local.holds(f.node().sym.name, tup);
      }
      case FoKind::Eq: {
        int a = env.lookup(f.node().args[0].index);
        int b = env.lookup(f.node().args[1].index);
        if (positive) return a == b;
        return s_.neg_at(w).holds("eps", {a, b});
      }
      case FoKind::StrongNeg:
        return eval(f.left(), w, env, flip(pol));
      case FoKind::And:
        if (positive)
          return eval(f.left(), w, env, pol) && eval(f.right(), w, env, pol);
        return eval(f.left(), w, env, pol) || eval(f.right(), w, env, pol);
      case FoKind::Or:
        if (positive)
          return eval(f.left(), w, env, pol) || eval(f.right(), w, env, pol);
        return eval(f.left(), w, env, pol) && eval(f.right(), w, env, pol);
      case FoKind::Imp:
        if (positive) {
          for (int v = 0; v < s_.n_worlds(); ++v) {
            if (!s_.leq(w, v)) continue;
            detail::Env tenv = transport(env, w, v);
            if (eval(f.left(), v, tenv, Polarity::Pos) &&
                !eval(f.right(), v, tenv, Polarity::Pos))
              return false;
          }
          return true;
        }
        return eval(f.left(), w, env, Polarity::Pos) &&
               eval(f.right(), w, env, Polarity::Neg);
      case FoKind::Exists:
      case FoKind::Forall: {
        bool local_clause = (f.kind() == FoKind::Exists) == positive;
        if (local_clause) {
          // + of exists / - of forall: a witness in the current domain
          bool want = true;
          for (int a = 0; a < s_.pos_at(w).size(); ++a) {
            env.push(f.node().bound.index, a);
            bool r = eval(f.left(), w, env, pol);
            env.pop();
            if (r == want) return true;
          }
          return false;
        }
        // + of forall / - of exists: all future elements
        for (int v = 0; v < s_.n_worlds(); ++v) {
          if (!s_.leq(w, v)) continue;
          detail::Env tenv = transport(env, w, v);
          for (int a = 0; a < s_.pos_at(v).size(); ++a) {
            tenv.push(f.node().bound.index, a);
            bool r = eval(f.left(), v, tenv, pol);
            tenv.pop();
            if (!r) return false;
          }
        }
        return true;
      }
    }
    throw Error("unreachable");
  }

  detail::Env transport(const detail::Env& env, int w, int v) const {
    if (w == v) return env;
    const std::vector<int>* h = s_.hom(w, v);
    if (!h) throw Error("missing hom in evaluation");
    detail::Env out = env;
    for (auto& [var, val] : out.stack) val = (*h)[val];
    return out;
  }

  const NelsonianSheaf& s_;
  std::unordered_map<detail::EvalKey, bool, detail::EvalKeyHash> memo_;
};

inline detail::Env sheaf_env(const ClassicalModel& m, const Assignment& f) {
  detail::Env env;
  for (const auto& [var, elem] : f) env.push(var.index, m.index_of(elem));
  return env;
}

inline bool eval_i(const IntuitionisticSheaf& s, const std::string& world,
                   const Assignment& f, const FoFormula& phi) {
  int w = s.world_index(world);
  detail::Env env = sheaf_env(s.model_at(w), f);
  IntSheafEvaluator ev(s);
  return ev.eval(phi, w, env);
}

inline bool eval_n(const NelsonianSheaf& s, const std::string& world,
                   const Assignment& f, const FoFormula& phi, Polarity pol) {
  int w = s.world_index(world);
  detail::Env env = sheaf_env(s.pos_at(w), f);
  NelsonianEvaluator ev(s);
  return ev.eval(phi, w, env, pol);
}

// ---------------------------------------------------------------------------
// Generated sub-sheaves
// ---------------------------------------------------------------------------

namespace sheaf_detail {

inline std::vector<int> upset_of(const Frame& fr, int w) {
  std::vector<int> keep;
  for (int v = 0; v < int(fr.worlds.size()); ++v)
    if (fr.leq[w][v]) keep.push_back(v);
  return keep;
}

}  // namespace sheaf_detail

inline IntuitionisticSheaf generated_subsheaf(const IntuitionisticSheaf& s,
                                              const std::string& world) {
  int w = s.world_index(world);
  auto keep = sheaf_detail::upset_of(s.frame(), w);
  std::vector<std::string> names;
  for (int v : keep) names.push_back(s.world_name(v));
  IntuitionisticSheaf out(names);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    int oi = out.world_index(s.world_name(keep[i]));
    out.set_model(oi, s.model_at(keep[i]));
    for (std::size_t j = 0; j < keep.size(); ++j) {
      if (!s.leq(keep[i], keep[j])) continue;
      int oj = out.world_index(s.world_name(keep[j]));
      out.set_leq(oi, oj);
      out.set_hom(oi, oj, *s.hom(keep[i], keep[j]));
    }
  }
  return out;
}

inline NelsonianSheaf generated_subsheaf(const NelsonianSheaf& s,
                                         const std::string& world) {
  int w = s.world_index(world);
  auto keep = sheaf_detail::upset_of(s.frame(), w);
  std::vector<std::string> names;
  for (int v : keep) names.push_back(s.world_name(v));
  NelsonianSheaf out(names);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    int oi = out.world_index(s.world_name(keep[i]));
    out.set_models(oi, s.pos_at(keep[i]), s.neg_at(keep[i]));
    for (std::size_t j = 0; j < keep.size(); ++j) {
      if (!s.leq(keep[i], keep[j])) continue;
      int oj = out.world_index(s.world_name(keep[j]));
      out.set_leq(oi, oj);
      out.set_hom(oi, oj, *s.hom(keep[i], keep[j]));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The S^i / S^n conversions
// ---------------------------------------------------------------------------

/// S^i: one intuitionistic sheaf over the signed signature; P+ reads the
/// positive extension, P- the negative one, eps comes from the negative part.
inline IntuitionisticSheaf nelsonian_to_int(const NelsonianSheaf& s) {
  IntuitionisticSheaf out(s.worlds());
  out.frame() = s.frame();
  for (int w = 0; w < s.n_worlds(); ++w) {
    const ClassicalModel& pos = s.pos_at(w);
    const ClassicalModel& neg = s.neg_at(w);
    Signature sig = pos.sig().signed_with_eps();
    ClassicalModel m(sig, pos.domain());
    for (const auto& sym : pos.sig().symbols)
      for (const auto& tup : pos.tuples(sym.name))
        m.add_tuple_idx(sym.name + "+", tup);
    for (const auto& sym : neg.sig().symbols) {
      if (sym.kind == SymKind::Epsilon) {
        for (const auto& tup : neg.tuples("eps")) m.add_tuple_idx("eps", tup);
      } else {
        for (const auto& tup : neg.tuples(sym.name))
          m.add_tuple_idx(sym.name + "-", tup);
      }
    }
    out.set_model(w, std::move(m));
  }
  return out;
}

/// S^n: inverse reading of a signed-signature intuitionistic sheaf.
inline NelsonianSheaf int_to_nelsonian(const IntuitionisticSheaf& s) {
  NelsonianSheaf out(s.worlds());
  out.frame() = s.frame();
  for (int w = 0; w < s.n_worlds(); ++w) {
    const ClassicalModel& m = s.model_at(w);
    bool has_eps = false;
    Signature base;
    for (const auto& sym : m.sig().symbols) {
      if (sym.kind == SymKind::Epsilon) {
        has_eps = true;
        continue;
      }
      if (!sym.is_signed())
        throw WrongSignature("symbol '" + sym.name +
                             "' is neither signed nor eps");
      if (sym.kind == SymKind::SignedPos) base.add(*PredSym::classify(sym.base));
    }
    if (!has_eps) throw WrongSignature("signed signature lacks eps");
    base.props = m.sig().props;
    Signature neg_sig = base;
    neg_sig.add(eps_sym());
    ClassicalModel pos(base, m.domain());
    ClassicalModel neg(neg_sig, m.domain());
    for (const auto& sym : m.sig().symbols) {
      for (const auto& tup : m.tuples(sym.name)) {
        if (sym.kind == SymKind::Epsilon) neg.add_tuple_idx("eps", tup);
        else if (sym.kind == SymKind::SignedPos) pos.add_tuple_idx(sym.base, tup);
        else neg.add_tuple_idx(sym.base, tup);
      }
    }
    out.set_models(w, std::move(pos), std::move(neg));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theory checking
// ---------------------------------------------------------------------------

struct TheoryCheck {
  bool ok = true;
  std::string world;
  int sentence = -1;  // index into the checked list
};

/// Verifies positive satisfaction of every sentence at every world.
inline TheoryCheck check_th(const NelsonianSheaf& s,
                            const std::vector<FoFormula>& theory) {
  NelsonianEvaluator ev(s);
  for (int idx = 0; idx < int(theory.size()); ++idx) {
    if (!free_vars(theory[idx]).empty())
      throw Error("check_th expects sentences");
    for (int w = 0; w < s.n_worlds(); ++w) {
      detail::Env env;
      if (!ev.eval(theory[idx], w, env, Polarity::Pos))
        return {false, s.world_name(w), idx};
    }
  }
  return {};
}

}  // namespace lmw
