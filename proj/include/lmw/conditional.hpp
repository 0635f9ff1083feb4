#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "lmw/classical.hpp"

namespace lmw {

/// World subsets as bit masks; conditional models are capped at 64 worlds.
using WorldMask = std::uint64_t;

/// The Nelsonian truth set of a formula: (positive part, negative part).
struct TruthBiset {
  WorldMask pos = 0;
  WorldMask neg = 0;
  friend bool operator==(const TruthBiset& a, const TruthBiset& b) {
    return a.pos == b.pos && a.neg == b.neg;
  }
  friend bool operator<(const TruthBiset& a, const TruthBiset& b) {
    return std::tie(a.pos, a.neg) < std::tie(b.pos, b.neg);
  }
};

namespace cond_detail {
inline void check_world_cap(std::size_t n) {
  if (n > 64) throw SizeCap("conditional models are capped at 64 worlds");
}
}  // namespace cond_detail

// ---------------------------------------------------------------------------
// Classical conditional (Chellas) models
// ---------------------------------------------------------------------------

class CkModel {
 public:
  using Oracle = std::function<bool(int, WorldMask, int)>;

  CkModel() = default;
  CkModel(std::vector<std::string> worlds, std::vector<std::string> props)
      : worlds_(std::move(worlds)), props_(std::move(props)) {
    std::sort(worlds_.begin(), worlds_.end());
    worlds_.erase(std::unique(worlds_.begin(), worlds_.end()), worlds_.end());
    if (worlds_.empty()) throw Error("conditional model needs a world");
    cond_detail::check_world_cap(worlds_.size());
    for (const auto& p : props_) valuation_[p] = 0;
  }

  int n_worlds() const { return int(worlds_.size()); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::vector<std::string>& props() const { return props_; }
  WorldMask full_mask() const {
    return worlds_.size() == 64 ? ~WorldMask(0)
                                : (WorldMask(1) << worlds_.size()) - 1;
  }
  int world_index(const std::string& w) const {
    auto it = std::lower_bound(worlds_.begin(), worlds_.end(), w);
    if (it == worlds_.end() || *it != w)
      throw UnknownWorld("world '" + w + "' not in model");
    return int(it - worlds_.begin());
  }
  const std::string& world_name(int w) const { return worlds_[w]; }

  void add_rel(int w, WorldMask x, int v) { rel_.insert({w, x, v}); }
  const std::set<std::tuple<int, WorldMask, int>>& rel_triples() const {
    return rel_;
  }
  void set_valuation(const std::string& p, WorldMask m) { valuation_[p] = m; }
  WorldMask valuation(const std::string& p) const {
    auto it = valuation_.find(p);
    if (it == valuation_.end())
      throw UnknownSymbol("prop '" + p + "' has no valuation");
    return it->second;
  }

  void set_oracle(Oracle o) { oracle_ = std::move(o); }
  bool is_virtual() const { return bool(oracle_); }

  /// Successor masks of R_X, one entry per world.
  std::vector<WorldMask> rel_matrix(WorldMask x) const {
    auto it = rel_cache_.find(x);
    if (it != rel_cache_.end()) return it->second;
    std::vector<WorldMask> succ(worlds_.size(), 0);
    if (oracle_) {
      for (int w = 0; w < n_worlds(); ++w)
        for (int v = 0; v < n_worlds(); ++v)
          if (oracle_(w, x, v)) succ[w] |= WorldMask(1) << v;
    } else {
      for (const auto& [w, mask, v] : rel_)
        if (mask == x) succ[w] |= WorldMask(1) << v;
    }
    rel_cache_.emplace(x, succ);
    return succ;
  }

 private:
  std::vector<std::string> worlds_;
  std::vector<std::string> props_;
  std::set<std::tuple<int, WorldMask, int>> rel_;
  std::map<std::string, WorldMask> valuation_;
  Oracle oracle_;
  mutable std::map<WorldMask, std::vector<WorldMask>> rel_cache_;
};

/// Truth sets over a CkModel, computed bottom-up and cached per node.
class CkEvaluator {
 public:
  explicit CkEvaluator(const CkModel& m) : m_(m) {}

  WorldMask truthset(const CnFormula& f) {
    auto it = cache_.find(f.ptr().get());
    if (it != cache_.end()) return it->second;
    WorldMask out = 0;
    WorldMask full = m_.full_mask();
    switch (f.kind()) {
      case CnKind::Prop:
        out = m_.valuation(f.node().prop);
        break;
      case CnKind::StrongNeg:
        out = ~truthset(f.left()) & full;
        break;
      case CnKind::And:
        out = truthset(f.left()) & truthset(f.right());
        break;
      case CnKind::Or:
        out = truthset(f.left()) | truthset(f.right());
        break;
      case CnKind::Imp:
        out = (~truthset(f.left()) | truthset(f.right())) & full;
        break;
      case CnKind::BoxTo: {
        WorldMask ante = truthset(f.left());
        WorldMask cons = truthset(f.right());
        auto succ = m_.rel_matrix(ante);
        for (int w = 0; w < m_.n_worlds(); ++w)
          if ((succ[w] & ~cons) == 0) out |= WorldMask(1) << w;
        break;
      }
    }
    cache_.emplace(f.ptr().get(), out);
    return out;
  }

  bool eval(const CnFormula& f, int w) {
    return (truthset(f) >> w) & 1;
  }

 private:
  const CkModel& m_;
  std::unordered_map<const void*, WorldMask> cache_;
};

inline bool eval_ck(const CkModel& m, const std::string& world,
                    const CnFormula& f) {
  CkEvaluator ev(m);
  return ev.eval(f, m.world_index(world));
}

inline WorldMask truthset_ck(const CkModel& m, const CnFormula& f) {
  CkEvaluator ev(m);
  return ev.truthset(f);
}

// ---------------------------------------------------------------------------
// Nelsonian conditional models
// ---------------------------------------------------------------------------

/// Where the positive boxto clause applies the accessor: at the quantified
/// future world (the reading the monotonicity lemma and the sheaf equivalence
/// depend on, and the default), or at the evaluation world, kept only for
/// comparison experiments.
enum class BoxToSemantics { AtFutureWorld, AtWorld };

struct NcViolation {
  bool ok = true;
  std::string message;
  static NcViolation fine() { return {}; }
  static NcViolation bad(std::string m) { return {false, std::move(m)}; }
};

class NcModel {
 public:
  using Oracle = std::function<bool(int, WorldMask, WorldMask, int)>;

  NcModel() = default;
  NcModel(std::vector<std::string> worlds, std::vector<std::string> props)
      : worlds_(std::move(worlds)), props_(std::move(props)) {
    std::sort(worlds_.begin(), worlds_.end());
    worlds_.erase(std::unique(worlds_.begin(), worlds_.end()), worlds_.end());
    if (worlds_.empty()) throw Error("conditional model needs a world");
    cond_detail::check_world_cap(worlds_.size());
    int n = int(worlds_.size());
    leq_.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) leq_[i][i] = true;
    for (const auto& p : props_) {
      valplus_[p] = 0;
      valminus_[p] = 0;
    }
  }

  int n_worlds() const { return int(worlds_.size()); }
  const std::vector<std::string>& worlds() const { return worlds_; }
  const std::vector<std::string>& props() const { return props_; }
  WorldMask full_mask() const {
    return worlds_.size() == 64 ? ~WorldMask(0)
                                : (WorldMask(1) << worlds_.size()) - 1;
  }
  int world_index(const std::string& w) const {
    auto it = std::lower_bound(worlds_.begin(), worlds_.end(), w);
    if (it == worlds_.end() || *it != w)
      throw UnknownWorld("world '" + w + "' not in model");
    return int(it - worlds_.begin());
  }
  const std::string& world_name(int w) const { return worlds_[w]; }

  void set_leq(int w, int v) { leq_[w][v] = true; }
  bool leq(int w, int v) const { return leq_[w][v]; }
  WorldMask upset(int w) const {
    WorldMask m = 0;
    for (int v = 0; v < n_worlds(); ++v)
      if (leq_[w][v]) m |= WorldMask(1) << v;
    return m;
  }

  void set_valplus(const std::string& p, WorldMask m) { valplus_[p] = m; }
  void set_valminus(const std::string& p, WorldMask m) { valminus_[p] = m; }
  WorldMask valplus(const std::string& p) const {
    auto it = valplus_.find(p);
    if (it == valplus_.end())
      throw UnknownSymbol("prop '" + p + "' has no positive valuation");
    return it->second;
  }
  WorldMask valminus(const std::string& p) const {
    auto it = valminus_.find(p);
    if (it == valminus_.end())
      throw UnknownSymbol("prop '" + p + "' has no negative valuation");
    return it->second;
  }

  void add_rel(int w, WorldMask x, WorldMask y, int v) {
    rel_.insert({w, x, y, v});
  }
  const std::set<std::tuple<int, WorldMask, WorldMask, int>>& rel_triples()
      const {
    return rel_;
  }
  void set_oracle(Oracle o) { oracle_ = std::move(o); }
  bool is_virtual() const { return bool(oracle_); }

  void set_strict(bool strict) { strict_ = strict; }
  bool strict() const { return strict_; }

  std::vector<WorldMask> rel_matrix(const TruthBiset& b) const {
    auto key = std::make_pair(b.pos, b.neg);
    auto it = rel_cache_.find(key);
    if (it != rel_cache_.end()) return it->second;
    std::vector<WorldMask> succ(worlds_.size(), 0);
    if (oracle_) {
      for (int w = 0; w < n_worlds(); ++w)
        for (int v = 0; v < n_worlds(); ++v)
          if (oracle_(w, b.pos, b.neg, v)) succ[w] |= WorldMask(1) << v;
    } else {
      for (const auto& [w, x, y, v] : rel_)
        if (x == b.pos && y == b.neg) succ[w] |= WorldMask(1) << v;
    }
    rel_cache_.emplace(key, succ);
    return succ;
  }

  /// Lazy c1/c2 check on one bi-set (cached).
  NcViolation check_biset(const TruthBiset& b) const {
    auto key = std::make_pair(b.pos, b.neg);
    auto it = c12_cache_.find(key);
    if (it != c12_cache_.end())
      return it->second ? NcViolation::fine()
                        : NcViolation::bad("cached c1/c2 violation");
    auto succ = rel_matrix(b);
    NcViolation out = check_diagrams(succ);
    c12_cache_.emplace(key, out.ok);
    return out;
  }

  /// c1: an R edge from w lifts along w <= w' to an R edge whose target
  /// dominates the original; c2: an R edge followed by <= factors through
  /// some w' >= w.
  NcViolation check_diagrams(const std::vector<WorldMask>& succ) const {
    int n = n_worlds();
    for (int w = 0; w < n; ++w)
      for (int w2 = 0; w2 < n; ++w2) {
        if (!leq_[w][w2]) continue;
        for (int u = 0; u < n; ++u) {
          if (!((succ[w] >> u) & 1)) continue;
          if ((succ[w2] & upset(u)) == 0)
            return NcViolation::bad(
                "c1 fails: R(" + worlds_[w] + ",·," + worlds_[u] +
                ") does not lift to " + worlds_[w2]);
        }
      }
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v) {
        if (!((succ[w] >> v) & 1)) continue;
        for (int v2 = 0; v2 < n; ++v2) {
          if (!leq_[v][v2]) continue;
          bool found = false;
          for (int w2 = 0; w2 < n && !found; ++w2)
            if (leq_[w][w2] && ((succ[w2] >> v2) & 1)) found = true;
          if (!found)
            return NcViolation::bad(
                "c2 fails: R(" + worlds_[w] + ",·," + worlds_[v] +
                ") with " + worlds_[v] + " <= " + worlds_[v2] +
                " has no mediating source");
        }
      }
    return NcViolation::fine();
  }

 private:
  std::vector<std::string> worlds_;
  std::vector<std::string> props_;
  std::vector<std::vector<bool>> leq_;
  std::map<std::string, WorldMask> valplus_, valminus_;
  std::set<std::tuple<int, WorldMask, WorldMask, int>> rel_;
  Oracle oracle_;
  bool strict_ = false;
  mutable std::map<std::pair<WorldMask, WorldMask>, std::vector<WorldMask>>
      rel_cache_;
  mutable std::map<std::pair<WorldMask, WorldMask>, bool> c12_cache_;
};

/// Validates an explicit Nelsonian conditional model: preorder, valuation
/// persistence, and c1/c2 for every bi-set occurring in the accessor.
inline NcViolation validate_nc(const NcModel& m) {
  int n = m.n_worlds();
  for (int w = 0; w < n; ++w)
    if (!m.leq(w, w))
      return NcViolation::bad("preorder not reflexive at " + m.world_name(w));
  for (int w = 0; w < n; ++w)
    for (int v = 0; v < n; ++v)
      for (int u = 0; u < n; ++u)
        if (m.leq(w, v) && m.leq(v, u) && !m.leq(w, u))
          return NcViolation::bad("preorder not transitive through " +
                                  m.world_name(v));
  for (const auto& p : m.props()) {
    for (int w = 0; w < n; ++w) {
      bool plus = (m.valplus(p) >> w) & 1;
      bool minus = (m.valminus(p) >> w) & 1;
      if (!plus && !minus) continue;
      for (int v = 0; v < n; ++v) {
        if (!m.leq(w, v)) continue;
        if (plus && !((m.valplus(p) >> v) & 1))
          return NcViolation::bad("valuation persistence fails for " + p +
                                  "+ at " + m.world_name(w));
        if (minus && !((m.valminus(p) >> v) & 1))
          return NcViolation::bad("valuation persistence fails for " + p +
                                  "- at " + m.world_name(w));
      }
    }
  }
  if (!m.is_virtual()) {
    std::set<std::pair<WorldMask, WorldMask>> bisets;
    for (const auto& [w, x, y, v] : m.rel_triples()) bisets.insert({x, y});
    for (const auto& [x, y] : bisets) {
      auto r = m.check_biset({x, y});
      if (!r.ok) return r;
    }
  }
  return NcViolation::fine();
}

/// Nelsonian truth bi-sets, computed bottom-up and cached per node.
class NcEvaluator {
 public:
  explicit NcEvaluator(const NcModel& m,
                       BoxToSemantics sem = BoxToSemantics::AtFutureWorld)
      : m_(m), sem_(sem) {}

  TruthBiset truthset(const CnFormula& f) {
    auto it = cache_.find(f.ptr().get());
    if (it != cache_.end()) return it->second;
    TruthBiset out;
    switch (f.kind()) {
      case CnKind::Prop:
        out = {m_.valplus(f.node().prop), m_.valminus(f.node().prop)};
        break;
      case CnKind::StrongNeg: {
        TruthBiset a = truthset(f.left());
        out = {a.neg, a.pos};
        break;
      }
      case CnKind::And: {
        TruthBiset a = truthset(f.left()), b = truthset(f.right());
        out = {a.pos & b.pos, a.neg | b.neg};
        break;
      }
      case CnKind::Or: {
        TruthBiset a = truthset(f.left()), b = truthset(f.right());
        out = {a.pos | b.pos, a.neg & b.neg};
        break;
      }
      case CnKind::Imp: {
        TruthBiset a = truthset(f.left()), b = truthset(f.right());
        for (int w = 0; w < m_.n_worlds(); ++w) {
          WorldMask up = m_.upset(w);
          if ((up & a.pos & ~b.pos) == 0) out.pos |= WorldMask(1) << w;
        }
        out.neg = a.pos & b.neg;
        break;
      }
      case CnKind::BoxTo: {
        TruthBiset ante = truthset(f.left());
        TruthBiset cons = truthset(f.right());
        if (m_.strict()) {
          auto r = m_.check_biset(ante);
          if (!r.ok)
            throw Error("strict mode: queried bi-set violates c1/c2: " +
                        r.message);
        }
        auto succ = m_.rel_matrix(ante);
        for (int w = 0; w < m_.n_worlds(); ++w) {
          bool ok = true;
          for (int v = 0; v < m_.n_worlds() && ok; ++v) {
            if (!m_.leq(w, v)) continue;
            WorldMask r = sem_ == BoxToSemantics::AtWorld ? succ[w] : succ[v];
            if (r & ~cons.pos) ok = false;
          }
          if (ok) out.pos |= WorldMask(1) << w;
          if (succ[w] & cons.neg) out.neg |= WorldMask(1) << w;
        }
        break;
      }
    }
    cache_.emplace(f.ptr().get(), out);
    return out;
  }

  bool eval(const CnFormula& f, int w, Polarity pol) {
    TruthBiset t = truthset(f);
    return ((pol == Polarity::Pos ? t.pos : t.neg) >> w) & 1;
  }

 private:
  const NcModel& m_;
  BoxToSemantics sem_;
  std::unordered_map<const void*, TruthBiset> cache_;
};

inline bool eval_nc(const NcModel& m, const std::string& world,
                    const CnFormula& f, Polarity pol,
                    BoxToSemantics sem = BoxToSemantics::AtFutureWorld) {
  NcEvaluator ev(m, sem);
  return ev.eval(f, m.world_index(world), pol);
}

inline TruthBiset truthset_nc(const NcModel& m, const CnFormula& f) {
  NcEvaluator ev(m);
  return ev.truthset(f);
}

// ---------------------------------------------------------------------------
// Kripke models for modal logic (classical models over props + E)
// ---------------------------------------------------------------------------

class KripkeModalModel {
 public:
  KripkeModalModel() = default;
  explicit KripkeModalModel(ClassicalModel m) : m_(std::move(m)) {
    for (const auto& s : m_.sig().symbols)
      if (s.kind != SymKind::Prop && s.kind != SymKind::E)
        throw WrongSignature("modal models admit only props and E, got " +
                             s.name);
    if (!m_.sig().find("E"))
      throw WrongSignature("modal models need the E relation");
  }

  const ClassicalModel& model() const { return m_; }
  int n_worlds() const { return m_.size(); }
  int world_index(const std::string& w) const { return m_.index_of(w); }
  const std::string& world_name(int w) const { return m_.name_of(w); }

 private:
  ClassicalModel m_;
};

class MdEvaluator {
 public:
  explicit MdEvaluator(const KripkeModalModel& m) : m_(m) {
    succ_.resize(m_.n_worlds());
    for (const auto& tup : m_.model().tuples("E"))
      succ_[tup[0]].push_back(tup[1]);
  }

  bool eval(const MdFormula& f, int w) {
    auto it = cache_.find(f.ptr().get());
    if (it == cache_.end()) {
      std::vector<bool> ts(m_.n_worlds());
      // children first so the recursion below only touches the cache
      compute(f, ts);
      it = cache_.emplace(f.ptr().get(), std::move(ts)).first;
    }
    return it->second[w];
  }

 private:
  void compute(const MdFormula& f, std::vector<bool>& ts) {
    int n = m_.n_worlds();
    switch (f.kind()) {
      case MdKind::Prop: {
        auto sym = PredSym::classify(f.node().prop);
        if (!sym || !m_.model().sig().find(f.node().prop))
          throw UnknownSymbol("prop '" + f.node().prop + "' not in model");
        for (int w = 0; w < n; ++w)
          ts[w] = m_.model().holds(f.node().prop, {w});
        return;
      }
      case MdKind::StrongNeg:
        for (int w = 0; w < n; ++w) ts[w] = !eval(f.left(), w);
        return;
      case MdKind::And:
        for (int w = 0; w < n; ++w)
          ts[w] = eval(f.left(), w) && eval(f.right(), w);
        return;
      case MdKind::Or:
        for (int w = 0; w < n; ++w)
          ts[w] = eval(f.left(), w) || eval(f.right(), w);
        return;
      case MdKind::Imp:
        for (int w = 0; w < n; ++w)
          ts[w] = !eval(f.left(), w) || eval(f.right(), w);
        return;
      case MdKind::Box:
        for (int w = 0; w < n; ++w) {
          bool ok = true;
          for (int v : succ_[w])
            if (!eval(f.left(), v)) { ok = false; break; }
          ts[w] = ok;
        }
        return;
      case MdKind::Diamond:
        for (int w = 0; w < n; ++w) {
          bool ok = false;
          for (int v : succ_[w])
            if (eval(f.left(), v)) { ok = true; break; }
          ts[w] = ok;
        }
        return;
    }
  }

  const KripkeModalModel& m_;
  std::vector<std::vector<int>> succ_;
  std::unordered_map<const void*, std::vector<bool>> cache_;
};

inline bool eval_m(const KripkeModalModel& m, const std::string& world,
                   const MdFormula& f) {
  MdEvaluator ev(m);
  return ev.eval(f, m.world_index(world));
}

}  // namespace lmw
