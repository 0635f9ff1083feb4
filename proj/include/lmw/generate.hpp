#pragma once

#include <numeric>
#include <random>

#include "lmw/conditional.hpp"
#include "lmw/sheaf.hpp"

namespace lmw {

/// Knobs for the bounded generators and suites. The seed fixes the whole
/// random stream, so identical bounds replay identical instances.
struct Bounds {
  int max_worlds = 3;
  int max_domain = 3;
  int max_depth = 3;
  int props = 2;
  int instances = 300;
  std::uint64_t seed = 1;
};

/// Bounded random models and formulas. Every emitted model passes its
/// validator by construction.
class Gen {
 public:
  explicit Gen(const Bounds& b) : b_(b), rng_(b.seed) {}

  std::mt19937_64& rng() { return rng_; }
  const Bounds& bounds() const { return b_; }

  int pick(int lo, int hi) {  // inclusive
    return lo + int(rng_() % std::uint64_t(hi - lo + 1));
  }
  bool coin() { return rng_() & 1; }

  // -- formulas ------------------------------------------------------------

  FoFormula fo_formula(int depth, int max_var = 2) {
    if (depth <= 0) return fo_atom(max_var);
    switch (pick(0, 6)) {
      case 0:
        return FoFormula::and_(fo_formula(depth - 1, max_var),
                               fo_formula(depth - 1, max_var));
      case 1:
        return FoFormula::or_(fo_formula(depth - 1, max_var),
                              fo_formula(depth - 1, max_var));
      case 2:
        return FoFormula::imp(fo_formula(depth - 1, max_var),
                              fo_formula(depth - 1, max_var));
      case 3:
        return FoFormula::neg(fo_formula(depth - 1, max_var));
      case 4:
        return FoFormula::forall(VarId{pick(0, max_var)},
                                 fo_formula(depth - 1, max_var));
      case 5:
        return FoFormula::exists(VarId{pick(0, max_var)},
                                 fo_formula(depth - 1, max_var));
      default:
        return fo_atom(max_var);
    }
  }

  FoFormula fo_atom(int max_var) {
    if (pick(0, 3) == 0)
      return FoFormula::eq(VarId{pick(0, max_var)}, VarId{pick(0, max_var)});
    return FoFormula::pred(PredSym::prop(pick(0, b_.props - 1)),
                           {VarId{pick(0, max_var)}});
  }

  CnFormula cn_formula(int depth) {
    if (depth <= 0)
      return CnFormula::prop("p" + std::to_string(pick(0, b_.props - 1)));
    switch (pick(0, 5)) {
      case 0:
        return CnFormula::and_(cn_formula(depth - 1), cn_formula(depth - 1));
      case 1:
        return CnFormula::or_(cn_formula(depth - 1), cn_formula(depth - 1));
      case 2:
        return CnFormula::imp(cn_formula(depth - 1), cn_formula(depth - 1));
      case 3:
        return CnFormula::neg(cn_formula(depth - 1));
      case 4:
        return CnFormula::boxto(cn_formula(depth - 1), cn_formula(depth - 1));
      default:
        return CnFormula::prop("p" + std::to_string(pick(0, b_.props - 1)));
    }
  }

  MdFormula md_formula(int depth, MdDialect dialect = MdDialect::BoxOnly) {
    if (depth <= 0)
      return MdFormula::prop("p" + std::to_string(pick(0, b_.props - 1)));
    int top = dialect == MdDialect::Diamond ? 6 : 5;
    switch (pick(0, top)) {
      case 0:
        return MdFormula::and_(md_formula(depth - 1, dialect),
                               md_formula(depth - 1, dialect));
      case 1:
        return MdFormula::or_(md_formula(depth - 1, dialect),
                              md_formula(depth - 1, dialect));
      case 2:
        return MdFormula::imp(md_formula(depth - 1, dialect),
                              md_formula(depth - 1, dialect));
      case 3:
        return MdFormula::neg(md_formula(depth - 1, dialect));
      case 4:
        return MdFormula::box(md_formula(depth - 1, dialect));
      case 5:
        return MdFormula::prop("p" + std::to_string(pick(0, b_.props - 1)));
      default:
        return MdFormula::diamond(md_formula(depth - 1, dialect));
    }
  }

  // -- flat models ----------------------------------------------------------

  ClassicalModel classical(const Signature& sig) {
    int n = pick(1, b_.max_domain);
    std::vector<std::string> dom;
    for (int i = 0; i < n; ++i) dom.push_back("e" + std::to_string(i));
    ClassicalModel m(sig, dom);
    for (const auto& s : sig.symbols) {
      int rows = pick(0, n);
      for (int r = 0; r < rows; ++r) {
        std::vector<int> tup;
        for (int a = 0; a < s.arity; ++a) tup.push_back(pick(0, n - 1));
        m.add_tuple_idx(s.name, tup);
      }
    }
    return m;
  }

  KripkeModalModel kripke(int max_worlds = 0) {
    int cap = max_worlds ? max_worlds : b_.max_worlds;
    Signature sig = Signature::props_only(b_.props);
    sig.add(*PredSym::classify("E"));
    int n = pick(1, cap);
    std::vector<std::string> dom;
    for (int i = 0; i < n; ++i) dom.push_back("w" + std::to_string(i));
    ClassicalModel m(sig, dom);
    for (const auto& p : sig.props)
      for (int w = 0; w < n; ++w)
        if (coin()) m.add_tuple_idx(p, {w});
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v)
        if (coin()) m.add_tuple_idx("E", {w, v});
    return KripkeModalModel(std::move(m));
  }

  // -- preorders -----------------------------------------------------------

  /// Reflexive-transitive closure of a random DAG on 0..n-1 (edges i < j).
  std::vector<std::vector<bool>> preorder(int n) {
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) leq[i][i] = true;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin()) leq[i][j] = true;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (leq[i][k] && leq[k][j]) leq[i][j] = true;
    return leq;
  }

  // -- sheaves ---------------------------------------------------------------

  /// Sheaves are produced from world-indexed partitions of a fixed germ set:
  /// the partition at v coarsens the partitions below it, so the block maps
  /// are total, functorial and monotone by construction. Predicate rows are
  /// seeded at random and pushed forward along the homs.
  struct SheafSkeleton {
    std::vector<std::vector<bool>> leq;
    std::vector<int> domain_size;                         // blocks per world
    std::map<std::pair<int, int>, std::vector<int>> hom;  // block maps
  };

  SheafSkeleton skeleton(int n) {
    SheafSkeleton sk;
    sk.leq = preorder(n);
    int germs = b_.max_domain + pick(0, 1);
    // germ 0 lives below every world; germ g >= 1 becomes active at its birth
    // world and everywhere above, so active sets grow along leq
    std::vector<int> born(germs, 0);
    for (int g = 1; g < germs; ++g) born[g] = pick(0, n - 1);
    std::vector<std::vector<bool>> active(n, std::vector<bool>(germs, false));
    for (int w = 0; w < n; ++w) {
      active[w][0] = true;
      for (int g = 1; g < germs; ++g)
        if (sk.leq[born[g]][w]) active[w][g] = true;
    }
    // per-world union-find over germs; blocks coarsen upward
    std::vector<std::vector<int>> parent(n, std::vector<int>(germs));
    auto find = [&](int w, int g) {
      while (parent[w][g] != g) g = parent[w][g] = parent[w][parent[w][g]];
      return g;
    };
    for (int w = 0; w < n; ++w) {
      std::iota(parent[w].begin(), parent[w].end(), 0);
      for (int u = 0; u < w; ++u) {
        if (!sk.leq[u][w]) continue;
        for (int g = 0; g < germs; ++g)
          if (active[u][g]) {
            int a = find(w, g), b2 = find(w, find(u, g));
            if (a != b2) parent[w][a] = b2;
          }
      }
      // random extra merges among active germs
      std::vector<int> act;
      for (int g = 0; g < germs; ++g)
        if (active[w][g]) act.push_back(g);
      int merges = pick(0, int(act.size()) - 1);
      for (int k = 0; k < merges; ++k) {
        int a = find(w, act[std::size_t(pick(0, int(act.size()) - 1))]);
        int b2 = find(w, act[std::size_t(pick(0, int(act.size()) - 1))]);
        if (a != b2) parent[w][a] = b2;
      }
      // enforce the domain-size cap
      auto blocks = [&] {
        std::vector<int> roots;
        for (int g : act)
          if (find(w, g) == g) roots.push_back(g);
        return roots;
      };
      for (auto r = blocks(); int(r.size()) > b_.max_domain; r = blocks())
        parent[w][r[0]] = r[1];
    }
    // number blocks and build the block maps
    std::vector<std::map<int, int>> block_id(n);
    sk.domain_size.assign(n, 0);
    for (int w = 0; w < n; ++w) {
      for (int g = 0; g < germs; ++g) {
        if (!active[w][g]) continue;
        int r = find(w, g);
        if (!block_id[w].count(r)) block_id[w][r] = sk.domain_size[w]++;
      }
    }
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v) {
        if (!sk.leq[w][v]) continue;
        std::vector<int> h(sk.domain_size[w], -1);
        for (int g = 0; g < germs; ++g)
          if (active[w][g])
            h[block_id[w].at(find(w, g))] = block_id[v].at(find(v, g));
        sk.hom[{w, v}] = std::move(h);
      }
    return sk;
  }

  /// Seeds random rows at every world and closes them upward along the homs.
  void populate(const SheafSkeleton& sk,
                std::vector<ClassicalModel>& models) {
    int n = int(models.size());
    for (int w = 0; w < n; ++w) {
      for (const auto& s : models[w].sig().symbols) {
        int rows = pick(0, sk.domain_size[w]);
        for (int r = 0; r < rows; ++r) {
          std::vector<int> tup;
          for (int a = 0; a < s.arity; ++a)
            tup.push_back(pick(0, sk.domain_size[w] - 1));
          for (int v = 0; v < n; ++v) {
            if (!sk.leq[w][v]) continue;
            const auto& h = sk.hom.at({w, v});
            std::vector<int> img;
            for (int x : tup) img.push_back(h[x]);
            models[v].add_tuple_idx(s.name, img);
          }
        }
      }
    }
  }

  static std::vector<std::string> world_names(int n) {
    std::vector<std::string> ws;
    for (int i = 0; i < n; ++i) ws.push_back("w" + std::to_string(i));
    return ws;
  }
  static std::vector<std::string> element_names(int n) {
    std::vector<std::string> es;
    for (int i = 0; i < n; ++i) es.push_back("a" + std::to_string(i));
    return es;
  }

  IntuitionisticSheaf int_sheaf(const Signature& sig, int max_worlds = 0) {
    int n = pick(1, max_worlds ? max_worlds : b_.max_worlds);
    SheafSkeleton sk = skeleton(n);
    IntuitionisticSheaf s(world_names(n));
    std::vector<ClassicalModel> models;
    for (int w = 0; w < n; ++w)
      models.emplace_back(sig, element_names(sk.domain_size[w]));
    populate(sk, models);
    for (int w = 0; w < n; ++w) {
      s.set_model(w, std::move(models[w]));
      for (int v = 0; v < n; ++v)
        if (sk.leq[w][v]) {
          s.set_leq(w, v);
          s.set_hom(w, v, sk.hom.at({w, v}));
        }
    }
    return s;
  }

  NelsonianSheaf n4_sheaf(const Signature& sig, int max_worlds = 0) {
    Signature neg_sig = sig;
    neg_sig.add(eps_sym());
    int n = pick(1, max_worlds ? max_worlds : b_.max_worlds);
    SheafSkeleton sk = skeleton(n);
    NelsonianSheaf s(world_names(n));
    std::vector<ClassicalModel> pos, neg;
    for (int w = 0; w < n; ++w) {
      pos.emplace_back(sig, element_names(sk.domain_size[w]));
      neg.emplace_back(neg_sig, element_names(sk.domain_size[w]));
    }
    populate(sk, pos);
    populate(sk, neg);
    for (int w = 0; w < n; ++w) {
      s.set_models(w, std::move(pos[w]), std::move(neg[w]));
      for (int v = 0; v < n; ++v)
        if (sk.leq[w][v]) {
          s.set_leq(w, v);
          s.set_hom(w, v, sk.hom.at({w, v}));
        }
    }
    return s;
  }

  // -- conditional models ----------------------------------------------------

  CkModel ck_model(int max_worlds = 0) {
    int n = pick(1, max_worlds ? max_worlds : b_.max_worlds);
    std::vector<std::string> props;
    for (int i = 0; i < b_.props; ++i) props.push_back("p" + std::to_string(i));
    CkModel m(world_names(n), props);
    for (const auto& p : props)
      m.set_valuation(p, WorldMask(rng_()) & m.full_mask());
    int triples = pick(0, 2 * n);
    for (int t = 0; t < triples; ++t)
      m.add_rel(pick(0, n - 1), WorldMask(rng_()) & m.full_mask(),
                pick(0, n - 1));
    return m;
  }

  /// Explicit NC model; up-closing the valuations and both coordinates of the
  /// accessor discharges persistence and the c1/c2 diagrams.
  NcModel nc_model(int max_worlds = 0) {
    int n = pick(1, max_worlds ? max_worlds : b_.max_worlds);
    auto leq = preorder(n);
    std::vector<std::string> props;
    for (int i = 0; i < b_.props; ++i) props.push_back("p" + std::to_string(i));
    NcModel m(world_names(n), props);
    for (int w = 0; w < n; ++w)
      for (int v = 0; v < n; ++v)
        if (leq[w][v]) m.set_leq(w, v);
    auto close_up = [&](WorldMask x) {
      WorldMask out = 0;
      for (int w = 0; w < n; ++w)
        if ((x >> w) & 1) out |= m.upset(w);
      return out;
    };
    for (const auto& p : props) {
      m.set_valplus(p, close_up(WorldMask(rng_()) & m.full_mask()));
      m.set_valminus(p, close_up(WorldMask(rng_()) & m.full_mask()));
    }
    int triples = pick(0, 2 * n);
    for (int t = 0; t < triples; ++t) {
      int w = pick(0, n - 1), v = pick(0, n - 1);
      // up-closed bi-sets, so that accessor entries can meet truth bi-sets
      WorldMask x = close_up(WorldMask(rng_()) & m.full_mask());
      WorldMask y = close_up(WorldMask(rng_()) & m.full_mask());
      for (int w2 = 0; w2 < n; ++w2) {
        if (!leq[w][w2]) continue;
        for (int v2 = 0; v2 < n; ++v2)
          if (leq[v][v2]) m.add_rel(w2, x, y, v2);
      }
    }
    return m;
  }

 private:
  Bounds b_;
  std::mt19937_64 rng_;
};

}  // namespace lmw
