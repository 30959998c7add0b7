#pragma once

// The strictification machinery: the Cat-valued diagram X~ attached to a
// coherent diagram, its path space with sigma/tau/rho, right homotopies, the
// comparison map omega, the odot action computed fiberwise over Grothendieck
// constructions, the self-action isomorphism, cocontinuity, and the induced
// free-cocompletion functors into the truncated theories.
//
// Every equality asserted "strictly" here is checked as a table equality of
// finite functors. Witness enumeration on free carriers is bounded by a word
// cap; the verdict suites assert cap independence.

#include "setoids/truncation.hpp"

namespace setoids {

// ---------------------------------------------------------------------------
// serialization of witnesses, for hashing tilde objects

inline void wit_key(const Wit& w, std::string& out) {
  switch (w.v.index()) {
    case 0:
      out += 'i';
      out += std::to_string(w.index());
      break;
    case 1: {
      const Word& word = w.word();
      out += 'w';
      out += std::to_string(word.start);
      for (const auto& st : word.steps) {
        out += st.forward ? '+' : '-';
        out += std::to_string(st.index);
      }
      break;
    }
    default:
      out += '(';
      wit_key(w.pair().first, out);
      out += ',';
      wit_key(w.pair().second, out);
      out += ')';
      break;
  }
}

// ---------------------------------------------------------------------------
// The tilde construction

struct TildeObj {
  bool is_tuple = false;
  Idx a = 0, alpha = 0, x = 0;     // triple (a, alpha : a -> c, x)
  Idx a2 = 0, alpha2 = 0, x2 = 0;  // tuple: alpha : a -> a2, alpha2 : a2 -> c
  Wit xi;                          // s xi = X_{alpha,0}(x), t xi = x2

  std::string key() const {
    std::string k = is_tuple ? "t" : "o";
    k += std::to_string(a) + "." + std::to_string(alpha) + "." +
         std::to_string(x);
    if (is_tuple) {
      k += "|" + std::to_string(a2) + "." + std::to_string(alpha2) + "." +
           std::to_string(x2) + "|";
      wit_key(xi, k);
    }
    return k;
  }

  static TildeObj triple(Idx a, Idx alpha, Idx x) {
    TildeObj o;
    o.a = a;
    o.alpha = alpha;
    o.x = x;
    return o;
  }

  static TildeObj tuple(Idx a, Idx alpha, Idx x, Idx a2, Idx alpha2, Idx x2,
                        Wit xi) {
    TildeObj o;
    o.is_tuple = true;
    o.a = a;
    o.alpha = alpha;
    o.x = x;
    o.a2 = a2;
    o.alpha2 = alpha2;
    o.x2 = x2;
    o.xi = std::move(xi);
    return o;
  }
};

struct TildeData {
  DiagPtr diagram;
  CatDiagram cats;
  std::vector<std::vector<TildeObj>> objs;  // per object of the shape
  std::vector<std::unordered_map<std::string, Idx>> index;
  Idx cap = kDefaultWordCap;

  Idx find(Idx c, const TildeObj& o) const {
    auto it = index[c].find(o.key());
    require(it != index[c].end(),
            "tilde: object not in the enumeration (word cap too small?)");
    return it->second;
  }

  // arrow indices of the fiber category at c: identities first, then the
  // two collapse arrows per tuple, in object order
  Idx first_collapse(Idx c, Idx obj) const {
    return collapse_base_[c][obj];
  }
  Idx second_collapse(Idx c, Idx obj) const {
    return collapse_base_[c][obj] + 1;
  }
  // the two collapse targets of a tuple
  Idx collapse_target1(Idx c, Idx obj) const {
    const TildeObj& t = objs[c][obj];
    const FinCat& sh = *diagram->shape;
    return find(c, TildeObj::triple(t.a, sh.compose(t.alpha2, t.alpha), t.x));
  }
  Idx collapse_target2(Idx c, Idx obj) const {
    const TildeObj& t = objs[c][obj];
    return find(c, TildeObj::triple(t.a2, t.alpha2, t.x2));
  }

  std::vector<std::vector<Idx>> collapse_base_;  // per c, per object (tuples)
};

namespace detail {

// witnesses with a fixed source point
inline std::vector<Wit> witnesses_from(const Setoid& s, Idx x, Idx cap) {
  std::vector<Wit> out;
  if (s.rep == Setoid::Rep::free) {
    for (Idx y = 0; y < s.points(); ++y)
      for (Wit& w : s.witnesses_between(x, y, cap)) out.push_back(std::move(w));
    return out;
  }
  for (Wit& w : s.witnesses(cap))
    if (s.src(w) == x) out.push_back(std::move(w));
  return out;
}

// assemble the fiber category of a tilde-style enumeration: identities plus
// two collapse arrows per tuple, with no nontrivial composites
inline FinCat tilde_fiber_cat(const std::vector<TildeObj>& objs,
                              std::vector<Idx>& collapse_base,
                              const std::function<Idx(Idx)>& target1,
                              const std::function<Idx(Idx)>& target2) {
  FinCat cat;
  cat.objects = FinSet(objs.size());
  cat.identity_of.resize(objs.size());
  for (Idx o = 0; o < objs.size(); ++o) {
    cat.identity_of[o] = o;
    cat.arrows.push_back({o, o, "1." + std::to_string(o)});
  }
  collapse_base.assign(objs.size(), kNone);
  for (Idx o = 0; o < objs.size(); ++o) {
    if (!objs[o].is_tuple) continue;
    collapse_base[o] = cat.arrows.size();
    cat.arrows.push_back({o, target1(o), "c1." + std::to_string(o)});
    cat.arrows.push_back({o, target2(o), "c2." + std::to_string(o)});
  }
  return cat;
}

}  // namespace detail

inline TildeData tilde(DiagPtr x, Idx cap = kDefaultWordCap) {
  const FinCat& sh = *x->shape;
  TildeData out;
  out.diagram = x;
  out.cap = cap;
  out.objs.resize(sh.num_objects());
  out.index.resize(sh.num_objects());
  out.collapse_base_.resize(sh.num_objects());

  for (Idx c = 0; c < sh.num_objects(); ++c) {
    auto add = [&](TildeObj o) {
      out.index[c].emplace(o.key(), out.objs[c].size());
      out.objs[c].push_back(std::move(o));
    };
    // triples (a, alpha : a -> c, x)
    for (Idx alpha = 0; alpha < sh.num_arrows(); ++alpha) {
      if (sh.dst(alpha) != c) continue;
      for (Idx p = 0; p < x->at[sh.src(alpha)]->points(); ++p)
        add(TildeObj::triple(sh.src(alpha), alpha, p));
    }
    // tuples (a, alpha : a -> a2, x, a2, alpha2 : a2 -> c, x2, xi)
    for (Idx alpha2 = 0; alpha2 < sh.num_arrows(); ++alpha2) {
      if (sh.dst(alpha2) != c) continue;
      Idx a2 = sh.src(alpha2);
      for (Idx alpha = 0; alpha < sh.num_arrows(); ++alpha) {
        if (sh.dst(alpha) != a2) continue;
        Idx a = sh.src(alpha);
        for (Idx p = 0; p < x->at[a]->points(); ++p)
          for (Wit& xi : detail::witnesses_from(*x->at[a2],
                                                x->rep[alpha].f0[p], cap))
            add(TildeObj::tuple(a, alpha, p, a2, alpha2,
                                x->at[a2]->tgt(xi), std::move(xi)));
      }
    }
  }

  out.cats.shape = x->shape;
  for (Idx c = 0; c < sh.num_objects(); ++c) {
    FinCat fc = detail::tilde_fiber_cat(
        out.objs[c], out.collapse_base_[c],
        [&](Idx o) { return out.collapse_target1(c, o); },
        [&](Idx o) { return out.collapse_target2(c, o); });
    out.cats.fiber.push_back(mk(std::move(fc)));
  }
  // X~_gamma acts by postcomposition on the arrow into c
  for (Idx gamma = 0; gamma < sh.num_arrows(); ++gamma) {
    Idx c = sh.src(gamma), c2 = sh.dst(gamma);
    Functor act;
    act.dom = out.cats.fiber[c];
    act.cod = out.cats.fiber[c2];
    for (const TildeObj& o : out.objs[c]) {
      TildeObj im = o;
      if (o.is_tuple)
        im.alpha2 = sh.compose(gamma, o.alpha2);
      else
        im.alpha = sh.compose(gamma, o.alpha);
      act.ob.push_back(out.find(c2, im));
    }
    act.arr.assign(out.cats.fiber[c]->num_arrows(), kNone);
    for (Idx o = 0; o < out.objs[c].size(); ++o) {
      act.arr[out.cats.fiber[c]->identity(o)] =
          out.cats.fiber[c2]->identity(act.ob[o]);
      if (out.objs[c][o].is_tuple) {
        act.arr[out.first_collapse(c, o)] = out.first_collapse(c2, act.ob[o]);
        act.arr[out.second_collapse(c, o)] = out.second_collapse(c2, act.ob[o]);
      }
    }
    out.cats.act.push_back(std::move(act));
  }
  return out;
}

// f~ : X~ -> Y~ for a morphism representative f
inline CatDiagMap tilde_mor(const DiagMor& f, const TildeData& tx,
                            const TildeData& ty) {
  const FinCat& sh = *f.dom->shape;
  CatDiagMap out;
  for (Idx c = 0; c < sh.num_objects(); ++c) {
    Functor comp;
    comp.dom = tx.cats.fiber[c];
    comp.cod = ty.cats.fiber[c];
    for (const TildeObj& o : tx.objs[c]) {
      if (!o.is_tuple) {
        comp.ob.push_back(
            ty.find(c, TildeObj::triple(o.a, o.alpha, f.at[o.a].f0[o.x])));
      } else {
        const Setoid& y2 = *f.cod->at[o.a2];
        Wit w = y2.trans(f.nat[o.alpha][o.x], f.at[o.a2].f1(o.xi));
        comp.ob.push_back(ty.find(
            c, TildeObj::tuple(o.a, o.alpha, f.at[o.a].f0[o.x], o.a2, o.alpha2,
                               f.at[o.a2].f0[o.x2], std::move(w))));
      }
    }
    comp.arr.assign(tx.cats.fiber[c]->num_arrows(), kNone);
    for (Idx o = 0; o < tx.objs[c].size(); ++o) {
      comp.arr[tx.cats.fiber[c]->identity(o)] =
          ty.cats.fiber[c]->identity(comp.ob[o]);
      if (tx.objs[c][o].is_tuple) {
        comp.arr[tx.first_collapse(c, o)] = ty.first_collapse(c, comp.ob[o]);
        comp.arr[tx.second_collapse(c, o)] = ty.second_collapse(c, comp.ob[o]);
      }
    }
    out.at.push_back(std::move(comp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The path space

struct PathObj {
  bool is_tuple = false;
  Idx a = 0, alpha = 0;
  Wit zeta;
  Idx a2 = 0, alpha2 = 0;
  Wit zeta2, xi, xi2;

  std::string key() const {
    std::string k = is_tuple ? "T" : "O";
    k += std::to_string(a) + "." + std::to_string(alpha) + "|";
    wit_key(zeta, k);
    if (is_tuple) {
      k += "|" + std::to_string(a2) + "." + std::to_string(alpha2) + "|";
      wit_key(zeta2, k);
      k += "|";
      wit_key(xi, k);
      k += "|";
      wit_key(xi2, k);
    }
    return k;
  }
};

struct PathData {
  DiagPtr diagram;
  CatDiagram cats;
  std::vector<std::vector<PathObj>> objs;
  std::vector<std::unordered_map<std::string, Idx>> index;
  std::vector<std::vector<Idx>> collapse_base_;
  Idx cap = kDefaultWordCap;

  Idx find(Idx c, const PathObj& o) const {
    auto it = index[c].find(o.key());
    require(it != index[c].end(),
            "path space: object not in the enumeration (word cap too small?)");
    return it->second;
  }
  Idx first_collapse(Idx c, Idx obj) const { return collapse_base_[c][obj]; }
  Idx second_collapse(Idx c, Idx obj) const {
    return collapse_base_[c][obj] + 1;
  }
};

struct PathSpace {
  PathData data;
  CatDiagMap sigma, tau;  // path -> tilde
  CatDiagMap rho;         // tilde -> path
};

inline PathSpace path_space(const TildeData& tx, Idx cap = kDefaultWordCap) {
  DiagPtr x = tx.diagram;
  const FinCat& sh = *x->shape;
  PathSpace out;
  PathData& pd = out.data;
  pd.diagram = x;
  pd.cap = cap;
  pd.objs.resize(sh.num_objects());
  pd.index.resize(sh.num_objects());
  pd.collapse_base_.resize(sh.num_objects());

  for (Idx c = 0; c < sh.num_objects(); ++c) {
    auto add = [&](PathObj o) {
      pd.index[c].emplace(o.key(), pd.objs[c].size());
      pd.objs[c].push_back(std::move(o));
    };
    for (Idx alpha = 0; alpha < sh.num_arrows(); ++alpha) {
      if (sh.dst(alpha) != c) continue;
      for (const Wit& zeta : x->at[sh.src(alpha)]->witnesses(cap)) {
        PathObj o;
        o.a = sh.src(alpha);
        o.alpha = alpha;
        o.zeta = zeta;
        add(std::move(o));
      }
    }
    for (Idx alpha2 = 0; alpha2 < sh.num_arrows(); ++alpha2) {
      if (sh.dst(alpha2) != c) continue;
      Idx a2 = sh.src(alpha2);
      const Setoid& s2 = *x->at[a2];
      for (Idx alpha = 0; alpha < sh.num_arrows(); ++alpha) {
        if (sh.dst(alpha) != a2) continue;
        Idx a = sh.src(alpha);
        for (const Wit& zeta : x->at[a]->witnesses(cap))
          for (const Wit& zeta2 : s2.witnesses(cap)) {
            // xi : X_{alpha,0}(s zeta) ~ s zeta2, xi2 : X_{alpha,0}(t zeta) ~ t zeta2
            for (const Wit& xi : s2.witnesses_between(
                     x->rep[alpha].f0[x->at[a]->src(zeta)], s2.src(zeta2), cap))
              for (const Wit& xi2 : s2.witnesses_between(
                       x->rep[alpha].f0[x->at[a]->tgt(zeta)], s2.tgt(zeta2),
                       cap)) {
                PathObj o;
                o.is_tuple = true;
                o.a = a;
                o.alpha = alpha;
                o.zeta = zeta;
                o.a2 = a2;
                o.alpha2 = alpha2;
                o.zeta2 = zeta2;
                o.xi = xi;
                o.xi2 = xi2;
                add(std::move(o));
              }
          }
      }
    }
  }

  pd.cats.shape = x->shape;
  for (Idx c = 0; c < sh.num_objects(); ++c) {
    auto target1 = [&](Idx o) {
      const PathObj& t = pd.objs[c][o];
      PathObj im;
      im.a = t.a;
      im.alpha = sh.compose(t.alpha2, t.alpha);
      im.zeta = t.zeta;
      return pd.find(c, im);
    };
    auto target2 = [&](Idx o) {
      const PathObj& t = pd.objs[c][o];
      PathObj im;
      im.a = t.a2;
      im.alpha = t.alpha2;
      im.zeta = t.zeta2;
      return pd.find(c, im);
    };
    // reuse the tilde fiber assembly shape: identities + two collapses
    FinCat fc;
    fc.objects = FinSet(pd.objs[c].size());
    fc.identity_of.resize(pd.objs[c].size());
    for (Idx o = 0; o < pd.objs[c].size(); ++o) {
      fc.identity_of[o] = o;
      fc.arrows.push_back({o, o, "1." + std::to_string(o)});
    }
    pd.collapse_base_[c].assign(pd.objs[c].size(), kNone);
    for (Idx o = 0; o < pd.objs[c].size(); ++o) {
      if (!pd.objs[c][o].is_tuple) continue;
      pd.collapse_base_[c][o] = fc.arrows.size();
      fc.arrows.push_back({o, target1(o), "c1." + std::to_string(o)});
      fc.arrows.push_back({o, target2(o), "c2." + std::to_string(o)});
    }
    pd.cats.fiber.push_back(mk(std::move(fc)));
  }
  for (Idx gamma = 0; gamma < sh.num_arrows(); ++gamma) {
    Idx c = sh.src(gamma), c2 = sh.dst(gamma);
    Functor act;
    act.dom = pd.cats.fiber[c];
    act.cod = pd.cats.fiber[c2];
    for (const PathObj& o : pd.objs[c]) {
      PathObj im = o;
      if (o.is_tuple)
        im.alpha2 = sh.compose(gamma, o.alpha2);
      else
        im.alpha = sh.compose(gamma, o.alpha);
      act.ob.push_back(pd.find(c2, im));
    }
    act.arr.assign(pd.cats.fiber[c]->num_arrows(), kNone);
    for (Idx o = 0; o < pd.objs[c].size(); ++o) {
      act.arr[pd.cats.fiber[c]->identity(o)] =
          pd.cats.fiber[c2]->identity(act.ob[o]);
      if (pd.objs[c][o].is_tuple) {
        act.arr[pd.first_collapse(c, o)] = pd.first_collapse(c2, act.ob[o]);
        act.arr[pd.second_collapse(c, o)] = pd.second_collapse(c2, act.ob[o]);
      }
    }
    pd.cats.act.push_back(std::move(act));
  }

  // sigma, tau : path -> tilde; rho : tilde -> path
  auto make_endpoint = [&](bool use_tau) {
    CatDiagMap m;
    for (Idx c = 0; c < sh.num_objects(); ++c) {
      Functor comp;
      comp.dom = pd.cats.fiber[c];
      comp.cod = tx.cats.fiber[c];
      for (const PathObj& o : pd.objs[c]) {
        const Setoid& sa = *x->at[o.a];
        Idx pt = use_tau ? sa.tgt(o.zeta) : sa.src(o.zeta);
        if (!o.is_tuple) {
          comp.ob.push_back(tx.find(c, TildeObj::triple(o.a, o.alpha, pt)));
        } else {
          const Setoid& s2 = *x->at[o.a2];
          Idx pt2 = use_tau ? s2.tgt(o.zeta2) : s2.src(o.zeta2);
          comp.ob.push_back(tx.find(
              c, TildeObj::tuple(o.a, o.alpha, pt, o.a2, o.alpha2, pt2,
                                 use_tau ? o.xi2 : o.xi)));
        }
      }
      comp.arr.assign(pd.cats.fiber[c]->num_arrows(), kNone);
      for (Idx o = 0; o < pd.objs[c].size(); ++o) {
        comp.arr[pd.cats.fiber[c]->identity(o)] =
            tx.cats.fiber[c]->identity(comp.ob[o]);
        if (pd.objs[c][o].is_tuple) {
          comp.arr[pd.first_collapse(c, o)] = tx.first_collapse(c, comp.ob[o]);
          comp.arr[pd.second_collapse(c, o)] =
              tx.second_collapse(c, comp.ob[o]);
        }
      }
      m.at.push_back(std::move(comp));
    }
    return m;
  };
  out.sigma = make_endpoint(false);
  out.tau = make_endpoint(true);

  CatDiagMap rho;
  for (Idx c = 0; c < sh.num_objects(); ++c) {
    Functor comp;
    comp.dom = tx.cats.fiber[c];
    comp.cod = pd.cats.fiber[c];
    for (const TildeObj& o : tx.objs[c]) {
      PathObj im;
      im.a = o.a;
      im.alpha = o.alpha;
      im.zeta = x->at[o.a]->refl(o.x);
      if (o.is_tuple) {
        im.is_tuple = true;
        im.a2 = o.a2;
        im.alpha2 = o.alpha2;
        im.zeta2 = x->at[o.a2]->refl(o.x2);
        im.xi = o.xi;
        im.xi2 = o.xi;
      }
      comp.ob.push_back(pd.find(c, im));
    }
    comp.arr.assign(tx.cats.fiber[c]->num_arrows(), kNone);
    for (Idx o = 0; o < tx.objs[c].size(); ++o) {
      comp.arr[tx.cats.fiber[c]->identity(o)] =
          pd.cats.fiber[c]->identity(comp.ob[o]);
      if (tx.objs[c][o].is_tuple) {
        comp.arr[tx.first_collapse(c, o)] = pd.first_collapse(c, comp.ob[o]);
        comp.arr[tx.second_collapse(c, o)] = pd.second_collapse(c, comp.ob[o]);
      }
    }
    rho.at.push_back(std::move(comp));
  }
  out.rho = std::move(rho);
  return out;
}

// strict equality of diagram maps as table equality of finite functors
inline bool catdiagmap_equal(const CatDiagMap& f, const CatDiagMap& g) {
  if (f.at.size() != g.at.size()) return false;
  for (Idx c = 0; c < f.at.size(); ++c)
    if (f.at[c].ob != g.at[c].ob || f.at[c].arr != g.at[c].arr) return false;
  return true;
}

inline CatDiagMap compose_catdiagmap(const CatDiagMap& g, const CatDiagMap& f) {
  CatDiagMap h;
  for (Idx c = 0; c < f.at.size(); ++c)
    h.at.push_back(compose_functor(g.at[c], f.at[c]));
  return h;
}

inline CatDiagMap identity_catdiagmap(const CatDiagram& e) {
  CatDiagMap h;
  for (const auto& f : e.fiber) h.at.push_back(identity_functor(f));
  return h;
}

// ---------------------------------------------------------------------------
// Right homotopies

// theta : X~ -> pY~ with sigma theta = f~ and tau theta = g~, built from a
// witness of equality h : f ~ g
inline CatDiagMap homotopy_from_witness(const DiagMor& f, const DiagMor& g,
                                        const DiagEqWitness& h,
                                        const TildeData& tx,
                                        const PathData& py) {
  const FinCat& sh = *f.dom->shape;
  CatDiagMap out;
  for (Idx c = 0; c < sh.num_objects(); ++c) {
    Functor comp;
    comp.dom = tx.cats.fiber[c];
    comp.cod = py.cats.fiber[c];
    for (const TildeObj& o : tx.objs[c]) {
      PathObj im;
      im.a = o.a;
      im.alpha = o.alpha;
      im.zeta = h.h[o.a][o.x];
      if (o.is_tuple) {
        const Setoid& y2 = *f.cod->at[o.a2];
        im.is_tuple = true;
        im.a2 = o.a2;
        im.alpha2 = o.alpha2;
        im.zeta2 = h.h[o.a2][o.x2];
        im.xi = y2.trans(f.nat[o.alpha][o.x], f.at[o.a2].f1(o.xi));
        im.xi2 = y2.trans(g.nat[o.alpha][o.x], g.at[o.a2].f1(o.xi));
      }
      comp.ob.push_back(py.find(c, im));
    }
    comp.arr.assign(tx.cats.fiber[c]->num_arrows(), kNone);
    for (Idx o = 0; o < tx.objs[c].size(); ++o) {
      comp.arr[tx.cats.fiber[c]->identity(o)] =
          py.cats.fiber[c]->identity(comp.ob[o]);
      if (tx.objs[c][o].is_tuple) {
        comp.arr[tx.first_collapse(c, o)] = py.first_collapse(c, comp.ob[o]);
        comp.arr[tx.second_collapse(c, o)] = py.second_collapse(c, comp.ob[o]);
      }
    }
    out.at.push_back(std::move(comp));
  }
  return out;
}

// the homotopy g~ f~ ~ (gf)~ for composable representatives
inline CatDiagMap homotopy_comp(const DiagMor& f, const DiagMor& g,
                                const TildeData& tx, const PathData& pz) {
  const FinCat& sh = *f.dom->shape;
  DiagMor gf = compose_diag(g, f);
  CatDiagMap out;
  for (Idx c = 0; c < sh.num_objects(); ++c) {
    Functor comp;
    comp.dom = tx.cats.fiber[c];
    comp.cod = pz.cats.fiber[c];
    for (const TildeObj& o : tx.objs[c]) {
      const Setoid& za = *g.cod->at[o.a];
      Idx gfx = g.at[o.a].f0[f.at[o.a].f0[o.x]];
      PathObj im;
      im.a = o.a;
      im.alpha = o.alpha;
      im.zeta = za.refl(gfx);
      if (o.is_tuple) {
        const Setoid& z2 = *g.cod->at[o.a2];
        const Setoid& y2 = *f.cod->at[o.a2];
        Idx gfx2 = g.at[o.a2].f0[f.at[o.a2].f0[o.x2]];
        im.is_tuple = true;
        im.a2 = o.a2;
        im.alpha2 = o.alpha2;
        im.zeta2 = z2.refl(gfx2);
        // the witness of g~ f~ and the witness of (gf)~
        Wit fwit = y2.trans(f.nat[o.alpha][o.x], f.at[o.a2].f1(o.xi));
        im.xi = z2.trans(g.nat[o.alpha][f.at[o.a].f0[o.x]],
                         g.at[o.a2].f1(fwit));
        im.xi2 = z2.trans(gf.nat[o.alpha][o.x], gf.at[o.a2].f1(o.xi));
      }
      comp.ob.push_back(pz.find(c, im));
    }
    comp.arr.assign(tx.cats.fiber[c]->num_arrows(), kNone);
    for (Idx o = 0; o < tx.objs[c].size(); ++o) {
      comp.arr[tx.cats.fiber[c]->identity(o)] =
          pz.cats.fiber[c]->identity(comp.ob[o]);
      if (tx.objs[c][o].is_tuple) {
        comp.arr[tx.first_collapse(c, o)] = pz.first_collapse(c, comp.ob[o]);
        comp.arr[tx.second_collapse(c, o)] = pz.second_collapse(c, comp.ob[o]);
      }
    }
    out.at.push_back(std::move(comp));
  }
  return out;
}

// the homotopy (1_X)~ ~ 1_{X~}
inline CatDiagMap homotopy_id(DiagPtr x, const TildeData& tx,
                              const PathData& px) {
  const FinCat& sh = *x->shape;
  DiagMor idm = id_diagmor(x);
  CatDiagMap out;
  for (Idx c = 0; c < sh.num_objects(); ++c) {
    Functor comp;
    comp.dom = tx.cats.fiber[c];
    comp.cod = px.cats.fiber[c];
    for (const TildeObj& o : tx.objs[c]) {
      const Setoid& sa = *x->at[o.a];
      PathObj im;
      im.a = o.a;
      im.alpha = o.alpha;
      im.zeta = sa.refl(o.x);
      if (o.is_tuple) {
        const Setoid& s2 = *x->at[o.a2];
        im.is_tuple = true;
        im.a2 = o.a2;
        im.alpha2 = o.alpha2;
        im.zeta2 = s2.refl(o.x2);
        im.xi = s2.trans(idm.nat[o.alpha][o.x], o.xi);
        im.xi2 = o.xi;
      }
      comp.ob.push_back(px.find(c, im));
    }
    comp.arr.assign(tx.cats.fiber[c]->num_arrows(), kNone);
    for (Idx o = 0; o < tx.objs[c].size(); ++o) {
      comp.arr[tx.cats.fiber[c]->identity(o)] =
          px.cats.fiber[c]->identity(comp.ob[o]);
      if (tx.objs[c][o].is_tuple) {
        comp.arr[tx.first_collapse(c, o)] = px.first_collapse(c, comp.ob[o]);
        comp.arr[tx.second_collapse(c, o)] = px.second_collapse(c, comp.ob[o]);
      }
    }
    out.at.push_back(std::move(comp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// omega : (u^* X)~ -> u^* (X~)

inline CatDiagMap omega(const Functor& u, DiagPtr x, const TildeData& t_ux,
                        const TildeData& tx) {
  const FinCat& A = *u.dom;
  CatDiagMap out;
  for (Idx a = 0; a < A.num_objects(); ++a) {
    Idx c = u.ob[a];
    Functor comp;
    comp.dom = t_ux.cats.fiber[a];
    comp.cod = tx.cats.fiber[c];
    for (const TildeObj& o : t_ux.objs[a]) {
      TildeObj im = o;
      im.a = u.ob[o.a];
      im.alpha = u.arr[o.alpha];
      if (o.is_tuple) {
        im.a2 = u.ob[o.a2];
        im.alpha2 = u.arr[o.alpha2];
      }
      comp.ob.push_back(tx.find(c, im));
    }
    comp.arr.assign(t_ux.cats.fiber[a]->num_arrows(), kNone);
    for (Idx o = 0; o < t_ux.objs[a].size(); ++o) {
      comp.arr[t_ux.cats.fiber[a]->identity(o)] =
          tx.cats.fiber[c]->identity(comp.ob[o]);
      if (t_ux.objs[a][o].is_tuple) {
        comp.arr[t_ux.first_collapse(a, o)] = tx.first_collapse(c, comp.ob[o]);
        comp.arr[t_ux.second_collapse(a, o)] =
            tx.second_collapse(c, comp.ob[o]);
      }
    }
    out.at.push_back(std::move(comp));
  }
  return out;
}

}  // namespace setoids
