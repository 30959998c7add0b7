#pragma once

// Coherent A-diagrams of setoids and their witness-carrying morphisms.
//
// A coherent diagram is functorial only up to chosen equality witnesses: it
// stores a morphism representative per arrow, a reflexivity witness per
// object (X_{1a} ~ id) and a composition witness per composable pair
// (X_{a'} X_a ~ X_{a'a}). Morphisms carry per-arrow naturality witnesses.
// Equality of morphisms is the existence of a pointwise witness family, and
// everything downstream works with representatives; the quotient category is
// never materialized.

#include "setoids/setoid.hpp"

namespace setoids {

// a functor A -> FinSet, used both for embedding plain set diagrams and as
// the value category of the Set reflection
struct SetDiagram {
  CatPtr shape;
  std::vector<FinSet> at;
  std::vector<std::vector<Idx>> arrow;  // per arrow of the shape

  void validate() const {
    require(at.size() == shape->num_objects() &&
                arrow.size() == shape->num_arrows(),
            "SetDiagram: table sizes");
    for (Idx a = 0; a < arrow.size(); ++a) {
      require(arrow[a].size() == at[shape->src(a)].size,
              "SetDiagram: map size at " + shape->arrow(a).label);
      for (Idx x : arrow[a])
        require(x < at[shape->dst(a)].size, "SetDiagram: value out of range");
    }
    for (Idx o = 0; o < at.size(); ++o)
      for (Idx x = 0; x < at[o].size; ++x)
        require(arrow[shape->identity(o)][x] == x,
                "SetDiagram: identity not preserved");
    shape->for_each_composable([&](Idx g, Idx f, Idx gf) {
      for (Idx x = 0; x < at[shape->src(f)].size; ++x)
        require(arrow[g][arrow[f][x]] == arrow[gf][x],
                "SetDiagram: composition not preserved");
    });
  }
};

struct SetDiagMor {
  std::vector<std::vector<Idx>> at;

  void validate(const SetDiagram& dom, const SetDiagram& cod) const {
    require(at.size() == dom.at.size(), "SetDiagMor: component count");
    const FinCat& sh = *dom.shape;
    for (Idx o = 0; o < at.size(); ++o) {
      require(at[o].size() == dom.at[o].size, "SetDiagMor: component size");
      for (Idx x : at[o])
        require(x < cod.at[o].size, "SetDiagMor: value out of range");
    }
    for (Idx a = 0; a < sh.num_arrows(); ++a)
      for (Idx x = 0; x < dom.at[sh.src(a)].size; ++x)
        require(cod.arrow[a][at[sh.src(a)][x]] == at[sh.dst(a)][dom.arrow[a][x]],
                "SetDiagMor: naturality fails at " + sh.arrow(a).label);
  }

  bool operator==(const SetDiagMor& other) const { return at == other.at; }
};

// ---------------------------------------------------------------------------
// CoherentDiagram

struct CoherentDiagram {
  CatPtr shape;
  std::vector<SetoidPtr> at;
  std::vector<MorRep> rep;             // per arrow, including identities
  std::vector<std::vector<Wit>> refl;  // per object: s X_r = id, t X_r = X_{1a,0}
  // composition witness per composable pair, keyed like FinCat::compose(g, f)
  std::unordered_map<std::uint64_t, std::vector<Wit>> compwit;

  const std::vector<Wit>& comp_witness(Idx g, Idx f) const {
    auto it = compwit.find(pair_key(g, f));
    require(it != compwit.end(), "CoherentDiagram: missing composition witness");
    return it->second;
  }

  void validate(Idx cap = 2) const {
    const FinCat& sh = *shape;
    require(at.size() == sh.num_objects() && rep.size() == sh.num_arrows() &&
                refl.size() == sh.num_objects(),
            "CoherentDiagram: table sizes");
    for (Idx a = 0; a < rep.size(); ++a) {
      require(same_setoid(rep[a].dom, at[sh.src(a)]) &&
                  same_setoid(rep[a].cod, at[sh.dst(a)]),
              "CoherentDiagram: representative endpoints at " +
                  sh.arrow(a).label);
      rep[a].validate(cap);
    }
    for (Idx o = 0; o < at.size(); ++o) {
      require(refl[o].size() == at[o]->points(),
              "CoherentDiagram: refl witness size");
      for (Idx x = 0; x < at[o]->points(); ++x)
        require(at[o]->src(refl[o][x]) == x &&
                    at[o]->tgt(refl[o][x]) == rep[sh.identity(o)].f0[x],
                "CoherentDiagram: refl witness at " + sh.objects.label(o));
    }
    sh.for_each_composable([&](Idx g, Idx f, Idx gf) {
      const std::vector<Wit>& w = comp_witness(g, f);
      const Setoid& target = *at[sh.dst(g)];
      require(w.size() == at[sh.src(f)]->points(),
              "CoherentDiagram: comp witness size");
      for (Idx x = 0; x < w.size(); ++x)
        require(target.src(w[x]) == rep[g].f0[rep[f].f0[x]] &&
                    target.tgt(w[x]) == rep[gf].f0[x],
                "CoherentDiagram: comp witness at (" + sh.arrow(g).label +
                    ", " + sh.arrow(f).label + ") point " + std::to_string(x));
    });
  }
};

using DiagPtr = std::shared_ptr<const CoherentDiagram>;

inline DiagPtr mk(CoherentDiagram d) {
  return std::make_shared<const CoherentDiagram>(std::move(d));
}

// observable skeleton only: shapes, setoids, and the f0 components; witness
// data is proof-relevant and never compared
inline bool same_diagram(const CoherentDiagram& x, const CoherentDiagram& y) {
  if (&x == &y) return true;
  if (x.shape->num_objects() != y.shape->num_objects() ||
      x.shape->num_arrows() != y.shape->num_arrows())
    return false;
  for (Idx o = 0; o < x.at.size(); ++o)
    if (!same_setoid(x.at[o], y.at[o])) return false;
  for (Idx a = 0; a < x.rep.size(); ++a)
    if (x.rep[a].f0 != y.rep[a].f0) return false;
  return true;
}

inline bool same_diagram(const DiagPtr& x, const DiagPtr& y) {
  return x.get() == y.get() || same_diagram(*x, *y);
}

inline CoherentDiagram constant_diagram(CatPtr shape, SetoidPtr value) {
  CoherentDiagram d;
  d.shape = shape;
  d.at.assign(shape->num_objects(), value);
  d.rep.assign(shape->num_arrows(), identity_mor(value));
  std::vector<Wit> refl;
  for (Idx x = 0; x < value->points(); ++x) refl.push_back(value->refl(x));
  d.refl.assign(shape->num_objects(), refl);
  shape->for_each_composable([&](Idx g, Idx f, Idx) {
    d.compwit[pair_key(g, f)] = refl;
  });
  return d;
}

inline CoherentDiagram embed_setdiagram(const SetDiagram& F) {
  F.validate();
  CoherentDiagram d;
  d.shape = F.shape;
  for (Idx o = 0; o < F.at.size(); ++o)
    d.at.push_back(mk(discrete_setoid(F.at[o])));
  for (Idx a = 0; a < F.arrow.size(); ++a) {
    SetoidPtr dom = d.at[F.shape->src(a)], cod = d.at[F.shape->dst(a)];
    std::vector<Wit> table;
    for (const auto& p : dom->pairs)
      table.push_back(*cod->related(F.arrow[a][p.first], F.arrow[a][p.second]));
    d.rep.push_back(mor_from_table(dom, cod, F.arrow[a], std::move(table)));
  }
  for (Idx o = 0; o < F.at.size(); ++o) {
    std::vector<Wit> r;
    for (Idx x = 0; x < F.at[o].size; ++x) r.push_back(d.at[o]->refl(x));
    d.refl.push_back(std::move(r));
  }
  F.shape->for_each_composable([&](Idx g, Idx f, Idx gf) {
    std::vector<Wit> w;
    for (Idx x = 0; x < F.at[F.shape->src(f)].size; ++x)
      w.push_back(d.at[F.shape->dst(g)]->refl(F.arrow[gf][x]));
    d.compwit[pair_key(g, f)] = std::move(w);
  });
  return d;
}

// strict precomposition; (uv)* = v* u* and id* = id on the nose
inline CoherentDiagram restrict_diagram(const Functor& u,
                                        const CoherentDiagram& x) {
  require(u.cod->num_objects() == x.shape->num_objects() &&
              u.cod->num_arrows() == x.shape->num_arrows(),
          "restrict: shape mismatch");
  CoherentDiagram d;
  d.shape = u.dom;
  for (Idx a = 0; a < u.dom->num_objects(); ++a) {
    d.at.push_back(x.at[u.ob[a]]);
    d.refl.push_back(x.refl[u.ob[a]]);
  }
  for (Idx f = 0; f < u.dom->num_arrows(); ++f) d.rep.push_back(x.rep[u.arr[f]]);
  u.dom->for_each_composable([&](Idx g, Idx f, Idx) {
    d.compwit[pair_key(g, f)] = x.comp_witness(u.arr[g], u.arr[f]);
  });
  return d;
}

// ---------------------------------------------------------------------------
// DiagMor

struct DiagMor {
  DiagPtr dom, cod;
  std::vector<MorRep> at;
  std::vector<std::vector<Wit>> nat;  // per arrow: f_alpha : X_{a,0} -> Y_{a',1}

  void validate(Idx cap = 2) const {
    const FinCat& sh = *dom->shape;
    require(at.size() == sh.num_objects() && nat.size() == sh.num_arrows(),
            "DiagMor: table sizes");
    for (Idx o = 0; o < at.size(); ++o) {
      require(same_setoid(at[o].dom, dom->at[o]) &&
                  same_setoid(at[o].cod, cod->at[o]),
              "DiagMor: component endpoints");
      at[o].validate(cap);
    }
    for (Idx a = 0; a < sh.num_arrows(); ++a) {
      Idx s = sh.src(a), t = sh.dst(a);
      require(nat[a].size() == dom->at[s]->points(), "DiagMor: nat size");
      for (Idx x = 0; x < nat[a].size(); ++x)
        require(cod->at[t]->src(nat[a][x]) == cod->rep[a].f0[at[s].f0[x]] &&
                    cod->at[t]->tgt(nat[a][x]) == at[t].f0[dom->rep[a].f0[x]],
                "DiagMor: naturality witness at " + sh.arrow(a).label);
    }
  }
};

inline DiagMor id_diagmor(DiagPtr x) {
  DiagMor f;
  f.dom = f.cod = x;
  for (Idx o = 0; o < x->at.size(); ++o) f.at.push_back(identity_mor(x->at[o]));
  for (Idx a = 0; a < x->shape->num_arrows(); ++a) {
    std::vector<Wit> w;
    const Setoid& target = *x->at[x->shape->dst(a)];
    for (Idx p = 0; p < x->at[x->shape->src(a)]->points(); ++p)
      w.push_back(target.refl(x->rep[a].f0[p]));
    f.nat.push_back(std::move(w));
  }
  return f;
}

// componentwise composition; naturality witnesses are combined with
// left-associated m: (gf)_alpha(x) = m(g_alpha(f_a0 x), g_{a',1}(f_alpha x))
inline DiagMor compose_diag(const DiagMor& g, const DiagMor& f) {
  require(same_diagram(f.cod, g.dom), "compose_diag: middle mismatch");
  DiagMor h;
  h.dom = f.dom;
  h.cod = g.cod;
  for (Idx o = 0; o < f.at.size(); ++o)
    h.at.push_back(compose_mor(g.at[o], f.at[o]));
  const FinCat& sh = *f.dom->shape;
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    Idx s = sh.src(a), t = sh.dst(a);
    const Setoid& target = *g.cod->at[t];
    std::vector<Wit> w;
    for (Idx x = 0; x < f.nat[a].size(); ++x)
      w.push_back(target.trans(g.nat[a][f.at[s].f0[x]],
                               g.at[t].f1(f.nat[a][x])));
    h.nat.push_back(std::move(w));
  }
  return h;
}

// the 2-functor structure: a natural transformation mu : u => v acts on a
// diagram over the common codomain by the representatives X_{mu_a}, with the
// naturality witness assembled from two composition witnesses of X
inline DiagMor whisker(const NatTrans& mu, const CoherentDiagram& x) {
  const Functor& u = mu.dom;
  const Functor& v = mu.cod;
  require(u.cod->num_objects() == x.shape->num_objects() &&
              u.cod->num_arrows() == x.shape->num_arrows(),
          "whisker: shape mismatch");
  DiagMor f;
  f.dom = mk(restrict_diagram(u, x));
  f.cod = mk(restrict_diagram(v, x));
  const FinCat& a_cat = *u.dom;
  for (Idx a = 0; a < a_cat.num_objects(); ++a)
    f.at.push_back(x.rep[mu.component[a]]);
  for (Idx al = 0; al < a_cat.num_arrows(); ++al) {
    Idx a = a_cat.src(al), a2 = a_cat.dst(al);
    const Setoid& target = *x.at[v.ob[a2]];
    const std::vector<Wit>& w1 = x.comp_witness(v.arr[al], mu.component[a]);
    const std::vector<Wit>& w2 = x.comp_witness(mu.component[a2], u.arr[al]);
    std::vector<Wit> w;
    for (Idx p = 0; p < x.at[u.ob[a]]->points(); ++p)
      w.push_back(target.trans(w1[p], target.sym(w2[p])));
    f.nat.push_back(std::move(w));
  }
  return f;
}

// strict restriction of a morphism along a functor into the shape
inline DiagMor restrict_mor(const Functor& u, const DiagMor& f) {
  DiagMor g;
  g.dom = mk(restrict_diagram(u, *f.dom));
  g.cod = mk(restrict_diagram(u, *f.cod));
  for (Idx a = 0; a < u.dom->num_objects(); ++a) g.at.push_back(f.at[u.ob[a]]);
  for (Idx al = 0; al < u.dom->num_arrows(); ++al)
    g.nat.push_back(f.nat[u.arr[al]]);
  return g;
}

// ---------------------------------------------------------------------------
// Equality and isomorphism of diagram morphisms

struct DiagEqWitness {
  std::vector<std::vector<Wit>> h;  // per object: s h_a = f_{a,0}, t h_a = g_{a,0}
};

inline void validate_diag_eq(const DiagMor& f, const DiagMor& g,
                             const DiagEqWitness& w) {
  for (Idx o = 0; o < f.at.size(); ++o) {
    require(w.h[o].size() == f.dom->at[o]->points(), "DiagEqWitness: size");
    for (Idx x = 0; x < w.h[o].size(); ++x)
      require(f.cod->at[o]->src(w.h[o][x]) == f.at[o].f0[x] &&
                  f.cod->at[o]->tgt(w.h[o][x]) == g.at[o].f0[x],
              "DiagEqWitness: not over (f, g)");
  }
}

inline std::optional<DiagEqWitness> equal_diag(const DiagMor& f,
                                               const DiagMor& g) {
  require(same_diagram(f.dom, g.dom) && same_diagram(f.cod, g.cod),
          "equal_diag: not parallel");
  DiagEqWitness w;
  for (Idx o = 0; o < f.at.size(); ++o) {
    std::vector<Wit> h;
    for (Idx x = 0; x < f.dom->at[o]->points(); ++x) {
      auto r = f.cod->at[o]->related(f.at[o].f0[x], g.at[o].f0[x]);
      if (!r) return std::nullopt;
      h.push_back(std::move(*r));
    }
    w.h.push_back(std::move(h));
  }
  return w;
}

struct DiagIsoWitness {
  DiagMor inverse;
  std::vector<std::vector<Wit>> h;  // per object: g f ~ id
  std::vector<std::vector<Wit>> k;  // per object: f g ~ id
};

using DiagIso = Verdict<DiagIsoWitness>;

// Pointwise invertibility suffices: from chosen pointwise inverses and
// round-trip witnesses h_a, k_a, a naturality witness for the inverse is
// assembled, making it a genuine morphism of coherent diagrams.
inline DiagIso is_iso_diag(const DiagMor& f) {
  DiagIso out;
  std::vector<MorIsoWitness> comp;
  for (Idx o = 0; o < f.at.size(); ++o) {
    MorIso m = is_iso(f.at[o]);
    if (!m.holds) {
      out.detail = "component at object " + f.dom->shape->objects.label(o) +
                   " is not invertible: " + m.detail;
      return out;
    }
    comp.push_back(std::move(*m.witness));
  }
  const FinCat& sh = *f.dom->shape;
  DiagMor g;
  g.dom = f.cod;
  g.cod = f.dom;
  for (auto& c : comp) g.at.push_back(c.inverse);
  for (Idx al = 0; al < sh.num_arrows(); ++al) {
    Idx a = sh.src(al), a2 = sh.dst(al);
    const Setoid& x2 = *f.dom->at[a2];  // X_{a'}
    std::vector<Wit> w;
    for (Idx y = 0; y < f.cod->at[a]->points(); ++y) {
      Idx gy = g.at[a].f0[y];
      Idx xagy = f.dom->rep[al].f0[gy];
      Wit w1 = x2.sym(comp[a2].h[xagy]);
      Wit w2 = g.at[a2].f1(f.cod->at[a2]->sym(f.nat[al][gy]));
      Wit w3 = g.at[a2].f1(f.cod->rep[al].f1(comp[a].k[y]));
      w.push_back(x2.trans(x2.trans(w1, w2), w3));
    }
    g.nat.push_back(std::move(w));
  }
  DiagIsoWitness wit;
  wit.inverse = std::move(g);
  for (auto& c : comp) {
    wit.h.push_back(std::move(c.h));
    wit.k.push_back(std::move(c.k));
  }
  out.holds = true;
  out.witness = std::move(wit);
  return out;
}

// ---------------------------------------------------------------------------
// Finite limits in Eex(1): pullbacks and binary products of diagrams

struct PullbackEex {
  SetoidPtr P;              // tabular
  MorRep to_x, to_y;        // projections
  std::vector<std::tuple<Idx, Idx, Wit>> triples;  // (x, y, zeta)
  MorRep f, g;              // the cospan, for the factorizer

  // factor a cone (u : W -> X, w : W -> Y, witness eta : f u ~ g w) through P
  MorRep factorize(const MorRep& u, const MorRep& w,
                   const std::vector<Wit>& eta) const;
};

namespace detail {
inline Idx find_triple(const std::vector<std::tuple<Idx, Idx, Wit>>& ts, Idx x,
                       Idx y, const Wit& z) {
  for (Idx i = 0; i < ts.size(); ++i)
    if (std::get<0>(ts[i]) == x && std::get<1>(ts[i]) == y &&
        wit_eq(std::get<2>(ts[i]), z))
      return i;
  fail("pullback: triple not found");
}
}  // namespace detail

// P0 = (X0 x Y0) x_{Z0 x Z0} Z1 and P1 = (P0 x P0) x_{X0^2 x Y0^2} (X1 x Y1);
// exact for finite witness carriers (tabular/relational components)
inline PullbackEex pullback_eex(const MorRep& f, const MorRep& g,
                                Idx cap = kDefaultWordCap) {
  require(same_setoid(f.cod, g.cod), "pullback_eex: codomain mismatch");
  const Setoid& X = *f.dom;
  const Setoid& Y = *g.dom;
  const Setoid& Z = *f.cod;
  require(X.rep != Setoid::Rep::free && Y.rep != Setoid::Rep::free,
          "pullback_eex: finite witness carriers required");
  PullbackEex out;
  out.f = f;
  out.g = g;
  for (Idx x = 0; x < X.points(); ++x)
    for (Idx y = 0; y < Y.points(); ++y)
      for (Wit& z : Z.witnesses_between(f.f0[x], g.f0[y], cap))
        out.triples.push_back({x, y, std::move(z)});

  Setoid P;
  P.rep = Setoid::Rep::tabular;
  P.carrier = FinSet(out.triples.size());
  std::vector<std::tuple<Idx, Idx, Wit, Wit>> wits;  // (p, p', xi, upsilon)
  for (Idx p = 0; p < out.triples.size(); ++p)
    for (Idx p2 = 0; p2 < out.triples.size(); ++p2)
      for (const Wit& xi : X.witnesses_between(std::get<0>(out.triples[p]),
                                               std::get<0>(out.triples[p2]),
                                               cap))
        for (const Wit& up : Y.witnesses_between(std::get<1>(out.triples[p]),
                                                 std::get<1>(out.triples[p2]),
                                                 cap))
          wits.push_back({p, p2, xi, up});
  auto find_wit = [&](Idx p, Idx p2, const Wit& xi, const Wit& up) -> Idx {
    for (Idx i = 0; i < wits.size(); ++i)
      if (std::get<0>(wits[i]) == p && std::get<1>(wits[i]) == p2 &&
          wit_eq(std::get<2>(wits[i]), xi) && wit_eq(std::get<3>(wits[i]), up))
        return i;
    fail("pullback: witness not found");
  };
  P.wit_carrier = FinSet(wits.size());
  for (const auto& [p, p2, xi, up] : wits) {
    P.s_table.push_back(p);
    P.t_table.push_back(p2);
  }
  for (Idx p = 0; p < out.triples.size(); ++p)
    P.r_table.push_back(find_wit(p, p, X.refl(std::get<0>(out.triples[p])),
                                 Y.refl(std::get<1>(out.triples[p]))));
  for (const auto& [p, p2, xi, up] : wits)
    P.v_table.push_back(find_wit(p2, p, X.sym(xi), Y.sym(up)));
  for (Idx i = 0; i < wits.size(); ++i)
    for (Idx j = 0; j < wits.size(); ++j) {
      if (std::get<1>(wits[i]) != std::get<0>(wits[j])) continue;
      P.m_table[pair_key(i, j)] =
          find_wit(std::get<0>(wits[i]), std::get<1>(wits[j]),
                   X.trans(std::get<2>(wits[i]), std::get<2>(wits[j])),
                   Y.trans(std::get<3>(wits[i]), std::get<3>(wits[j])));
    }
  out.P = mk(std::move(P));

  out.to_x.dom = out.P;
  out.to_x.cod = f.dom;
  for (const auto& [x, y, z] : out.triples) out.to_x.f0.push_back(x);
  out.to_x.f1 = [ws = wits](const Wit& w) { return std::get<2>(ws.at(w.index())); };
  out.to_y.dom = out.P;
  out.to_y.cod = g.dom;
  for (const auto& [x, y, z] : out.triples) out.to_y.f0.push_back(y);
  out.to_y.f1 = [ws = wits](const Wit& w) { return std::get<3>(ws.at(w.index())); };
  return out;
}

inline MorRep PullbackEex::factorize(const MorRep& u, const MorRep& w,
                                     const std::vector<Wit>& eta) const {
  // eta[p] must witness f(u p) ~ g(w p)
  MorRep h;
  h.dom = u.dom;
  h.cod = P;
  for (Idx p = 0; p < u.f0.size(); ++p) {
    require(f.cod->src(eta[p]) == f.f0[u.f0[p]] &&
                f.cod->tgt(eta[p]) == g.f0[w.f0[p]],
            "pullback factorize: bad cone witness");
    h.f0.push_back(detail::find_triple(triples, u.f0[p], w.f0[p], eta[p]));
  }
  // a cone witness psi is sent to (h0 s psi, h0 t psi, u1 psi, w1 psi),
  // located in the witness table via the projections
  h.f1 = [u1 = u.f1, w1 = w.f1, udom = u.dom, h0 = h.f0, Pp = P,
          tox = to_x.f1, toy = to_y.f1](const Wit& ps) {
    Idx p = h0[udom->src(ps)], p2 = h0[udom->tgt(ps)];
    Wit xi = u1(ps), up = w1(ps);
    for (Idx i = 0; i < Pp->wit_carrier.size; ++i)
      if (Pp->s_table[i] == p && Pp->t_table[i] == p2 &&
          wit_eq(tox(Wit(i)), xi) && wit_eq(toy(Wit(i)), up))
        return Wit(i);
    fail("pullback factorize: witness not found");
  };
  return h;
}

// pointwise binary product of coherent diagrams with its projections
struct ProductDiag {
  DiagPtr prod;
  DiagMor pi1, pi2;
};

inline ProductDiag product_diag(DiagPtr x, DiagPtr y) {
  require(x->shape->num_objects() == y->shape->num_objects() &&
              x->shape->num_arrows() == y->shape->num_arrows(),
          "product_diag: shape mismatch");
  const FinCat& sh = *x->shape;
  CoherentDiagram d;
  d.shape = x->shape;
  for (Idx o = 0; o < sh.num_objects(); ++o)
    d.at.push_back(mk(product_setoid(x->at[o], y->at[o])));
  for (Idx a = 0; a < sh.num_arrows(); ++a)
    d.rep.push_back(product_mor(d.at[sh.src(a)], d.at[sh.dst(a)], x->rep[a],
                                y->rep[a]));
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    std::vector<Wit> r;
    Idx nr = y->at[o]->points();
    for (Idx p = 0; p < d.at[o]->points(); ++p)
      r.push_back(Wit(x->refl[o][p / nr], y->refl[o][p % nr]));
    d.refl.push_back(std::move(r));
  }
  sh.for_each_composable([&](Idx g, Idx f, Idx) {
    const auto& wx = x->comp_witness(g, f);
    const auto& wy = y->comp_witness(g, f);
    std::vector<Wit> w;
    Idx nr = y->at[sh.src(f)]->points();
    for (Idx p = 0; p < d.at[sh.src(f)]->points(); ++p)
      w.push_back(Wit(wx[p / nr], wy[p % nr]));
    d.compwit[pair_key(g, f)] = std::move(w);
  });
  ProductDiag out;
  out.prod = mk(std::move(d));
  auto proj = [&](bool left_side, DiagPtr target) {
    DiagMor p;
    p.dom = out.prod;
    p.cod = target;
    for (Idx o = 0; o < sh.num_objects(); ++o)
      p.at.push_back(left_side ? proj_left(out.prod->at[o])
                               : proj_right(out.prod->at[o]));
    for (Idx a = 0; a < sh.num_arrows(); ++a) {
      std::vector<Wit> w;
      const Setoid& tgt = *target->at[sh.dst(a)];
      for (Idx pt = 0; pt < out.prod->at[sh.src(a)]->points(); ++pt)
        w.push_back(tgt.refl(p.at[sh.dst(a)].f0[out.prod->rep[a].f0[pt]]));
      p.nat.push_back(std::move(w));
    }
    return p;
  };
  out.pi1 = proj(true, x);
  out.pi2 = proj(false, y);
  return out;
}

// pairing <f, g> : W -> X x Y of diagram morphisms into a product
inline DiagMor pair_diag(const ProductDiag& p, const DiagMor& f,
                         const DiagMor& g) {
  DiagMor h;
  h.dom = f.dom;
  h.cod = p.prod;
  const FinCat& sh = *f.dom->shape;
  for (Idx o = 0; o < sh.num_objects(); ++o)
    h.at.push_back(pair_mor(p.prod->at[o], f.at[o], g.at[o]));
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    std::vector<Wit> w;
    for (Idx x = 0; x < f.nat[a].size(); ++x)
      w.push_back(Wit(f.nat[a][x], g.nat[a][x]));
    h.nat.push_back(std::move(w));
  }
  return h;
}

// ---------------------------------------------------------------------------
// Search-based constructors (corpus building and tests)

inline std::optional<DiagMor> diag_mor_auto(DiagPtr x, DiagPtr y,
                                            std::vector<std::vector<Idx>> f0,
                                            Idx cap = 2) {
  DiagMor f;
  f.dom = x;
  f.cod = y;
  const FinCat& sh = *x->shape;
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    auto m = mor_auto(x->at[o], y->at[o], f0[o], cap);
    if (!m) return std::nullopt;
    f.at.push_back(std::move(*m));
  }
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    Idx s = sh.src(a), t = sh.dst(a);
    std::vector<Wit> w;
    for (Idx p = 0; p < x->at[s]->points(); ++p) {
      auto r = y->at[t]->related(y->rep[a].f0[f0[s][p]],
                                 f0[t][x->rep[a].f0[p]]);
      if (!r) return std::nullopt;
      w.push_back(std::move(*r));
    }
    f.nat.push_back(std::move(w));
  }
  return f;
}

// build a coherent diagram from per-object setoids and per-arrow object maps,
// deriving representatives and all witnesses by search
inline std::optional<CoherentDiagram> coherent_auto(
    CatPtr shape, std::vector<SetoidPtr> at,
    std::vector<std::vector<Idx>> maps, Idx cap = 2) {
  require(maps.size() == shape->num_arrows(),
          "coherent_auto: one object map per arrow (identities included)");
  CoherentDiagram d;
  d.shape = shape;
  d.at = std::move(at);
  for (Idx a = 0; a < shape->num_arrows(); ++a) {
    auto m = mor_auto(d.at[shape->src(a)], d.at[shape->dst(a)], maps[a], cap);
    if (!m) return std::nullopt;
    d.rep.push_back(std::move(*m));
  }
  for (Idx o = 0; o < d.at.size(); ++o) {
    std::vector<Wit> r;
    for (Idx x = 0; x < d.at[o]->points(); ++x) {
      auto w = d.at[o]->related(x, d.rep[shape->identity(o)].f0[x]);
      if (!w) return std::nullopt;
      r.push_back(std::move(*w));
    }
    d.refl.push_back(std::move(r));
  }
  bool ok = true;
  shape->for_each_composable([&](Idx g, Idx f, Idx gf) {
    if (!ok) return;
    std::vector<Wit> w;
    const Setoid& tgt = *d.at[shape->dst(g)];
    for (Idx x = 0; x < d.at[shape->src(f)]->points(); ++x) {
      auto r = tgt.related(d.rep[g].f0[d.rep[f].f0[x]], d.rep[gf].f0[x]);
      if (!r) {
        ok = false;
        return;
      }
      w.push_back(std::move(*r));
    }
    d.compwit[pair_key(g, f)] = std::move(w);
  });
  if (!ok) return std::nullopt;
  return d;
}

// ---------------------------------------------------------------------------
// The quotient functor into Set diagrams

inline SetDiagram quotient_diagram(const CoherentDiagram& x) {
  SetDiagram q;
  q.shape = x.shape;
  std::vector<Partition> parts;
  for (const auto& s : x.at) {
    parts.push_back(s->quotient());
    q.at.push_back(parts.back().classes);
  }
  for (Idx a = 0; a < x.rep.size(); ++a) {
    Idx s = x.shape->src(a), t = x.shape->dst(a);
    std::vector<Idx> m;
    for (Idx c = 0; c < parts[s].classes.size; ++c)
      m.push_back(parts[t].class_of[x.rep[a].f0[parts[s].rep_of[c]]]);
    q.arrow.push_back(std::move(m));
  }
  return q;
}

inline SetDiagMor quotient_mor(const DiagMor& f) {
  SetDiagMor q;
  for (Idx o = 0; o < f.at.size(); ++o) {
    Partition pd = f.dom->at[o]->quotient();
    Partition pc = f.cod->at[o]->quotient();
    std::vector<Idx> m;
    for (Idx c = 0; c < pd.classes.size; ++c)
      m.push_back(pc.class_of[f.at[o].f0[pd.rep_of[c]]]);
    q.at.push_back(std::move(m));
  }
  return q;
}

}  // namespace setoids
