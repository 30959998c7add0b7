#pragma once

// The derivator structure of coherent diagrams: limits and colimits by the
// explicit equalizer/free-generation formulas, pointwise Kan extensions over
// comma categories, adjunction units/counits on representatives, canonical
// mates, and the discrete fast paths used as cross-checks.

#include "setoids/coherent.hpp"

namespace setoids {

// whether the witness carrier is finite and fully enumerated by witnesses(0)
inline bool finite_witnesses(const Setoid& s) {
  switch (s.rep) {
    case Setoid::Rep::tabular:
    case Setoid::Rep::relational: return true;
    case Setoid::Rep::free: return false;
    case Setoid::Rep::product:
      return finite_witnesses(*s.left) && finite_witnesses(*s.right);
  }
  return false;
}

namespace detail {

// odometer over mixed radices; returns false when exhausted
inline bool first_odometer(std::vector<Idx>& idx, const std::vector<Idx>& sizes) {
  idx.assign(sizes.size(), 0);
  for (Idx s : sizes)
    if (s == 0) return false;
  return true;
}

inline bool next_odometer(std::vector<Idx>& idx, const std::vector<Idx>& sizes) {
  for (Idx i = 0; i < idx.size(); ++i) {
    if (++idx[i] < sizes[i]) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Limits: L0 is the equalizer of the parallel pair into prod_{alpha} (Y_{a',0}
// x Y_{a',0}), i.e. the set of families (y_a) together with witnesses
// eta_alpha : Y_{alpha,0}(y_a) ~ y_{a'}; L1 pairs two such families with a
// per-object witness.

struct ConePoint {
  std::vector<Idx> y;    // per object of the shape
  std::vector<Wit> eta;  // per arrow of the shape
};

struct LimitData {
  CatPtr shape;
  DiagPtr diagram;
  SetoidPtr L;  // tabular
  std::vector<ConePoint> pts;
  std::vector<std::tuple<Idx, Idx, std::vector<Wit>>> wits;
  DiagMor counit;  // p* L -> Y

  Idx find_point(const std::vector<Idx>& y, const std::vector<Wit>& eta) const {
    for (Idx i = 0; i < pts.size(); ++i) {
      if (pts[i].y != y) continue;
      bool ok = true;
      for (Idx a = 0; a < eta.size() && ok; ++a)
        ok = wit_eq(pts[i].eta[a], eta[a]);
      if (ok) return i;
    }
    fail("limit: cone point not found (witness outside enumeration?)");
  }

  Idx find_wit(Idx l, Idx l2, const std::vector<Wit>& zeta) const {
    for (Idx i = 0; i < wits.size(); ++i) {
      if (std::get<0>(wits[i]) != l || std::get<1>(wits[i]) != l2) continue;
      bool ok = true;
      const auto& zs = std::get<2>(wits[i]);
      for (Idx a = 0; a < zs.size() && ok; ++a) ok = wit_eq(zs[a], zeta[a]);
      if (ok) return i;
    }
    fail("limit: witness not found");
  }

  // factor f : p* X -> Y through the limit (x is the apex setoid; the
  // shape may be empty, in which case f carries no components)
  MorRep factorize(SetoidPtr x, const DiagMor& f) const {
    const FinCat& sh = *shape;
    MorRep h;
    h.dom = std::move(x);
    h.cod = L;
    for (Idx x = 0; x < h.dom->points(); ++x) {
      std::vector<Idx> y;
      std::vector<Wit> eta;
      for (Idx o = 0; o < sh.num_objects(); ++o) y.push_back(f.at[o].f0[x]);
      for (Idx a = 0; a < sh.num_arrows(); ++a) eta.push_back(f.nat[a][x]);
      h.f0.push_back(find_point(y, eta));
    }
    auto ats = f.at;
    h.f1 = [self = *this, ats, h0 = h.f0, dom = h.dom](const Wit& psi) {
      std::vector<Wit> zeta;
      for (const auto& comp : ats) zeta.push_back(comp.f1(psi));
      return Wit(self.find_wit(h0[dom->src(psi)], h0[dom->tgt(psi)], zeta));
    };
    return h;
  }

  // the equality witness fbar ~ g for any g with counit . p*(g) ~ f;
  // weq must be a witness of equal_diag(compose(counit, p*(g)), f)
  std::vector<Wit> uniqueness(const DiagMor& f, const MorRep& g,
                              const DiagEqWitness& weq) const {
    MorRep fbar = factorize(g.dom, f);
    std::vector<Wit> h;
    for (Idx x = 0; x < g.dom->points(); ++x) {
      std::vector<Wit> zeta;
      for (Idx o = 0; o < shape->num_objects(); ++o)
        zeta.push_back(diagram->at[o]->sym(weq.h[o][x]));
      h.push_back(Wit(find_wit(fbar.f0[x], g.f0[x], zeta)));
    }
    return h;
  }
};

inline LimitData limit_over(CatPtr shape, DiagPtr y, Idx cap = kDefaultWordCap) {
  const FinCat& sh = *shape;
  // the equalizer formula consumes honest finite setoids; a free witness
  // carrier is infinite and the cone-point table could not be m-closed
  for (const auto& s : y->at)
    require(finite_witnesses(*s),
            "limit_over: value setoid with unenumerable witnesses");
  LimitData out;
  out.shape = shape;
  out.diagram = y;

  // enumerate cone points
  std::vector<Idx> obj_sizes;
  for (const auto& s : y->at) obj_sizes.push_back(s->points());
  std::vector<Idx> ytuple;
  if (detail::first_odometer(ytuple, obj_sizes)) {
    do {
      std::vector<std::vector<Wit>> choices(sh.num_arrows());
      bool possible = true;
      for (Idx a = 0; a < sh.num_arrows() && possible; ++a) {
        choices[a] = y->at[sh.dst(a)]->witnesses_between(
            y->rep[a].f0[ytuple[sh.src(a)]], ytuple[sh.dst(a)], cap);
        possible = !choices[a].empty();
      }
      if (!possible) continue;
      std::vector<Idx> pick, sizes;
      for (const auto& c : choices) sizes.push_back(c.size());
      if (!detail::first_odometer(pick, sizes)) continue;
      do {
        ConePoint p;
        p.y = ytuple;
        for (Idx a = 0; a < sh.num_arrows(); ++a)
          p.eta.push_back(choices[a][pick[a]]);
        out.pts.push_back(std::move(p));
      } while (detail::next_odometer(pick, sizes));
    } while (detail::next_odometer(ytuple, obj_sizes));
  }

  // enumerate witnesses between cone points
  for (Idx l = 0; l < out.pts.size(); ++l)
    for (Idx l2 = 0; l2 < out.pts.size(); ++l2) {
      std::vector<std::vector<Wit>> choices(sh.num_objects());
      bool possible = true;
      for (Idx o = 0; o < sh.num_objects() && possible; ++o) {
        choices[o] = y->at[o]->witnesses_between(out.pts[l].y[o],
                                                 out.pts[l2].y[o], cap);
        possible = !choices[o].empty();
      }
      if (!possible) continue;
      std::vector<Idx> pick, sizes;
      for (const auto& c : choices) sizes.push_back(c.size());
      if (!detail::first_odometer(pick, sizes)) continue;
      do {
        std::vector<Wit> zeta;
        for (Idx o = 0; o < sh.num_objects(); ++o)
          zeta.push_back(choices[o][pick[o]]);
        out.wits.push_back({l, l2, std::move(zeta)});
      } while (detail::next_odometer(pick, sizes));
    }

  // assemble the tabular setoid
  Setoid L;
  L.rep = Setoid::Rep::tabular;
  L.carrier = FinSet(out.pts.size());
  L.wit_carrier = FinSet(out.wits.size());
  for (const auto& [l, l2, zeta] : out.wits) {
    L.s_table.push_back(l);
    L.t_table.push_back(l2);
  }
  auto refl_family = [&](Idx l) {
    std::vector<Wit> zeta;
    for (Idx o = 0; o < sh.num_objects(); ++o)
      zeta.push_back(y->at[o]->refl(out.pts[l].y[o]));
    return zeta;
  };
  for (Idx l = 0; l < out.pts.size(); ++l)
    L.r_table.push_back(out.find_wit(l, l, refl_family(l)));
  for (const auto& [l, l2, zeta] : out.wits) {
    std::vector<Wit> sz;
    for (Idx o = 0; o < sh.num_objects(); ++o) sz.push_back(y->at[o]->sym(zeta[o]));
    L.v_table.push_back(out.find_wit(l2, l, sz));
  }
  for (Idx i = 0; i < out.wits.size(); ++i)
    for (Idx j = 0; j < out.wits.size(); ++j) {
      if (std::get<1>(out.wits[i]) != std::get<0>(out.wits[j])) continue;
      std::vector<Wit> mz;
      for (Idx o = 0; o < sh.num_objects(); ++o)
        mz.push_back(y->at[o]->trans(std::get<2>(out.wits[i])[o],
                                     std::get<2>(out.wits[j])[o]));
      L.m_table[pair_key(i, j)] = out.find_wit(std::get<0>(out.wits[i]),
                                               std::get<1>(out.wits[j]), mz);
    }
  out.L = mk(std::move(L));

  // counit p* L -> Y: plain projections
  out.counit.dom = mk(constant_diagram(shape, out.L));
  out.counit.cod = y;
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    MorRep pr;
    pr.dom = out.L;
    pr.cod = y->at[o];
    for (const auto& p : out.pts) pr.f0.push_back(p.y[o]);
    pr.f1 = [ws = out.wits, o](const Wit& w) {
      return std::get<2>(ws.at(w.index()))[o];
    };
    out.counit.at.push_back(std::move(pr));
  }
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    std::vector<Wit> nat;
    for (const auto& p : out.pts) nat.push_back(p.eta[a]);
    out.counit.nat.push_back(std::move(nat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Colimits: C0 is the coproduct of the carriers; C1 is freely generated by
// triples (x, x', xi) over each arrow, xi witnessing X_{alpha,0}(x) ~ x'.
// For free diagram values, parallel generators are collapsed onto the
// canonical (shortest) witness; the generated relation is unchanged.

struct ColimitGen {
  Idx alpha = 0, x = 0, xp = 0;
  Wit xi;
};

struct ColimitData {
  CatPtr shape;
  DiagPtr diagram;
  SetoidPtr C;  // free
  std::vector<Idx> offset;                // per object
  std::vector<std::pair<Idx, Idx>> c0_of; // point -> (object, element)
  std::vector<ColimitGen> gens;           // aligned with C->edges
  DiagMor unit;                           // X -> p* C

  Idx inj(Idx a, Idx x) const { return offset[a] + x; }

  Idx find_gen(Idx alpha, Idx x, Idx xp, const Wit* xi) const {
    for (Idx e = 0; e < gens.size(); ++e)
      if (gens[e].alpha == alpha && gens[e].x == x && gens[e].xp == xp &&
          (xi == nullptr || wit_eq(gens[e].xi, *xi)))
        return e;
    fail("colimit: generator not found");
  }

  // factor f : X -> p* Y through the colimit (y is the target setoid)
  MorRep factorize(SetoidPtr y, const DiagMor& f) const {
    std::vector<Idx> f0(C->points());
    for (Idx p = 0; p < C->points(); ++p)
      f0[p] = f.at[c0_of[p].first].f0[c0_of[p].second];
    std::vector<Wit> imgs;
    const FinCat& sh = *shape;
    for (const auto& g : gens) {
      Idx a2 = sh.dst(g.alpha);
      imgs.push_back(y->trans(f.nat[g.alpha][g.x], f.at[a2].f1(g.xi)));
    }
    return free_extend(C, y, std::move(f0), std::move(imgs));
  }

  // the equality witness fbar ~ g for any g : C -> Y with p*(g) . unit ~ f;
  // weq must witness equal_diag(compose(p*(g), unit), f)
  std::vector<Wit> uniqueness(const MorRep& g, const DiagEqWitness& weq) const {
    std::vector<Wit> h;
    for (Idx p = 0; p < C->points(); ++p)
      h.push_back(g.cod->sym(weq.h[c0_of[p].first][c0_of[p].second]));
    return h;
  }
};

inline ColimitData colimit_over(CatPtr shape, DiagPtr x,
                                Idx cap = kDefaultWordCap) {
  const FinCat& sh = *shape;
  ColimitData out;
  out.shape = shape;
  out.diagram = x;

  FinSet c0;
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    out.offset.push_back(c0.size);
    for (Idx p = 0; p < x->at[o]->points(); ++p) {
      c0.labels.push_back(sh.objects.label(o) + "." + x->at[o]->carrier.label(p));
      out.c0_of.push_back({o, p});
    }
    c0.size += x->at[o]->points();
  }

  std::vector<std::pair<Idx, Idx>> edges;
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    Idx s = sh.src(a), t = sh.dst(a);
    const Setoid& tgt = *x->at[t];
    for (Idx p = 0; p < x->at[s]->points(); ++p) {
      Idx image = x->rep[a].f0[p];
      if (tgt.rep == Setoid::Rep::free) {
        for (Idx q = 0; q < tgt.points(); ++q) {
          auto xi = tgt.related(image, q);
          if (!xi) continue;
          out.gens.push_back({a, p, q, std::move(*xi)});
          edges.push_back({out.inj(s, p), out.inj(t, q)});
        }
      } else {
        require(finite_witnesses(tgt),
                "colimit_over: value setoid with unenumerable witnesses");
        for (const Wit& xi : tgt.witnesses(0)) {
          if (tgt.src(xi) != image) continue;
          Idx q = tgt.tgt(xi);
          out.gens.push_back({a, p, q, xi});
          edges.push_back({out.inj(s, p), out.inj(t, q)});
        }
      }
    }
  }
  out.C = mk(free_setoid(std::move(c0), std::move(edges)));

  // unit X -> p* C
  out.unit.dom = x;
  out.unit.cod = mk(constant_diagram(shape, out.C));
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    MorRep m;
    m.dom = x->at[o];
    m.cod = out.C;
    for (Idx p = 0; p < x->at[o]->points(); ++p) m.f0.push_back(out.inj(o, p));
    Idx ido = sh.identity(o);
    if (x->at[o]->rep == Setoid::Rep::free) {
      // each generating edge of X_o maps to the canonical colimit generator
      // over the identity arrow with the same endpoints
      std::vector<Wit> imgs;
      for (const auto& [ex, ey] : x->at[o]->edges) {
        Idx e = out.find_gen(ido, ex, ey, nullptr);
        imgs.push_back(Wit(Word{out.inj(o, ex), {{e, true}}}));
      }
      m = free_extend(x->at[o], out.C, std::move(m.f0), std::move(imgs));
    } else {
      // xi : p ~ q maps to the generator (1_o, p, q, m(v(X_r p), xi))
      const Setoid& so = *x->at[o];
      std::vector<Wit> table;
      for (const Wit& xi : so.witnesses(0)) {
        Idx p = so.src(xi), q = so.tgt(xi);
        Wit zeta = so.trans(so.sym(x->refl[o][p]), xi);
        Idx e = out.find_gen(ido, p, q, &zeta);
        table.push_back(Wit(Word{out.inj(o, p), {{e, true}}}));
      }
      m.f1 = [table](const Wit& w) { return table.at(w.index()); };
    }
    out.unit.at.push_back(std::move(m));
  }
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    Idx s = sh.src(a), t = sh.dst(a);
    const Setoid& tgt = *x->at[t];
    std::vector<Wit> nat;
    for (Idx p = 0; p < x->at[s]->points(); ++p) {
      Idx image = x->rep[a].f0[p];
      Idx e;
      if (tgt.rep == Setoid::Rep::free) {
        e = out.find_gen(a, p, image, nullptr);
      } else {
        Wit r = tgt.refl(image);
        e = out.find_gen(a, p, image, &r);
      }
      nat.push_back(Wit(Word{out.inj(s, p), {{e, true}}}));
    }
    out.unit.nat.push_back(std::move(nat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise Kan extensions

struct LeftKan {
  Functor u;  // A -> B
  DiagPtr dom, result;
  std::vector<Comma> commas;          // (u / b) per object b of B
  std::vector<DiagPtr> restricted;    // q_b^* X
  std::vector<ColimitData> colim;
  DiagMor unit;                       // X -> u^* (u_! X)
};

inline LeftKan left_kan(const Functor& u, DiagPtr x, Idx cap = kDefaultWordCap) {
  const FinCat& A = *u.dom;
  const FinCat& B = *u.cod;
  CatPtr one = mk(one_cat());
  LeftKan out;
  out.u = u;
  out.dom = x;
  for (Idx b = 0; b < B.num_objects(); ++b) {
    out.commas.push_back(comma(u, point_functor(one, u.cod, b)));
    out.restricted.push_back(
        mk(restrict_diagram(out.commas.back().p, *x)));
    out.colim.push_back(
        colimit_over(out.commas.back().cat, out.restricted.back(), cap));
  }

  CoherentDiagram res;
  res.shape = u.cod;
  for (Idx b = 0; b < B.num_objects(); ++b) res.at.push_back(out.colim[b].C);

  // reindexing functor along beta : b -> b', on comma objects and arrows
  auto reindex_obj = [&](Idx beta, Idx b, Idx o) {
    const CommaObj& co = out.commas[b].objs[o];
    Idx gamma = B.compose(beta, co.gamma);
    return out.commas[B.dst(beta)].find_obj(co.a, 0, gamma);
  };
  auto rep_along = [&](Idx beta) {
    Idx b = B.src(beta), b2 = B.dst(beta);
    const ColimitData& cb = out.colim[b];
    const ColimitData& cb2 = out.colim[b2];
    std::vector<Idx> f0(cb.C->points());
    for (Idx p = 0; p < f0.size(); ++p) {
      auto [o, e] = cb.c0_of[p];
      f0[p] = cb2.inj(reindex_obj(beta, b, o),
                      e);  // same fiber element
    }
    std::vector<Wit> imgs;
    for (Idx ei = 0; ei < cb.gens.size(); ++ei) {
      const ColimitGen& g = cb.gens[ei];
      const Comma& kb = out.commas[b];
      const Comma& kb2 = out.commas[b2];
      // the comma arrow g.alpha maps to the arrow with the same alpha
      // between the reindexed objects
      Idx from = reindex_obj(beta, b, kb.cat->src(g.alpha));
      Idx to = reindex_obj(beta, b, kb.cat->dst(g.alpha));
      Idx alpha2 = kNone;
      for (Idx m = 0; m < kb2.cat->num_arrows(); ++m)
        if (kb2.cat->src(m) == from && kb2.cat->dst(m) == to &&
            kb2.arrs[m].alpha == kb.arrs[g.alpha].alpha) {
          alpha2 = m;
          break;
        }
      require(alpha2 != kNone, "left_kan: reindexed comma arrow not found");
      const Setoid& tgt = *out.restricted[b]->at[kb.cat->dst(g.alpha)];
      Idx e2 = tgt.rep == Setoid::Rep::free
                   ? cb2.find_gen(alpha2, g.x, g.xp, nullptr)
                   : cb2.find_gen(alpha2, g.x, g.xp, &g.xi);
      imgs.push_back(Wit(Word{f0[cb.inj(kb.cat->src(g.alpha), g.x)],
                              {{e2, true}}}));
    }
    return free_extend(cb.C, cb2.C, std::move(f0), std::move(imgs));
  };
  for (Idx beta = 0; beta < B.num_arrows(); ++beta)
    res.rep.push_back(rep_along(beta));
  // reindexing is strictly functorial, so coherence witnesses are reflexive
  for (Idx b = 0; b < B.num_objects(); ++b) {
    std::vector<Wit> r;
    for (Idx p = 0; p < out.colim[b].C->points(); ++p)
      r.push_back(out.colim[b].C->refl(res.rep[B.identity(b)].f0[p]));
    res.refl.push_back(std::move(r));
  }
  B.for_each_composable([&](Idx g, Idx f, Idx gf) {
    std::vector<Wit> w;
    const ColimitData& target = out.colim[B.dst(g)];
    for (Idx p = 0; p < out.colim[B.src(f)].C->points(); ++p)
      w.push_back(target.C->refl(res.rep[gf].f0[p]));
    res.compwit[pair_key(g, f)] = std::move(w);
  });
  out.result = mk(std::move(res));

  // unit X -> u^* u_! X
  out.unit.dom = x;
  out.unit.cod = mk(restrict_diagram(u, *out.result));
  for (Idx a = 0; a < A.num_objects(); ++a) {
    Idx b = u.ob[a];
    Idx o = out.commas[b].find_obj(a, 0, B.identity(b));
    out.unit.at.push_back(out.colim[b].unit.at[o]);
  }
  for (Idx al = 0; al < A.num_arrows(); ++al) {
    Idx a = A.src(al), a2 = A.dst(al);
    Idx b2 = u.ob[a2];
    const Comma& k = out.commas[b2];
    const ColimitData& c = out.colim[b2];
    // the comma arrow alpha : (a, u alpha) -> (a2, 1) in (u / u a2)
    Idx from = k.find_obj(a, 0, u.arr[al]);
    Idx to = k.find_obj(a2, 0, B.identity(b2));
    Idx m = kNone;
    for (Idx i = 0; i < k.cat->num_arrows(); ++i)
      if (k.cat->src(i) == from && k.cat->dst(i) == to && k.arrs[i].alpha == al) {
        m = i;
        break;
      }
    require(m != kNone, "left_kan: unit comma arrow not found");
    std::vector<Wit> nat;
    const Setoid& tgt = *x->at[a2];
    for (Idx p = 0; p < x->at[a]->points(); ++p) {
      Idx image = x->rep[al].f0[p];
      Idx e;
      if (tgt.rep == Setoid::Rep::free) {
        e = c.find_gen(m, p, image, nullptr);
      } else {
        Wit r = tgt.refl(image);
        e = c.find_gen(m, p, image, &r);
      }
      nat.push_back(Wit(Word{c.inj(from, p), {{e, true}}}));
    }
    out.unit.nat.push_back(std::move(nat));
  }
  return out;
}

// u_! f : u_! X -> u_! Y for f : X -> Y over A
inline DiagMor left_kan_mor(const LeftKan& lx, const LeftKan& ly,
                            const DiagMor& f) {
  const FinCat& B = *lx.u.cod;
  DiagMor out;
  out.dom = lx.result;
  out.cod = ly.result;
  for (Idx b = 0; b < B.num_objects(); ++b) {
    DiagMor cocone = compose_diag(ly.colim[b].unit,
                                  restrict_mor(lx.commas[b].p, f));
    out.at.push_back(lx.colim[b].factorize(ly.colim[b].C, cocone));
  }
  for (Idx beta = 0; beta < B.num_arrows(); ++beta) {
    // both routes reindex and then apply f pointwise, equal on the nose
    std::vector<Wit> nat;
    const SetoidPtr& tgt = ly.result->at[B.dst(beta)];
    for (Idx p = 0; p < lx.result->at[B.src(beta)]->points(); ++p)
      nat.push_back(tgt->refl(ly.result->rep[beta].f0[out.at[B.src(beta)].f0[p]]));
    out.nat.push_back(std::move(nat));
  }
  return out;
}

// counit u_! u^* Z -> Z, where lz = left_kan(u, u^* Z)
inline DiagMor left_kan_counit(const LeftKan& lz, DiagPtr z) {
  const FinCat& B = *lz.u.cod;
  const Functor& u = lz.u;
  DiagMor out;
  out.dom = lz.result;
  out.cod = z;
  for (Idx b = 0; b < B.num_objects(); ++b) {
    const Comma& k = lz.commas[b];
    // cocone q_b^* u^* Z -> p^* Z_b with legs Z_beta
    DiagMor cocone;
    cocone.dom = lz.restricted[b];
    cocone.cod = mk(constant_diagram(k.cat, z->at[b]));
    for (Idx o = 0; o < k.objs.size(); ++o)
      cocone.at.push_back(z->rep[k.objs[o].gamma]);
    for (Idx m = 0; m < k.cat->num_arrows(); ++m) {
      Idx o = k.cat->src(m), o2 = k.cat->dst(m);
      Idx beta = k.objs[o].gamma, beta2 = k.objs[o2].gamma;
      Idx ual = u.arr[k.arrs[m].alpha];
      const std::vector<Wit>& cw = z->comp_witness(beta2, ual);
      std::vector<Wit> nat;
      for (Idx p = 0; p < z->at[u.ob[k.objs[o].a]]->points(); ++p)
        nat.push_back(z->at[b]->sym(cw[p]));
      cocone.nat.push_back(std::move(nat));
    }
    out.at.push_back(lz.colim[b].factorize(z->at[b], cocone));
  }
  for (Idx beta = 0; beta < B.num_arrows(); ++beta) {
    Idx b = B.src(beta), b2 = B.dst(beta);
    const ColimitData& c = lz.colim[b];
    std::vector<Wit> nat;
    for (Idx p = 0; p < c.C->points(); ++p) {
      auto [o, e] = c.c0_of[p];
      Idx beta0 = lz.commas[b].objs[o].gamma;
      nat.push_back(z->comp_witness(beta, beta0)[e]);
    }
    out.nat.push_back(std::move(nat));
  }
  return out;
}

struct RightKan {
  Functor u;  // A -> B
  DiagPtr dom, result;
  std::vector<Comma> commas;        // (b / u) per object b
  std::vector<DiagPtr> restricted;  // restriction along the comma projection
  std::vector<LimitData> lim;
  DiagMor counit;  // u^* (u_* X) -> X
};

inline RightKan right_kan(const Functor& u, DiagPtr x, Idx cap = kDefaultWordCap) {
  const FinCat& A = *u.dom;
  const FinCat& B = *u.cod;
  CatPtr one = mk(one_cat());
  RightKan out;
  out.u = u;
  out.dom = x;
  for (Idx b = 0; b < B.num_objects(); ++b) {
    out.commas.push_back(comma(point_functor(one, u.cod, b), u));
    out.restricted.push_back(mk(restrict_diagram(out.commas.back().q, *x)));
    out.lim.push_back(
        limit_over(out.commas.back().cat, out.restricted.back(), cap));
  }

  CoherentDiagram res;
  res.shape = u.cod;
  for (Idx b = 0; b < B.num_objects(); ++b) res.at.push_back(out.lim[b].L);

  auto reindex_obj = [&](Idx beta, Idx o2) {
    // an object (a, beta' : b' -> u a) of (b'/u) pulls back along beta to
    // (a, beta' . beta) in (b/u)
    Idx b = B.src(beta);
    const CommaObj& co = out.commas[B.dst(beta)].objs[o2];
    return out.commas[b].find_obj(0, co.b, B.compose(co.gamma, beta));
  };
  auto rep_along = [&](Idx beta) {
    Idx b = B.src(beta), b2 = B.dst(beta);
    const LimitData& lb = out.lim[b];
    const LimitData& lb2 = out.lim[b2];
    const Comma& k2 = out.commas[b2];
    std::vector<Idx> f0;
    for (Idx l = 0; l < lb.pts.size(); ++l) {
      std::vector<Idx> yv;
      std::vector<Wit> eta;
      for (Idx o2 = 0; o2 < k2.objs.size(); ++o2)
        yv.push_back(lb.pts[l].y[reindex_obj(beta, o2)]);
      for (Idx m2 = 0; m2 < k2.cat->num_arrows(); ++m2) {
        Idx from = reindex_obj(beta, k2.cat->src(m2));
        Idx to = reindex_obj(beta, k2.cat->dst(m2));
        Idx m = kNone;
        for (Idx i = 0; i < out.commas[b].cat->num_arrows(); ++i)
          if (out.commas[b].cat->src(i) == from &&
              out.commas[b].cat->dst(i) == to &&
              out.commas[b].arrs[i].beta == k2.arrs[m2].beta) {
            m = i;
            break;
          }
        require(m != kNone, "right_kan: reindexed comma arrow not found");
        eta.push_back(lb.pts[l].eta[m]);
      }
      f0.push_back(lb2.find_point(yv, eta));
    }
    MorRep r;
    r.dom = lb.L;
    r.cod = lb2.L;
    r.f0 = std::move(f0);
    r.f1 = [lb, lb2, k2n = k2.objs.size(), reidx = [&] {
      std::vector<Idx> v;
      for (Idx o2 = 0; o2 < k2.objs.size(); ++o2)
        v.push_back(reindex_obj(beta, o2));
      return v;
    }(), r0 = r.f0](const Wit& w) {
      const auto& [l, l2, zeta] = lb.wits.at(w.index());
      std::vector<Wit> z2;
      for (Idx o2 = 0; o2 < k2n; ++o2) z2.push_back(zeta[reidx[o2]]);
      return Wit(lb2.find_wit(r0[l], r0[l2], z2));
    };
    return r;
  };
  for (Idx beta = 0; beta < B.num_arrows(); ++beta)
    res.rep.push_back(rep_along(beta));
  for (Idx b = 0; b < B.num_objects(); ++b) {
    std::vector<Wit> r;
    for (Idx p = 0; p < out.lim[b].L->points(); ++p)
      r.push_back(out.lim[b].L->refl(res.rep[B.identity(b)].f0[p]));
    res.refl.push_back(std::move(r));
  }
  B.for_each_composable([&](Idx g, Idx f, Idx gf) {
    std::vector<Wit> w;
    for (Idx p = 0; p < out.lim[B.src(f)].L->points(); ++p)
      w.push_back(out.lim[B.dst(g)].L->refl(res.rep[gf].f0[p]));
    res.compwit[pair_key(g, f)] = std::move(w);
  });
  out.result = mk(std::move(res));

  // counit u^* u_* X -> X
  out.counit.dom = mk(restrict_diagram(u, *out.result));
  out.counit.cod = x;
  for (Idx a = 0; a < A.num_objects(); ++a) {
    Idx b = u.ob[a];
    Idx o = out.commas[b].find_obj(0, a, B.identity(b));
    out.counit.at.push_back(out.lim[b].counit.at[o]);
  }
  for (Idx al = 0; al < A.num_arrows(); ++al) {
    Idx a = A.src(al), a2 = A.dst(al);
    Idx b = u.ob[a];
    const Comma& k = out.commas[b];
    Idx from = k.find_obj(0, a, B.identity(b));
    Idx to = k.find_obj(0, a2, u.arr[al]);
    Idx m = kNone;
    for (Idx i = 0; i < k.cat->num_arrows(); ++i)
      if (k.cat->src(i) == from && k.cat->dst(i) == to && k.arrs[i].beta == al) {
        m = i;
        break;
      }
    require(m != kNone, "right_kan: counit comma arrow not found");
    std::vector<Wit> nat;
    for (const auto& p : out.lim[b].pts) nat.push_back(p.eta[m]);
    out.counit.nat.push_back(std::move(nat));
  }
  return out;
}

// u_* f : u_* X -> u_* Y
inline DiagMor right_kan_mor(const RightKan& rx, const RightKan& ry,
                             const DiagMor& f) {
  const FinCat& B = *rx.u.cod;
  DiagMor out;
  out.dom = rx.result;
  out.cod = ry.result;
  for (Idx b = 0; b < B.num_objects(); ++b) {
    DiagMor cone = compose_diag(restrict_mor(rx.commas[b].q, f),
                                rx.lim[b].counit);
    out.at.push_back(ry.lim[b].factorize(rx.lim[b].L, cone));
  }
  for (Idx beta = 0; beta < B.num_arrows(); ++beta) {
    std::vector<Wit> nat;
    const SetoidPtr& tgt = ry.result->at[B.dst(beta)];
    for (Idx p = 0; p < rx.result->at[B.src(beta)]->points(); ++p)
      nat.push_back(tgt->refl(out.at[B.dst(beta)].f0[rx.result->rep[beta].f0[p]]));
    out.nat.push_back(std::move(nat));
  }
  return out;
}

// unit Z -> u_* u^* Z, where rz = right_kan(u, u^* Z)
inline DiagMor right_kan_unit(const RightKan& rz, DiagPtr z) {
  const FinCat& B = *rz.u.cod;
  const Functor& u = rz.u;
  DiagMor out;
  out.dom = z;
  out.cod = rz.result;
  for (Idx b = 0; b < B.num_objects(); ++b) {
    const Comma& k = rz.commas[b];
    const LimitData& lb = rz.lim[b];
    MorRep m;
    m.dom = z->at[b];
    m.cod = lb.L;
    for (Idx zp = 0; zp < z->at[b]->points(); ++zp) {
      std::vector<Idx> yv;
      std::vector<Wit> eta;
      for (Idx o = 0; o < k.objs.size(); ++o)
        yv.push_back(z->rep[k.objs[o].gamma].f0[zp]);
      for (Idx mm = 0; mm < k.cat->num_arrows(); ++mm) {
        Idx o = k.cat->src(mm);
        Idx ual = u.arr[k.arrs[mm].beta];
        eta.push_back(z->comp_witness(ual, k.objs[o].gamma)[zp]);
      }
      m.f0.push_back(lb.find_point(yv, eta));
    }
    m.f1 = [z, b, k_objs = k.objs, lb, m0 = m.f0, zb = z->at[b]](const Wit& w) {
      std::vector<Wit> zeta;
      for (const auto& o : k_objs) zeta.push_back(z->rep[o.gamma].f1(w));
      return Wit(lb.find_wit(m0[zb->src(w)], m0[zb->tgt(w)], zeta));
    };
    out.at.push_back(std::move(m));
  }
  for (Idx beta = 0; beta < B.num_arrows(); ++beta) {
    Idx b = B.src(beta), b2 = B.dst(beta);
    const LimitData& lb2 = rz.lim[b2];
    const Comma& k2 = rz.commas[b2];
    std::vector<Wit> nat;
    for (Idx zp = 0; zp < z->at[b]->points(); ++zp) {
      Idx l1 = rz.result->rep[beta].f0[out.at[b].f0[zp]];
      Idx l2 = out.at[b2].f0[z->rep[beta].f0[zp]];
      std::vector<Wit> zeta;
      for (const auto& o : k2.objs)
        zeta.push_back(
            z->at[u.ob[o.b]]->sym(z->comp_witness(o.gamma, beta)[zp]));
      nat.push_back(Wit(lb2.find_wit(l1, l2, zeta)));
    }
    out.nat.push_back(std::move(nat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical mates

struct Square {
  Functor p, q, u, v;  // p : D -> A, q : D -> B, u : A -> C, v : B -> C
  NatTrans cell;       // u p => v q
};

inline Square comma_square(const Functor& u, const Functor& v) {
  Comma k = comma(u, v);
  return {k.p, k.q, u, v, k.cell};
}

// the mate q_! p^* X -> v^* u_! X of a square, plus its invertibility check
struct MateResult {
  DiagMor mate;
  DiagIso iso;
};

inline MateResult mate_left(const Square& sq, DiagPtr x,
                            Idx cap = kDefaultWordCap) {
  LeftKan lu = left_kan(sq.u, x, cap);
  DiagMor unit_p = restrict_mor(sq.p, lu.unit);  // p^*X -> (up)^* u_! X
  DiagMor w = whisker(sq.cell, *lu.result);      // (up)^* -> (vq)^*
  DiagMor g = compose_diag(w, unit_p);           // p^*X -> q^* v^* u_! X
  DiagPtr vstar = mk(restrict_diagram(sq.v, *lu.result));
  LeftKan lq_dom = left_kan(sq.q, g.dom, cap);
  LeftKan lq_cod = left_kan(sq.q, g.cod, cap);
  DiagMor qg = left_kan_mor(lq_dom, lq_cod, g);
  DiagMor counit = left_kan_counit(lq_cod, vstar);
  MateResult out;
  out.mate = compose_diag(counit, qg);
  out.iso = is_iso_diag(out.mate);
  return out;
}

// the dual mate u^* v_* X -> p_* q^* X
inline MateResult mate_right(const Square& sq, DiagPtr x,
                             Idx cap = kDefaultWordCap) {
  RightKan rv = right_kan(sq.v, x, cap);
  DiagMor w = whisker(sq.cell, *rv.result);            // (up)^* v_*X -> (vq)^* v_*X
  DiagMor counit_q = restrict_mor(sq.q, rv.counit);    // q^* v^* v_* X -> q^* X
  DiagMor g = compose_diag(counit_q, w);               // p^* u^* v_* X -> q^* X
  DiagPtr ustar = mk(restrict_diagram(sq.u, *rv.result));
  RightKan rp_dom = right_kan(sq.p, g.dom, cap);
  RightKan rp_cod = right_kan(sq.p, g.cod, cap);
  DiagMor pg = right_kan_mor(rp_dom, rp_cod, g);
  DiagMor unit = right_kan_unit(rp_dom, ustar);
  MateResult out;
  out.mate = compose_diag(pg, unit);
  out.iso = is_iso_diag(out.mate);
  return out;
}

// ---------------------------------------------------------------------------
// Discrete fast paths (cross-checked against the comma route)

// coproduct of setoids; representation chosen by the components
inline Setoid coproduct_setoid(const std::vector<SetoidPtr>& parts) {
  bool all_rel = true, all_free = true, all_finite = true;
  for (const auto& p : parts) {
    all_rel = all_rel && p->rep == Setoid::Rep::relational;
    all_free = all_free && p->rep == Setoid::Rep::free;
    all_finite = all_finite && p->rep != Setoid::Rep::free &&
                 p->rep != Setoid::Rep::product;
  }
  FinSet c0;
  std::vector<Idx> off;
  for (Idx k = 0; k < parts.size(); ++k) {
    const auto& p = parts[k];
    off.push_back(c0.size);
    for (Idx i = 0; i < p->points(); ++i)
      c0.labels.push_back(std::to_string(k) + ":" + p->carrier.label(i));
    c0.size += p->points();
  }
  if (all_rel) {
    std::vector<std::pair<Idx, Idx>> pairs;
    for (Idx i = 0; i < parts.size(); ++i)
      for (auto [a, b] : parts[i]->pairs) pairs.push_back({a + off[i], b + off[i]});
    return relational_setoid(std::move(c0), std::move(pairs));
  }
  if (all_free) {
    std::vector<std::pair<Idx, Idx>> edges;
    for (Idx i = 0; i < parts.size(); ++i)
      for (auto [a, b] : parts[i]->edges) edges.push_back({a + off[i], b + off[i]});
    return free_setoid(std::move(c0), std::move(edges));
  }
  require(all_finite, "coproduct_setoid: mixed free components unsupported");
  Setoid s;
  s.rep = Setoid::Rep::tabular;
  s.carrier = std::move(c0);
  std::vector<Idx> woff;
  std::vector<std::vector<Wit>> wits;
  for (Idx i = 0; i < parts.size(); ++i) {
    wits.push_back(parts[i]->witnesses(0));
    woff.push_back(s.wit_carrier.size);
    s.wit_carrier.size += wits.back().size();
  }
  auto windex = [&](Idx i, const Wit& w) -> Idx {
    for (Idx j = 0; j < wits[i].size(); ++j)
      if (wit_eq(wits[i][j], w)) return woff[i] + j;
    fail("coproduct_setoid: witness not found");
  };
  for (Idx i = 0; i < parts.size(); ++i)
    for (const Wit& w : wits[i]) {
      s.s_table.push_back(parts[i]->src(w) + off[i]);
      s.t_table.push_back(parts[i]->tgt(w) + off[i]);
      s.v_table.push_back(windex(i, parts[i]->sym(w)));
    }
  for (Idx i = 0; i < parts.size(); ++i)
    for (Idx x = 0; x < parts[i]->points(); ++x)
      s.r_table.push_back(windex(i, parts[i]->refl(x)));
  for (Idx i = 0; i < parts.size(); ++i)
    for (Idx a = 0; a < wits[i].size(); ++a)
      for (Idx b = 0; b < wits[i].size(); ++b)
        if (parts[i]->tgt(wits[i][a]) == parts[i]->src(wits[i][b]))
          s.m_table[pair_key(woff[i] + a, woff[i] + b)] =
              windex(i, parts[i]->trans(wits[i][a], wits[i][b]));
  return s;
}

// iterated binary product, left-associated; empty product is the terminal
inline SetoidPtr product_setoid_all(const std::vector<SetoidPtr>& parts) {
  if (parts.empty()) return mk(terminal_setoid());
  SetoidPtr acc = parts[0];
  for (Idx i = 1; i < parts.size(); ++i)
    acc = mk(product_setoid(acc, parts[i]));
  return acc;
}

// ---------------------------------------------------------------------------
// Comparisons between the comma route and the direct fast paths

// the canonical comparison C(fiber colimit) -> (u_! X)_i for a discrete
// target: the comma (u / i) is the fiber A_i with the identity leg attached
inline MorRep fiber_colimit_comparison(const LeftKan& lk, Idx i,
                                       const Fiber& fib,
                                       const ColimitData& fib_colim) {
  const ColimitData& cb = lk.colim[i];
  const Comma& k = lk.commas[i];
  Idx id_i = lk.u.cod->identity(i);
  std::vector<Idx> f0(fib_colim.C->points());
  for (Idx p = 0; p < f0.size(); ++p) {
    auto [o, e] = fib_colim.c0_of[p];
    f0[p] = cb.inj(k.find_obj(fib.object_of[o], 0, id_i), e);
  }
  std::vector<Wit> imgs;
  for (Idx ei = 0; ei < fib_colim.gens.size(); ++ei) {
    const ColimitGen& g = fib_colim.gens[ei];
    Idx total_arrow = fib.arrow_of[g.alpha];
    Idx from = k.find_obj(lk.u.dom->src(total_arrow), 0, id_i);
    Idx to = k.find_obj(lk.u.dom->dst(total_arrow), 0, id_i);
    Idx m = kNone;
    for (Idx a = 0; a < k.cat->num_arrows(); ++a)
      if (k.cat->src(a) == from && k.cat->dst(a) == to &&
          k.arrs[a].alpha == total_arrow) {
        m = a;
        break;
      }
    require(m != kNone, "fiber comparison: comma arrow not found");
    const Setoid& tgt = *lk.dom->at[lk.u.dom->dst(total_arrow)];
    Idx e2 = tgt.rep == Setoid::Rep::free ? cb.find_gen(m, g.x, g.xp, nullptr)
                                          : cb.find_gen(m, g.x, g.xp, &g.xi);
    imgs.push_back(Wit(Word{f0[fib_colim.C->edges[ei].first], {{e2, true}}}));
  }
  return free_extend(fib_colim.C, cb.C, std::move(f0), std::move(imgs));
}

// mutual comparisons between a fiberwise limit and the comma-route value
inline MorRep fiber_limit_comparison(const RightKan& rk, Idx i,
                                     const Fiber& fib,
                                     const LimitData& fib_lim) {
  const LimitData& lb = rk.lim[i];
  const Comma& k = rk.commas[i];
  Idx id_i = rk.u.cod->identity(i);
  // comma (i / u) over a discrete target is the fiber: map cone points
  (void)id_i;
  std::vector<Idx> fiber_obj_of(k.objs.size(), kNone);
  for (Idx o = 0; o < k.objs.size(); ++o)
    for (Idx j = 0; j < fib.object_of.size(); ++j)
      if (fib.object_of[j] == k.objs[o].b) fiber_obj_of[o] = j;
  std::vector<Idx> fiber_arr_of(k.cat->num_arrows(), kNone);
  for (Idx m = 0; m < k.cat->num_arrows(); ++m)
    for (Idx j = 0; j < fib.arrow_of.size(); ++j)
      if (fib.arrow_of[j] == k.arrs[m].beta) fiber_arr_of[m] = j;
  MorRep cmp;
  cmp.dom = fib_lim.L;
  cmp.cod = lb.L;
  for (const auto& pt : fib_lim.pts) {
    std::vector<Idx> y(k.objs.size());
    std::vector<Wit> eta(k.cat->num_arrows());
    for (Idx o = 0; o < k.objs.size(); ++o) {
      require(fiber_obj_of[o] != kNone, "fiber limit comparison: object");
      y[o] = pt.y[fiber_obj_of[o]];
    }
    for (Idx m = 0; m < k.cat->num_arrows(); ++m) {
      require(fiber_arr_of[m] != kNone, "fiber limit comparison: arrow");
      eta[m] = pt.eta[fiber_arr_of[m]];
    }
    cmp.f0.push_back(lb.find_point(y, eta));
  }
  cmp.f1 = [fl = fib_lim, lb, fiber_obj_of, c0 = cmp.f0](const Wit& w) {
    const auto& [l, l2, zeta] = fl.wits.at(w.index());
    std::vector<Wit> z2;
    for (Idx fo : fiber_obj_of) z2.push_back(zeta[fo]);
    return Wit(lb.find_wit(c0[l], c0[l2], z2));
  };
  return cmp;
}

// ---------------------------------------------------------------------------
// Distributivity: the canonical map u_!(X x u^* Y') -> (u_! X) x Y' over a
// discrete index, built from the adjunction data and the product pairing

struct DistributivityResult {
  DiagMor canonical;
  DiagIso iso;
};

inline DistributivityResult distributivity_check(const Functor& u, DiagPtr x,
                                                 DiagPtr yp,
                                                 Idx cap = kDefaultWordCap) {
  require(u.cod->discrete(), "distributivity_check: index must be discrete");
  DiagPtr uyp = mk(restrict_diagram(u, *yp));
  ProductDiag lhs_arg = product_diag(x, uyp);
  LeftKan lk_arg = left_kan(u, lhs_arg.prod, cap);
  LeftKan lk_x = left_kan(u, x, cap);
  ProductDiag rhs = product_diag(lk_x.result, yp);

  // first component: u_!(pi1)
  DiagMor c1 = left_kan_mor(lk_arg, lk_x, lhs_arg.pi1);
  // second component: the adjunct of pi2, i.e. counit_{Y'} . u_!(pi2)
  LeftKan lk_uyp = left_kan(u, uyp, cap);
  DiagMor c2 = compose_diag(left_kan_counit(lk_uyp, yp),
                            left_kan_mor(lk_arg, lk_uyp, lhs_arg.pi2));
  DistributivityResult out;
  out.canonical = pair_diag(rhs, c1, c2);
  out.iso = is_iso_diag(out.canonical);
  return out;
}

}  // namespace setoids
