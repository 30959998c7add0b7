#pragma once

// The truncated targets Set, Sreg, Spos, Prop, Contr: their diagram
// categories, the reflections out of coherent diagrams with their units and
// invertible counits, the per-theory equivalence checkers (the literal
// criteria of the characterization propositions, evaluated fiberwise over a
// discrete index), and the independent semantic oracle that decides the same
// question by comparing Kan-extension composites.

#include "setoids/kan.hpp"

namespace setoids {

enum class Theory { sex, reg, set, pos, prop, contr };

inline const char* theory_name(Theory t) {
  switch (t) {
    case Theory::sex: return "sex";
    case Theory::reg: return "reg";
    case Theory::set: return "set";
    case Theory::pos: return "pos";
    case Theory::prop: return "prop";
    case Theory::contr: return "contr";
  }
  return "?";
}

inline std::optional<Theory> theory_from_name(const std::string& s) {
  for (Theory t : {Theory::sex, Theory::reg, Theory::set, Theory::pos,
                   Theory::prop, Theory::contr})
    if (s == theory_name(t)) return t;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Diagram categories of the truncated theories

// Spos values: bare carriers in preorder mode (any two parallel morphism
// representatives are equal). A carrier may be countably infinite when it
// arises as X0 + X1 of a free-represented setoid; only inhabitation matters
// for the preorder structure.
struct PosObject {
  Idx size = 0;
  bool infinite = false;

  bool inhabited() const { return size > 0 || infinite; }
};

struct PosDiagram {
  CatPtr shape;
  std::vector<PosObject> at;

  void validate() const {
    require(at.size() == shape->num_objects(), "PosDiagram: table size");
    for (Idx a = 0; a < shape->num_arrows(); ++a)
      require(!at[shape->src(a)].inhabited() || at[shape->dst(a)].inhabited(),
              "PosDiagram: no map exists along " + shape->arrow(a).label);
  }
};

// maps exist in a preorder iff the domain is empty or the codomain inhabited
inline bool pos_leq(const PosDiagram& x, const PosDiagram& y) {
  for (Idx o = 0; o < x.at.size(); ++o)
    if (x.at[o].inhabited() && !y.at[o].inhabited()) return false;
  return true;
}

inline bool pos_iso(const PosDiagram& x, const PosDiagram& y) {
  return pos_leq(x, y) && pos_leq(y, x);
}

struct PropDiagram {
  CatPtr shape;
  std::vector<char> truth;

  void validate() const {
    require(truth.size() == shape->num_objects(), "PropDiagram: table size");
    for (Idx a = 0; a < shape->num_arrows(); ++a)
      require(!truth[shape->src(a)] || truth[shape->dst(a)],
              "PropDiagram: not monotone along " + shape->arrow(a).label);
  }
};

// ---------------------------------------------------------------------------
// Reflections L and the right adjoints R

// Set: L computes the quotient of each pseudo-equivalence relation; R equips
// a set with the identity relation (the embedding of plain set diagrams).
struct SetReflection {
  SetDiagram value;
  DiagPtr embedded;  // R(L X)
  DiagMor unit;      // X -> R(L X)
};

inline SetReflection reflect_set(DiagPtr x) {
  SetReflection out;
  out.value = quotient_diagram(*x);
  out.embedded = mk(embed_setdiagram(out.value));
  out.unit.dom = x;
  out.unit.cod = out.embedded;
  const FinCat& sh = *x->shape;
  std::vector<Partition> parts;
  for (const auto& s : x->at) parts.push_back(s->quotient());
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    MorRep m;
    m.dom = x->at[o];
    m.cod = out.embedded->at[o];
    m.f0 = parts[o].class_of;
    m.f1 = [cod = m.cod, cls = parts[o].class_of, dom = m.dom](const Wit& w) {
      return *cod->related(cls[dom->src(w)], cls[dom->tgt(w)]);
    };
    out.unit.at.push_back(std::move(m));
  }
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    // the quotient is strictly functorial, so naturality is reflexive
    std::vector<Wit> nat;
    Idx s = sh.src(a), t = sh.dst(a);
    for (Idx p = 0; p < x->at[s]->points(); ++p)
      nat.push_back(out.embedded->at[t]->refl(
          parts[t].class_of[x->rep[a].f0[p]]));
    out.unit.nat.push_back(std::move(nat));
  }
  return out;
}

// Sreg: L sends each pseudo-equivalence relation to its image, an actual
// equivalence relation; R regards an equivalence relation as itself.
struct RegReflection {
  DiagPtr value;  // relational setoids
  DiagMor unit;   // X -> L X
};

inline RegReflection reflect_reg(DiagPtr x) {
  RegReflection out;
  CoherentDiagram d;
  d.shape = x->shape;
  const FinCat& sh = *x->shape;
  for (const auto& s : x->at) {
    std::vector<std::pair<Idx, Idx>> pairs;
    for (Idx p = 0; p < s->points(); ++p)
      for (Idx q = 0; q < s->points(); ++q)
        if (s->related(p, q)) pairs.push_back({p, q});
    d.at.push_back(mk(relational_setoid(s->carrier, std::move(pairs))));
  }
  for (Idx a = 0; a < sh.num_arrows(); ++a)
    d.rep.push_back(*mor_auto(d.at[sh.src(a)], d.at[sh.dst(a)],
                              x->rep[a].f0));
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    std::vector<Wit> r;
    for (Idx p = 0; p < d.at[o]->points(); ++p)
      r.push_back(*d.at[o]->related(p, d.rep[sh.identity(o)].f0[p]));
    d.refl.push_back(std::move(r));
  }
  sh.for_each_composable([&](Idx g, Idx f, Idx gf) {
    std::vector<Wit> w;
    for (Idx p = 0; p < d.at[sh.src(f)]->points(); ++p)
      w.push_back(*d.at[sh.dst(g)]->related(d.rep[g].f0[d.rep[f].f0[p]],
                                            d.rep[gf].f0[p]));
    d.compwit[pair_key(g, f)] = std::move(w);
  });
  out.value = mk(std::move(d));
  out.unit.dom = x;
  out.unit.cod = out.value;
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    MorRep m;
    m.dom = x->at[o];
    m.cod = out.value->at[o];
    for (Idx p = 0; p < x->at[o]->points(); ++p) m.f0.push_back(p);
    m.f1 = [dom = m.dom, cod = m.cod](const Wit& w) {
      return *cod->related(dom->src(w), dom->tgt(w));
    };
    out.unit.at.push_back(std::move(m));
  }
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    std::vector<Wit> nat;
    Idx s = sh.src(a), t = sh.dst(a);
    for (Idx p = 0; p < x->at[s]->points(); ++p)
      nat.push_back(out.value->at[t]->refl(x->rep[a].f0[p]));
    out.unit.nat.push_back(std::move(nat));
  }
  return out;
}

// Spos: L sends a pseudo-equivalence relation to the carrier X0 + X1
// (isomorphic in the preorder to X0); R equips a set with the full relation.
inline PosDiagram reflect_pos(DiagPtr x, Idx cap = kDefaultWordCap) {
  PosDiagram out;
  out.shape = x->shape;
  for (const auto& s : x->at) {
    PosObject o;
    if (finite_witnesses(*s)) {
      o.size = s->points() + s->witnesses(0).size();
    } else {
      o.size = s->points() + s->witnesses(cap).size();
      o.infinite = s->points() > 0;  // nonempty carriers have all empty words
    }
    out.at.push_back(o);
  }
  return out;
}

inline CoherentDiagram embed_pos(const PosDiagram& p) {
  CoherentDiagram d;
  d.shape = p.shape;
  const FinCat& sh = *p.shape;
  for (const auto& o : p.at) {
    require(!o.infinite, "embed_pos: finite carriers required");
    d.at.push_back(mk(full_setoid(FinSet(o.size))));
  }
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    // in the full relation any object map works; pick the constant map to 0
    std::vector<Idx> f0(d.at[sh.src(a)]->points(), 0);
    if (sh.is_identity(a))
      for (Idx i = 0; i < f0.size(); ++i) f0[i] = i;
    d.rep.push_back(*mor_auto(d.at[sh.src(a)], d.at[sh.dst(a)], f0));
  }
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    std::vector<Wit> r;
    for (Idx i = 0; i < d.at[o]->points(); ++i)
      r.push_back(*d.at[o]->related(i, d.rep[sh.identity(o)].f0[i]));
    d.refl.push_back(std::move(r));
  }
  sh.for_each_composable([&](Idx g, Idx f, Idx gf) {
    std::vector<Wit> w;
    for (Idx i = 0; i < d.at[sh.src(f)]->points(); ++i)
      w.push_back(*d.at[sh.dst(g)]->related(d.rep[g].f0[d.rep[f].f0[i]],
                                            d.rep[gf].f0[i]));
    d.compwit[pair_key(g, f)] = std::move(w);
  });
  return d;
}

// Prop: L computes the support of X0; R gives the corresponding subsingleton.
inline PropDiagram reflect_prop(DiagPtr x) {
  PropDiagram out;
  out.shape = x->shape;
  for (const auto& s : x->at) out.truth.push_back(s->points() > 0);
  return out;
}

inline CoherentDiagram embed_prop(const PropDiagram& p) {
  CoherentDiagram d;
  d.shape = p.shape;
  const FinCat& sh = *p.shape;
  for (char t : p.truth) d.at.push_back(mk(discrete_setoid(FinSet(t ? 1 : 0))));
  for (Idx a = 0; a < sh.num_arrows(); ++a) {
    std::vector<Idx> f0(d.at[sh.src(a)]->points(), 0);
    d.rep.push_back(*mor_auto(d.at[sh.src(a)], d.at[sh.dst(a)], f0));
  }
  for (Idx o = 0; o < sh.num_objects(); ++o) {
    std::vector<Wit> r;
    for (Idx i = 0; i < d.at[o]->points(); ++i)
      r.push_back(d.at[o]->refl(i));
    d.refl.push_back(std::move(r));
  }
  sh.for_each_composable([&](Idx g, Idx f, Idx) {
    std::vector<Wit> w;
    for (Idx i = 0; i < d.at[sh.src(f)]->points(); ++i)
      w.push_back(d.at[sh.dst(g)]->refl(0));
    d.compwit[pair_key(g, f)] = std::move(w);
  });
  return d;
}

// units into R(L X) for the subobject-style theories
inline DiagMor pos_unit(DiagPtr x) {
  PosDiagram lx = reflect_pos(x);
  DiagPtr rlx = mk(embed_pos(lx));
  // the carrier of R(L X) at each object contains X0 as its first summand
  std::vector<std::vector<Idx>> f0;
  for (Idx o = 0; o < x->at.size(); ++o) {
    std::vector<Idx> v;
    for (Idx p = 0; p < x->at[o]->points(); ++p) v.push_back(p);
    f0.push_back(std::move(v));
  }
  auto m = diag_mor_auto(x, rlx, std::move(f0));
  require(m.has_value(), "pos_unit: full relation admits all witnesses");
  return *m;
}

inline DiagMor prop_unit(DiagPtr x) {
  PropDiagram lx = reflect_prop(x);
  DiagPtr rlx = mk(embed_prop(lx));
  std::vector<std::vector<Idx>> f0;
  for (Idx o = 0; o < x->at.size(); ++o)
    f0.push_back(std::vector<Idx>(x->at[o]->points(), 0));
  auto m = diag_mor_auto(x, rlx, std::move(f0));
  require(m.has_value(), "prop_unit: subsingleton admits all witnesses");
  return *m;
}

// ---------------------------------------------------------------------------
// Counit invertibility: L(R(Y)) -> Y is an isomorphism in each theory

inline bool counit_invertible_set(const SetDiagram& y) {
  SetReflection r = reflect_set(mk(embed_setdiagram(y)));
  // the quotient of a discrete setoid is the set itself, on the nose
  if (r.value.at.size() != y.at.size()) return false;
  for (Idx o = 0; o < y.at.size(); ++o)
    if (r.value.at[o].size != y.at[o].size) return false;
  return r.value.arrow == y.arrow;
}

inline bool counit_invertible_reg(DiagPtr y) {
  // y must already be relational; its image is itself
  RegReflection r = reflect_reg(y);
  for (Idx o = 0; o < y->at.size(); ++o) {
    if (y->at[o]->rep != Setoid::Rep::relational) return false;
    if (!(y->at[o]->pairs == r.value->at[o]->pairs)) return false;
  }
  return true;
}

inline bool counit_invertible_pos(const PosDiagram& y) {
  // L(R(Y)) has carriers Y + Y x Y; mutual comparison maps exist
  DiagPtr ry = mk(embed_pos(y));
  PosDiagram lry = reflect_pos(ry);
  return pos_iso(lry, y);
}

inline bool counit_invertible_prop(const PropDiagram& y) {
  PropDiagram lry = reflect_prop(mk(embed_prop(y)));
  return lry.truth == y.truth;
}

// ---------------------------------------------------------------------------
// D-equivalence checkers (fiberwise over a discrete index)

struct EquivInstance {
  std::string name;
  Functor u;                 // A -> B
  FinSet index;              // I
  std::vector<Idx> fiber_b;  // ob B -> I

  std::vector<Idx> fiber_a() const {
    std::vector<Idx> fa(u.dom->num_objects());
    for (Idx a = 0; a < fa.size(); ++a) fa[a] = fiber_b[u.ob[a]];
    return fa;
  }

  void validate() const {
    u.validate();
    CatOverSet v{u.cod, index, fiber_b};
    v.validate();
  }
};

// over the one-point index
inline EquivInstance over_point(std::string name, Functor u) {
  EquivInstance e;
  e.name = std::move(name);
  e.u = std::move(u);
  e.index = FinSet(1, {"*"});
  e.fiber_b.assign(e.u.cod->num_objects(), 0);
  return e;
}

struct SexEquivWitness {
  std::vector<Idx> section;        // ob B -> ob A, over the index
  std::vector<Zigzag> zig_arrow;   // per arrow of B: in A, from s(src) to s(dst)
  std::vector<Zigzag> zig_b;       // per object of B: in B, from b to u(s(b))
  std::vector<Zigzag> zig_a;       // per object of A: in A, from a to s(u(a))
};

struct EquivResult {
  bool holds = false;
  std::string detail;
  std::optional<SexEquivWitness> zigzags;                  // sex, reg
  std::optional<std::vector<Idx>> section;                 // pos
  std::optional<std::vector<Idx>> inhabitant;              // prop: per index
  std::optional<std::vector<std::vector<Idx>>> pi0_map;    // set: per index
};

namespace detail {

// pi0 classes of the fiber of a category over each index element
struct FiberedPi0 {
  Pi0 total;                          // components of the whole category
  std::vector<Idx> fiber_of_comp;     // component -> index element
};

inline FiberedPi0 fibered_pi0(const FinCat& c, const std::vector<Idx>& fiber) {
  FiberedPi0 out;
  out.total = pi0(c);
  out.fiber_of_comp.assign(out.total.components.size, 0);
  for (Idx o = 0; o < c.num_objects(); ++o)
    out.fiber_of_comp[out.total.component_of[o]] = fiber[o];
  return out;
}

}  // namespace detail

// Prop set-eqv: per index element, pi0 of the fiber functor is a bijection
inline EquivResult equiv_check_set(const EquivInstance& e) {
  EquivResult out;
  std::vector<Idx> fa = e.fiber_a();
  detail::FiberedPi0 pa = detail::fibered_pi0(*e.u.dom, fa);
  detail::FiberedPi0 pb = detail::fibered_pi0(*e.u.cod, e.fiber_b);
  // induced map on components, per index element
  std::vector<std::vector<Idx>> maps(e.index.size);
  std::vector<std::vector<Idx>> acomps(e.index.size), bcomps(e.index.size);
  std::vector<Idx> local_a(pa.total.components.size),
      local_b(pb.total.components.size);
  for (Idx c = 0; c < pa.total.components.size; ++c) {
    local_a[c] = acomps[pa.fiber_of_comp[c]].size();
    acomps[pa.fiber_of_comp[c]].push_back(c);
  }
  for (Idx c = 0; c < pb.total.components.size; ++c) {
    local_b[c] = bcomps[pb.fiber_of_comp[c]].size();
    bcomps[pb.fiber_of_comp[c]].push_back(c);
  }
  for (Idx i = 0; i < e.index.size; ++i)
    maps[i].assign(acomps[i].size(), kNone);
  for (Idx a = 0; a < e.u.dom->num_objects(); ++a) {
    Idx i = fa[a];
    maps[i][local_a[pa.total.component_of[a]]] =
        local_b[pb.total.component_of[e.u.ob[a]]];
  }
  for (Idx i = 0; i < e.index.size; ++i) {
    if (acomps[i].size() != bcomps[i].size()) {
      out.detail = "pi0 sizes differ over index " + e.index.label(i) + ": " +
                   std::to_string(acomps[i].size()) + " vs " +
                   std::to_string(bcomps[i].size());
      return out;
    }
    std::vector<bool> hit(bcomps[i].size(), false);
    for (Idx c : maps[i]) {
      if (c == kNone || hit[c]) {
        out.detail = "pi0 map not a bijection over index " + e.index.label(i);
        return out;
      }
      hit[c] = true;
    }
  }
  out.holds = true;
  out.pi0_map = std::move(maps);
  return out;
}

// Prop tv-eqv: if the B-fiber is inhabited then so is the A-fiber
inline EquivResult equiv_check_prop(const EquivInstance& e) {
  EquivResult out;
  std::vector<Idx> fa = e.fiber_a();
  std::vector<Idx> chosen(e.index.size, kNone);
  for (Idx a = 0; a < e.u.dom->num_objects(); ++a)
    if (chosen[fa[a]] == kNone) chosen[fa[a]] = a;
  for (Idx b = 0; b < e.u.cod->num_objects(); ++b)
    if (chosen[e.fiber_b[b]] == kNone) {
      out.detail = "B inhabited but A empty over index " +
                   e.index.label(e.fiber_b[b]);
      return out;
    }
  out.holds = true;
  out.inhabitant = std::move(chosen);
  return out;
}

// Prop epos-eqv: a function ob B -> ob A over the index
inline EquivResult equiv_check_pos(const EquivInstance& e) {
  EquivResult out;
  std::vector<Idx> fa = e.fiber_a();
  std::vector<Idx> first_a(e.index.size, kNone);
  for (Idx a = 0; a < e.u.dom->num_objects(); ++a)
    if (first_a[fa[a]] == kNone) first_a[fa[a]] = a;
  std::vector<Idx> section(e.u.cod->num_objects());
  for (Idx b = 0; b < e.u.cod->num_objects(); ++b) {
    if (first_a[e.fiber_b[b]] == kNone) {
      out.detail = "no section: A empty over index " +
                   e.index.label(e.fiber_b[b]);
      return out;
    }
    section[b] = first_a[e.fiber_b[b]];
  }
  out.holds = true;
  out.section = std::move(section);
  return out;
}

// Props sex-eqv / sreg-eqv: a section on objects together with zigzags for
// every arrow of B, every object of B, and every object of A. The section is
// searched lexicographically (least object indices first), pruned by fiber
// and by the component conditions; zigzag tables are filled by search.
inline EquivResult equiv_check_sex(const EquivInstance& e) {
  EquivResult out;
  const FinCat& A = *e.u.dom;
  const FinCat& B = *e.u.cod;
  std::vector<Idx> fa = e.fiber_a();
  Pi0 pa = pi0(A);
  Pi0 pb = pi0(B);

  // candidates per object of B: same fiber and b ~ u(s(b)) in B
  std::vector<std::vector<Idx>> candidates(B.num_objects());
  for (Idx b = 0; b < B.num_objects(); ++b)
    for (Idx a = 0; a < A.num_objects(); ++a)
      if (fa[a] == e.fiber_b[b] &&
          pb.component_of[b] == pb.component_of[e.u.ob[a]])
        candidates[b].push_back(a);

  // requirement on components: s must descend to a pi0 map inverse to pi0(u);
  // condition (a ~ s u a) constrains the section at objects u(a)
  std::vector<Idx> section(B.num_objects(), kNone);
  std::function<bool(Idx)> search = [&](Idx b) -> bool {
    if (b == B.num_objects()) {
      // all arrows of B induce connected images (also covers zigzags in B)
      for (Idx m = 0; m < B.num_arrows(); ++m)
        if (pa.component_of[section[B.src(m)]] !=
            pa.component_of[section[B.dst(m)]])
          return false;
      // every a in A is connected to s(u(a))
      for (Idx a = 0; a < A.num_objects(); ++a)
        if (pa.component_of[a] != pa.component_of[section[e.u.ob[a]]])
          return false;
      return true;
    }
    for (Idx a : candidates[b]) {
      section[b] = a;
      if (search(b + 1)) return true;
    }
    section[b] = kNone;
    return false;
  };
  if (!search(0)) {
    out.detail = "no section satisfying the zigzag conditions";
    return out;
  }

  SexEquivWitness w;
  w.section = section;
  for (Idx m = 0; m < B.num_arrows(); ++m)
    w.zig_arrow.push_back(
        *zigzag_search(A, section[B.src(m)], section[B.dst(m)]));
  for (Idx b = 0; b < B.num_objects(); ++b)
    w.zig_b.push_back(*zigzag_search(B, b, e.u.ob[section[b]]));
  for (Idx a = 0; a < A.num_objects(); ++a)
    w.zig_a.push_back(*zigzag_search(A, a, section[e.u.ob[a]]));
  out.holds = true;
  out.zigzags = std::move(w);
  return out;
}

inline EquivResult equiv_check(Theory t, const EquivInstance& e) {
  switch (t) {
    case Theory::set: return equiv_check_set(e);
    case Theory::prop: return equiv_check_prop(e);
    case Theory::pos: return equiv_check_pos(e);
    case Theory::sex:
    case Theory::reg: return equiv_check_sex(e);
    case Theory::contr: {
      EquivResult out;
      out.holds = true;
      out.detail = "every functor is an equivalence for the terminal theory";
      return out;
    }
  }
  fail("unreachable");
}

// Explicitly supplied witness data for the sex criterion, validated rather
// than searched. Used where the zigzags are given by construction (path
// spaces, omega, the cocontinuity reduction).
struct SexWitnessProvider {
  std::function<Idx(Idx)> section;       // ob B -> ob A
  std::function<Zigzag(Idx)> zig_arrow;  // per arrow of B
  std::function<Zigzag(Idx)> zig_b;      // per object of B
  std::function<Zigzag(Idx)> zig_a;      // per object of A
};

struct ProvidedCheckStats {
  bool holds = false;
  std::string detail;
  Idx witnesses = 0;
  Idx total_steps = 0;
};

inline ProvidedCheckStats equiv_check_sex_provided(
    const EquivInstance& e, const SexWitnessProvider& provider) {
  ProvidedCheckStats out;
  const FinCat& A = *e.u.dom;
  const FinCat& B = *e.u.cod;
  std::vector<Idx> fa = e.fiber_a();
  auto bad = [&](const std::string& msg) {
    out.holds = false;
    out.detail = msg;
    return out;
  };
  std::vector<Idx> section(B.num_objects());
  for (Idx b = 0; b < B.num_objects(); ++b) {
    section[b] = provider.section(b);
    if (section[b] >= A.num_objects() || fa[section[b]] != e.fiber_b[b])
      return bad("section not over the index at object " +
                 std::to_string(b));
  }
  for (Idx m = 0; m < B.num_arrows(); ++m) {
    Zigzag z = provider.zig_arrow(m);
    if (z.from != section[B.src(m)] || z.to != section[B.dst(m)] ||
        !z.validate(A))
      return bad("invalid arrow zigzag at " + B.arrow(m).label);
    ++out.witnesses;
    out.total_steps += z.steps.size();
  }
  for (Idx b = 0; b < B.num_objects(); ++b) {
    Zigzag z = provider.zig_b(b);
    if (z.from != b || z.to != e.u.ob[section[b]] || !z.validate(B))
      return bad("invalid B zigzag at object " + std::to_string(b));
    ++out.witnesses;
    out.total_steps += z.steps.size();
  }
  for (Idx a = 0; a < A.num_objects(); ++a) {
    Zigzag z = provider.zig_a(a);
    if (z.from != a || z.to != section[e.u.ob[a]] || !z.validate(A))
      return bad("invalid A zigzag at object " + std::to_string(a));
    ++out.witnesses;
    out.total_steps += z.steps.size();
  }
  out.holds = true;
  return out;
}

// ---------------------------------------------------------------------------
// The semantic oracle: compare (vu)_! (vu)^* -> v_! v^* in the theory's
// diagram category, on the constant terminal coefficient and on supplied
// coefficients over the index.

// coefficient objects over the index, one per theory kind
struct Coefficients {
  std::vector<FinSet> sets;          // per index element (set theory)
  std::vector<char> props;           // per index element
  std::vector<PosObject> carriers;   // per index element
  std::vector<SetoidPtr> setoids;    // per index element (sex / reg)
};

inline Coefficients terminal_coefficients(const FinSet& index) {
  Coefficients c;
  c.sets.assign(index.size, FinSet(1));
  c.props.assign(index.size, 1);
  c.carriers.assign(index.size, PosObject{1, false});
  c.setoids.assign(index.size, mk(terminal_setoid()));
  return c;
}

namespace detail {

// local functor between the fibers of u over one index element
struct LocalFiber {
  Fiber fa, fb;
  std::vector<Idx> ob_map, arr_map;  // fiber-local action of u
};

inline std::vector<LocalFiber> local_fibers(const EquivInstance& e) {
  std::vector<Idx> fa = e.fiber_a();
  CatOverSet va{e.u.dom, e.index, fa};
  CatOverSet vb{e.u.cod, e.index, e.fiber_b};
  auto fas = fibers(va);
  auto fbs = fibers(vb);
  std::vector<LocalFiber> out;
  for (Idx i = 0; i < e.index.size; ++i) {
    LocalFiber lf{fas[i], fbs[i], {}, {}};
    std::vector<Idx> obj_local_b(e.u.cod->num_objects(), kNone);
    for (Idx j = 0; j < lf.fb.object_of.size(); ++j)
      obj_local_b[lf.fb.object_of[j]] = j;
    std::vector<Idx> arr_local_b(e.u.cod->num_arrows(), kNone);
    for (Idx j = 0; j < lf.fb.arrow_of.size(); ++j)
      arr_local_b[lf.fb.arrow_of[j]] = j;
    for (Idx o : lf.fa.object_of) lf.ob_map.push_back(obj_local_b[e.u.ob[o]]);
    for (Idx a : lf.fa.arrow_of) lf.arr_map.push_back(arr_local_b[e.u.arr[a]]);
    out.push_back(std::move(lf));
  }
  return out;
}

}  // namespace detail

inline EquivResult semantic_equiv_oracle(Theory t, const EquivInstance& e,
                                         const Coefficients& coeff,
                                         Idx cap = kDefaultWordCap) {
  EquivResult out;
  if (t == Theory::contr) {
    out.holds = true;
    return out;
  }
  auto locals = detail::local_fibers(e);
  for (Idx i = 0; i < e.index.size; ++i) {
    const detail::LocalFiber& lf = locals[i];
    switch (t) {
      case Theory::set: {
        // copowers by pi0 of the fibers; the canonical map is the copower of
        // pi0(u_i), an isomorphism iff a bijection
        Pi0 p_a = pi0(lf.fa.cat);
        Pi0 p_b = pi0(lf.fb.cat);
        std::vector<Idx> m(p_a.components.size);
        std::vector<bool> hit(p_b.components.size, false);
        bool inj = true;
        for (Idx o = 0; o < lf.fa.object_of.size(); ++o)
          m[p_a.component_of[o]] = p_b.component_of[lf.ob_map[o]];
        for (Idx c = 0; c < p_a.components.size; ++c) {
          if (hit[m[c]]) inj = false;
          hit[m[c]] = true;
        }
        bool surj = true;
        for (bool h : hit) surj = surj && h;
        bool bij = inj && surj && p_a.components.size == p_b.components.size;
        if (coeff.sets[i].size == 0) bij = true;  // empty coefficient collapses
        if (!bij) {
          out.detail = "set: copower comparison fails over " + e.index.label(i);
          return out;
        }
        break;
      }
      case Theory::prop: {
        bool lhs = lf.fa.object_of.size() > 0 && coeff.props[i];
        bool rhs = lf.fb.object_of.size() > 0 && coeff.props[i];
        if (lhs != rhs) {
          out.detail = "prop: join comparison fails over " + e.index.label(i);
          return out;
        }
        break;
      }
      case Theory::pos: {
        bool lhs = lf.fa.object_of.size() > 0 && coeff.carriers[i].inhabited();
        bool rhs = lf.fb.object_of.size() > 0 && coeff.carriers[i].inhabited();
        if (lhs != rhs) {
          out.detail = "pos: copower comparison fails over " + e.index.label(i);
          return out;
        }
        break;
      }
      case Theory::sex:
      case Theory::reg: {
        // fiberwise colimits of the constant coefficient diagram and the
        // canonical map induced by u
        CatPtr ca = mk(lf.fa.cat), cb = mk(lf.fb.cat);
        DiagPtr da = mk(constant_diagram(ca, coeff.setoids[i]));
        DiagPtr db = mk(constant_diagram(cb, coeff.setoids[i]));
        ColimitData col_a = colimit_over(ca, da, cap);
        ColimitData col_b = colimit_over(cb, db, cap);
        std::vector<Idx> f0(col_a.C->points());
        for (Idx p = 0; p < f0.size(); ++p) {
          auto [o, x] = col_a.c0_of[p];
          f0[p] = col_b.inj(lf.ob_map[o], x);
        }
        std::vector<Wit> imgs;
        const Setoid& coef = *coeff.setoids[i];
        for (const ColimitGen& g : col_a.gens) {
          Idx e2 = coef.rep == Setoid::Rep::free
                       ? col_b.find_gen(lf.arr_map[g.alpha], g.x, g.xp, nullptr)
                       : col_b.find_gen(lf.arr_map[g.alpha], g.x, g.xp, &g.xi);
          imgs.push_back(Wit(
              Word{col_b.inj(lf.ob_map[col_a.shape->src(g.alpha)]
                                 , g.x),
                   {{e2, true}}}));
        }
        MorRep canonical =
            free_extend(col_a.C, col_b.C, std::move(f0), std::move(imgs));
        bool ok;
        if (t == Theory::sex) {
          ok = is_iso(canonical).holds;
        } else {
          // compare in Sreg: iso of the relational images
          auto rel_of = [](const Setoid& s) {
            std::vector<std::pair<Idx, Idx>> pairs;
            for (Idx p = 0; p < s.points(); ++p)
              for (Idx q = 0; q < s.points(); ++q)
                if (s.related(p, q)) pairs.push_back({p, q});
            return mk(relational_setoid(s.carrier, std::move(pairs)));
          };
          SetoidPtr ra = rel_of(*col_a.C), rb = rel_of(*col_b.C);
          auto rmor = mor_auto(ra, rb, canonical.f0);
          ok = rmor.has_value() && is_iso(*rmor).holds;
        }
        if (!ok) {
          out.detail = std::string(theory_name(t)) +
                       ": colimit comparison fails over " + e.index.label(i);
          return out;
        }
        break;
      }
      case Theory::contr: break;
    }
  }
  out.holds = true;
  return out;
}

}  // namespace setoids
