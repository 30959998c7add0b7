#pragma once

// Finite categories given by explicit object/arrow tables with total
// composition, plus the constructions everything else consumes: functors,
// natural transformations, comma categories, Grothendieck constructions,
// pi0, discrete-object categories and zigzag search.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace setoids {

using Idx = std::size_t;
inline constexpr Idx kNone = static_cast<Idx>(-1);

[[noreturn]] inline void fail(const std::string& msg) {
  throw std::runtime_error(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

inline std::uint64_t pair_key(Idx a, Idx b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

// ---------------------------------------------------------------------------
// FinSet

struct FinSet {
  Idx size = 0;
  std::vector<std::string> labels;  // empty, or one distinct label per element

  FinSet() = default;
  explicit FinSet(Idx n) : size(n) {}
  FinSet(Idx n, std::vector<std::string> ls) : size(n), labels(std::move(ls)) {}

  std::string label(Idx i) const {
    if (i < labels.size()) return labels[i];
    return "e" + std::to_string(i);
  }

  void validate() const {
    if (labels.empty()) return;
    require(labels.size() == size, "FinSet: label count != size");
    auto sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "FinSet: duplicate labels");
  }
};

// ---------------------------------------------------------------------------
// FinCat

struct Arrow {
  Idx src = 0;
  Idx dst = 0;
  std::string label;
};

class FinCat {
 public:
  FinSet objects;
  std::vector<Arrow> arrows;
  std::vector<Idx> identity_of;  // object -> identity arrow

  Idx num_objects() const { return objects.size; }
  Idx num_arrows() const { return arrows.size(); }
  const Arrow& arrow(Idx a) const { return arrows.at(a); }
  Idx src(Idx a) const { return arrows[a].src; }
  Idx dst(Idx a) const { return arrows[a].dst; }
  Idx identity(Idx obj) const { return identity_of.at(obj); }
  bool is_identity(Idx a) const { return identity_of[arrows[a].src] == a; }

  bool discrete() const {
    return arrows.size() == objects.size;  // identities only
  }

  std::optional<Idx> try_compose(Idx g, Idx f) const {
    // g after f; defined iff dst(f) == src(g)
    if (dst(f) != src(g)) return std::nullopt;
    if (is_identity(f)) return g;
    if (is_identity(g)) return f;
    auto it = comp_.find(pair_key(g, f));
    if (it == comp_.end()) return std::nullopt;
    return it->second;
  }

  Idx compose(Idx g, Idx f) const {
    auto c = try_compose(g, f);
    require(c.has_value(), "FinCat: composite " + arrows[g].label + " . " +
                               arrows[f].label + " missing");
    return *c;
  }

  void set_composite(Idx g, Idx f, Idx h) { comp_[pair_key(g, f)] = h; }

  template <class Fn>
  void for_each_composable(Fn&& fn) const {
    // enumerate all composable (g, f) pairs, including identity pairs
    for (Idx f = 0; f < arrows.size(); ++f) {
      for (Idx g = 0; g < arrows.size(); ++g) {
        if (dst(f) != src(g)) continue;
        fn(g, f, compose(g, f));
      }
    }
  }

  // Structural checks: identities present with the right endpoints and
  // neutral, composition total on composable pairs with correct endpoints.
  void validate_structure() const {
    objects.validate();
    require(identity_of.size() == num_objects(), "FinCat: identity table size");
    for (Idx o = 0; o < num_objects(); ++o) {
      Idx i = identity_of[o];
      require(i < arrows.size() && src(i) == o && dst(i) == o,
              "FinCat: bad identity at object " + objects.label(o));
    }
    for (Idx f = 0; f < arrows.size(); ++f) {
      for (Idx g = 0; g < arrows.size(); ++g) {
        if (dst(f) != src(g)) continue;
        auto c = try_compose(g, f);
        require(c.has_value(), "FinCat: composition table missing " +
                                   arrows[g].label + " . " + arrows[f].label);
        require(src(*c) == src(f) && dst(*c) == dst(g),
                "FinCat: composite endpoints wrong for " + arrows[g].label +
                    " . " + arrows[f].label);
      }
    }
    for (const auto& [key, h] : comp_) {
      Idx g = static_cast<Idx>(key >> 32);
      Idx f = static_cast<Idx>(key & 0xffffffffu);
      require(g < arrows.size() && f < arrows.size() && h < arrows.size() &&
                  dst(f) == src(g),
              "FinCat: composition entry on non-composable pair");
    }
  }

  // Exhaustive unit and associativity laws. Quadratic/cubic in arrows; meant
  // for desk-scale categories, not for Grothendieck totals.
  void validate(bool deep = true) const {
    validate_structure();
    if (!deep) return;
    for (Idx f = 0; f < arrows.size(); ++f) {
      require(compose(f, identity_of[src(f)]) == f, "FinCat: right unit law");
      require(compose(identity_of[dst(f)], f) == f, "FinCat: left unit law");
    }
    for (Idx f = 0; f < arrows.size(); ++f)
      for (Idx g = 0; g < arrows.size(); ++g) {
        if (dst(f) != src(g)) continue;
        Idx gf = compose(g, f);
        for (Idx h = 0; h < arrows.size(); ++h) {
          if (dst(g) != src(h)) continue;
          require(compose(h, gf) == compose(compose(h, g), f),
                  "FinCat: associativity fails at (" + arrows[h].label + ", " +
                      arrows[g].label + ", " + arrows[f].label + ")");
        }
      }
  }

  std::unordered_map<std::uint64_t, Idx> comp_;
};

using CatPtr = std::shared_ptr<const FinCat>;

inline CatPtr mk(FinCat c) { return std::make_shared<const FinCat>(std::move(c)); }

// Incremental builder; identities and unit composites are filled in
// automatically, nonidentity composites must be supplied explicitly.
class FinCatBuilder {
 public:
  Idx add_object(std::string label) {
    labels_.push_back(std::move(label));
    return labels_.size() - 1;
  }
  Idx add_arrow(std::string label, Idx src, Idx dst) {
    arrows_.push_back({src, dst, std::move(label)});
    return arrows_.size() - 1;
  }
  void set_composite(Idx g, Idx f, Idx h) { comps_.push_back({g, f, h}); }

  FinCat finish() const {
    FinCat c;
    Idx n = labels_.size();
    c.objects = FinSet(n, labels_);
    c.identity_of.resize(n);
    for (Idx o = 0; o < n; ++o) {
      c.identity_of[o] = c.arrows.size();
      c.arrows.push_back({o, o, "1_" + labels_[o]});
    }
    Idx base = n;
    for (const auto& a : arrows_) c.arrows.push_back(a);
    for (const auto& [g, f, h] : comps_)
      c.set_composite(base + g, base + f, base + h);
    c.validate();
    return c;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Arrow> arrows_;
  std::vector<std::tuple<Idx, Idx, Idx>> comps_;
};

// --- stock shapes ----------------------------------------------------------

inline FinCat one_cat() {
  FinCatBuilder b;
  b.add_object("*");
  return b.finish();
}

// the interval 0 -> 1
inline FinCat arrow_cat() {
  FinCatBuilder b;
  b.add_object("0");
  b.add_object("1");
  b.add_arrow("f", 0, 1);
  return b.finish();
}

// two parallel arrows  . => .
inline FinCat pair_cat() {
  FinCatBuilder b;
  b.add_object("0");
  b.add_object("1");
  b.add_arrow("f", 0, 1);
  b.add_arrow("g", 0, 1);
  return b.finish();
}

// a <- m -> b
inline FinCat span_cat() {
  FinCatBuilder b;
  b.add_object("m");
  b.add_object("a");
  b.add_object("b");
  b.add_arrow("l", 0, 1);
  b.add_arrow("r", 0, 2);
  return b.finish();
}

// commutative square, the poset 2x2
inline FinCat square_cat() {
  FinCatBuilder b;
  b.add_object("00");
  b.add_object("01");
  b.add_object("10");
  b.add_object("11");
  Idx t = b.add_arrow("t", 0, 1);   // 00 -> 01
  Idx l = b.add_arrow("l", 0, 2);   // 00 -> 10
  Idx r = b.add_arrow("r", 1, 3);   // 01 -> 11
  Idx bo = b.add_arrow("b", 2, 3);  // 10 -> 11
  Idx d = b.add_arrow("d", 0, 3);   // diagonal
  b.set_composite(r, t, d);
  b.set_composite(bo, l, d);
  return b.finish();
}

inline FinCat discrete_cat(Idx n, const std::string& prefix = "d") {
  FinCatBuilder b;
  for (Idx i = 0; i < n; ++i) b.add_object(prefix + std::to_string(i));
  return b.finish();
}

// ---------------------------------------------------------------------------
// Functor

struct Functor {
  CatPtr dom, cod;
  std::vector<Idx> ob;   // object map
  std::vector<Idx> arr;  // arrow map

  Idx on_ob(Idx o) const { return ob.at(o); }
  Idx on_arr(Idx a) const { return arr.at(a); }

  void validate() const {
    require(ob.size() == dom->num_objects() && arr.size() == dom->num_arrows(),
            "Functor: table sizes");
    for (Idx o = 0; o < ob.size(); ++o)
      require(ob[o] < cod->num_objects(), "Functor: object out of range");
    for (Idx a = 0; a < arr.size(); ++a) {
      require(arr[a] < cod->num_arrows(), "Functor: arrow out of range");
      require(cod->src(arr[a]) == ob[dom->src(a)] &&
                  cod->dst(arr[a]) == ob[dom->dst(a)],
              "Functor: does not preserve endpoints at " +
                  dom->arrow(a).label);
    }
    for (Idx o = 0; o < ob.size(); ++o)
      require(arr[dom->identity(o)] == cod->identity(ob[o]),
              "Functor: does not preserve identity at " + dom->objects.label(o));
    dom->for_each_composable([&](Idx g, Idx f, Idx gf) {
      require(cod->compose(arr[g], arr[f]) == arr[gf],
              "Functor: does not preserve composition at (" +
                  dom->arrow(g).label + ", " + dom->arrow(f).label + ")");
    });
  }
};

inline Functor identity_functor(CatPtr c) {
  Functor u;
  u.dom = u.cod = c;
  u.ob.resize(c->num_objects());
  u.arr.resize(c->num_arrows());
  for (Idx o = 0; o < u.ob.size(); ++o) u.ob[o] = o;
  for (Idx a = 0; a < u.arr.size(); ++a) u.arr[a] = a;
  return u;
}

inline Functor compose_functor(const Functor& g, const Functor& f) {
  require(f.cod.get() == g.dom.get() ||
              (f.cod->num_objects() == g.dom->num_objects() &&
               f.cod->num_arrows() == g.dom->num_arrows()),
          "compose_functor: domain mismatch");
  Functor h;
  h.dom = f.dom;
  h.cod = g.cod;
  h.ob.resize(f.ob.size());
  h.arr.resize(f.arr.size());
  for (Idx o = 0; o < f.ob.size(); ++o) h.ob[o] = g.ob[f.ob[o]];
  for (Idx a = 0; a < f.arr.size(); ++a) h.arr[a] = g.arr[f.arr[a]];
  return h;
}

// constant functor A -> ONE-like category at an object
inline Functor const_functor(CatPtr dom, CatPtr cod, Idx obj) {
  Functor u;
  u.dom = dom;
  u.cod = cod;
  u.ob.assign(dom->num_objects(), obj);
  u.arr.assign(dom->num_arrows(), cod->identity(obj));
  return u;
}

// the functor ONE -> C picking an object
inline Functor point_functor(CatPtr one, CatPtr c, Idx obj) {
  return const_functor(one, c, obj);
}

// ---------------------------------------------------------------------------
// NatTrans

struct NatTrans {
  Functor dom, cod;            // parallel functors u, v : A -> B
  std::vector<Idx> component;  // object of A -> arrow of B

  void validate() const {
    const FinCat& A = *dom.dom;
    const FinCat& B = *dom.cod;
    require(component.size() == A.num_objects(), "NatTrans: component count");
    for (Idx a = 0; a < component.size(); ++a) {
      Idx m = component[a];
      require(B.src(m) == dom.ob[a] && B.dst(m) == cod.ob[a],
              "NatTrans: component endpoints at " + A.objects.label(a));
    }
    for (Idx f = 0; f < A.num_arrows(); ++f) {
      Idx a = A.src(f), a2 = A.dst(f);
      require(B.compose(component[a2], dom.arr[f]) ==
                  B.compose(cod.arr[f], component[a]),
              "NatTrans: naturality fails at " + A.arrow(f).label);
    }
  }
};

inline NatTrans identity_nat(const Functor& u) {
  NatTrans n;
  n.dom = n.cod = u;
  n.component.resize(u.dom->num_objects());
  for (Idx a = 0; a < n.component.size(); ++a)
    n.component[a] = u.cod->identity(u.ob[a]);
  return n;
}

inline NatTrans vcompose_nat(const NatTrans& nu, const NatTrans& mu) {
  // nu after mu (vertical composition)
  NatTrans r;
  r.dom = mu.dom;
  r.cod = nu.cod;
  r.component.resize(mu.component.size());
  for (Idx a = 0; a < r.component.size(); ++a)
    r.component[a] = mu.dom.cod->compose(nu.component[a], mu.component[a]);
  return r;
}

// ---------------------------------------------------------------------------
// CatOverSet: a category fibred over a discrete index set

struct CatOverSet {
  CatPtr total;
  FinSet base;
  std::vector<Idx> fiber_of;  // object of total -> base element

  void validate() const {
    require(fiber_of.size() == total->num_objects(), "CatOverSet: table size");
    for (Idx o = 0; o < fiber_of.size(); ++o)
      require(fiber_of[o] < base.size, "CatOverSet: fiber out of range");
    for (Idx a = 0; a < total->num_arrows(); ++a)
      require(fiber_of[total->src(a)] == fiber_of[total->dst(a)],
              "CatOverSet: arrow crosses fibers");
  }
};

inline CatOverSet over_point(CatPtr c) {
  CatOverSet v;
  v.total = c;
  v.base = FinSet(1, {"*"});
  v.fiber_of.assign(c->num_objects(), 0);
  return v;
}

struct Fiber {
  FinCat cat;
  std::vector<Idx> object_of;  // fiber object -> total object
  std::vector<Idx> arrow_of;   // fiber arrow -> total arrow
};

inline std::vector<Fiber> fibers(const CatOverSet& v) {
  std::vector<Fiber> out(v.base.size);
  const FinCat& T = *v.total;
  std::vector<Idx> obj_local(T.num_objects(), kNone);
  for (Idx i = 0; i < v.base.size; ++i) {
    Fiber& fb = out[i];
    for (Idx o = 0; o < T.num_objects(); ++o)
      if (v.fiber_of[o] == i) {
        obj_local[o] = fb.object_of.size();
        fb.object_of.push_back(o);
        fb.cat.objects.labels.push_back(T.objects.label(o));
      }
    fb.cat.objects.size = fb.object_of.size();
  }
  std::vector<Idx> arr_local(T.num_arrows(), kNone);
  for (Idx a = 0; a < T.num_arrows(); ++a) {
    Idx i = v.fiber_of[T.src(a)];
    Fiber& fb = out[i];
    arr_local[a] = fb.arrow_of.size();
    fb.arrow_of.push_back(a);
    fb.cat.arrows.push_back(
        {obj_local[T.src(a)], obj_local[T.dst(a)], T.arrow(a).label});
  }
  for (Idx i = 0; i < v.base.size; ++i) {
    Fiber& fb = out[i];
    fb.cat.identity_of.resize(fb.object_of.size());
    for (Idx o = 0; o < fb.object_of.size(); ++o)
      fb.cat.identity_of[o] = arr_local[T.identity(fb.object_of[o])];
  }
  v.total->for_each_composable([&](Idx g, Idx f, Idx gf) {
    Idx i = v.fiber_of[T.src(f)];
    out[i].cat.set_composite(arr_local[g], arr_local[f], arr_local[gf]);
  });
  return out;
}

// ---------------------------------------------------------------------------
// pi0 and discrete-object category

struct Pi0 {
  FinSet components;
  std::vector<Idx> component_of;  // object -> component
};

namespace detail {
class UnionFind {
 public:
  explicit UnionFind(Idx n) : parent_(n) {
    for (Idx i = 0; i < n; ++i) parent_[i] = i;
  }
  Idx find(Idx x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(Idx a, Idx b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);  // keep least index as root
    parent_[a] = b;
  }
  // canonical classes numbered by least representative, in index order
  std::pair<FinSet, std::vector<Idx>> partition() {
    std::vector<Idx> cls(parent_.size(), kNone);
    Idx n = 0;
    for (Idx i = 0; i < parent_.size(); ++i)
      if (find(i) == i) cls[i] = n++;
    std::vector<Idx> of(parent_.size());
    for (Idx i = 0; i < parent_.size(); ++i) of[i] = cls[find(i)];
    return {FinSet(n), of};
  }

 private:
  std::vector<Idx> parent_;
};
}  // namespace detail

inline Pi0 pi0(const FinCat& c) {
  detail::UnionFind uf(c.num_objects());
  for (Idx a = 0; a < c.num_arrows(); ++a) uf.unite(c.src(a), c.dst(a));
  auto [set, of] = uf.partition();
  return {set, of};
}

struct DiscreteOf {
  CatPtr cat;
  Functor incl;  // ob(A) -> A, identity on objects
};

inline DiscreteOf ob_discrete(CatPtr a) {
  FinCat d;
  d.objects = a->objects;
  d.identity_of.resize(a->num_objects());
  for (Idx o = 0; o < a->num_objects(); ++o) {
    d.identity_of[o] = o;
    d.arrows.push_back({o, o, "1_" + a->objects.label(o)});
  }
  DiscreteOf out;
  out.cat = mk(std::move(d));
  out.incl.dom = out.cat;
  out.incl.cod = a;
  out.incl.ob.resize(a->num_objects());
  out.incl.arr.resize(a->num_objects());
  for (Idx o = 0; o < a->num_objects(); ++o) {
    out.incl.ob[o] = o;
    out.incl.arr[o] = a->identity(o);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Zigzags

struct ZigStep {
  Idx index = 0;  // arrow (or generator) index
  bool forward = true;
};

struct Zigzag {
  Idx from = 0, to = 0;
  std::vector<ZigStep> steps;

  bool validate(const FinCat& c) const {
    Idx at = from;
    for (const auto& st : steps) {
      if (st.index >= c.num_arrows()) return false;
      Idx s = c.src(st.index), t = c.dst(st.index);
      if (st.forward) {
        if (s != at) return false;
        at = t;
      } else {
        if (t != at) return false;
        at = s;
      }
    }
    return at == to;
  }
};

inline Zigzag reverse_zigzag(Zigzag z) {
  std::swap(z.from, z.to);
  std::reverse(z.steps.begin(), z.steps.end());
  for (auto& st : z.steps) st.forward = !st.forward;
  return z;
}

inline Zigzag concat_zigzag(const Zigzag& a, const Zigzag& b) {
  require(a.to == b.from, "concat_zigzag: endpoint mismatch");
  Zigzag z;
  z.from = a.from;
  z.to = b.to;
  z.steps = a.steps;
  z.steps.insert(z.steps.end(), b.steps.begin(), b.steps.end());
  return z;
}

// Shortest zigzag from x to y, ties broken by expanding arrows in index
// order (forward before backward); BFS first-visit order makes the result
// deterministic.
inline std::optional<Zigzag> zigzag_search(const FinCat& c, Idx x, Idx y) {
  require(x < c.num_objects() && y < c.num_objects(), "zigzag_search: range");
  if (x == y) return Zigzag{x, y, {}};
  // adjacency in (arrow, direction) order
  std::vector<std::vector<std::pair<ZigStep, Idx>>> adj(c.num_objects());
  for (Idx a = 0; a < c.num_arrows(); ++a) {
    if (c.src(a) == c.dst(a)) continue;  // loops never shorten a path
    adj[c.src(a)].push_back({{a, true}, c.dst(a)});
    adj[c.dst(a)].push_back({{a, false}, c.src(a)});
  }
  std::vector<std::pair<Idx, ZigStep>> pred(c.num_objects(), {kNone, {}});
  std::vector<bool> seen(c.num_objects(), false);
  std::deque<Idx> queue{x};
  seen[x] = true;
  while (!queue.empty()) {
    Idx at = queue.front();
    queue.pop_front();
    for (const auto& [step, next] : adj[at]) {
      if (seen[next]) continue;
      seen[next] = true;
      pred[next] = {at, step};
      if (next == y) {
        Zigzag z{x, y, {}};
        for (Idx o = y; o != x; o = pred[o].first)
          z.steps.push_back(pred[o].second);
        std::reverse(z.steps.begin(), z.steps.end());
        return z;
      }
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Products and coproducts of categories

struct ProductCat {
  CatPtr cat;
  Functor pi1, pi2;
  // object/arrow indexing helpers
  Idx nb_ = 0, ab_ = 0;
  Idx obj(Idx a, Idx b) const { return a * nb_ + b; }
  Idx arr(Idx f, Idx g) const { return f * ab_ + g; }
  std::pair<Idx, Idx> obj_parts(Idx o) const { return {o / nb_, o % nb_}; }
  std::pair<Idx, Idx> arr_parts(Idx m) const { return {m / ab_, m % ab_}; }
};

inline ProductCat product_cat(CatPtr A, CatPtr B) {
  ProductCat out;
  out.nb_ = B->num_objects();
  out.ab_ = B->num_arrows();
  FinCat P;
  P.objects.size = A->num_objects() * B->num_objects();
  for (Idx a = 0; a < A->num_objects(); ++a)
    for (Idx b = 0; b < B->num_objects(); ++b)
      P.objects.labels.push_back("(" + A->objects.label(a) + "," +
                                 B->objects.label(b) + ")");
  for (Idx f = 0; f < A->num_arrows(); ++f)
    for (Idx g = 0; g < B->num_arrows(); ++g)
      P.arrows.push_back({out.obj(A->src(f), B->src(g)),
                          out.obj(A->dst(f), B->dst(g)),
                          "(" + A->arrow(f).label + "," + B->arrow(g).label +
                              ")"});
  P.identity_of.resize(P.objects.size);
  for (Idx a = 0; a < A->num_objects(); ++a)
    for (Idx b = 0; b < B->num_objects(); ++b)
      P.identity_of[out.obj(a, b)] = out.arr(A->identity(a), B->identity(b));
  A->for_each_composable([&](Idx g, Idx f, Idx gf) {
    B->for_each_composable([&](Idx g2, Idx f2, Idx gf2) {
      P.set_composite(out.arr(g, g2), out.arr(f, f2), out.arr(gf, gf2));
    });
  });
  out.cat = mk(std::move(P));
  out.pi1.dom = out.cat;
  out.pi1.cod = A;
  out.pi2.dom = out.cat;
  out.pi2.cod = B;
  for (Idx o = 0; o < out.cat->num_objects(); ++o) {
    auto [a, b] = out.obj_parts(o);
    out.pi1.ob.push_back(a);
    out.pi2.ob.push_back(b);
  }
  for (Idx m = 0; m < out.cat->num_arrows(); ++m) {
    auto [f, g] = out.arr_parts(m);
    out.pi1.arr.push_back(f);
    out.pi2.arr.push_back(g);
  }
  return out;
}

inline Functor pair_functor(const ProductCat& p, const Functor& u,
                            const Functor& v) {
  // <u, v> : C -> A x B for u : C -> A, v : C -> B
  Functor h;
  h.dom = u.dom;
  h.cod = p.cat;
  for (Idx o = 0; o < u.ob.size(); ++o) h.ob.push_back(p.obj(u.ob[o], v.ob[o]));
  for (Idx a = 0; a < u.arr.size(); ++a)
    h.arr.push_back(p.arr(u.arr[a], v.arr[a]));
  return h;
}

struct CoproductCat {
  CatPtr cat;
  Functor inl, inr;
  Idx obj_offset = 0, arr_offset = 0;
};

inline CoproductCat coproduct_cat(CatPtr A, CatPtr B) {
  FinCat S;
  S.objects.size = A->num_objects() + B->num_objects();
  for (Idx o = 0; o < A->num_objects(); ++o)
    S.objects.labels.push_back("l:" + A->objects.label(o));
  for (Idx o = 0; o < B->num_objects(); ++o)
    S.objects.labels.push_back("r:" + B->objects.label(o));
  Idx ob_off = A->num_objects(), ar_off = A->num_arrows();
  for (Idx a = 0; a < A->num_arrows(); ++a)
    S.arrows.push_back({A->src(a), A->dst(a), "l:" + A->arrow(a).label});
  for (Idx a = 0; a < B->num_arrows(); ++a)
    S.arrows.push_back(
        {B->src(a) + ob_off, B->dst(a) + ob_off, "r:" + B->arrow(a).label});
  S.identity_of.resize(S.objects.size);
  for (Idx o = 0; o < A->num_objects(); ++o) S.identity_of[o] = A->identity(o);
  for (Idx o = 0; o < B->num_objects(); ++o)
    S.identity_of[o + ob_off] = B->identity(o) + ar_off;
  A->for_each_composable([&](Idx g, Idx f, Idx gf) { S.set_composite(g, f, gf); });
  B->for_each_composable([&](Idx g, Idx f, Idx gf) {
    S.set_composite(g + ar_off, f + ar_off, gf + ar_off);
  });
  CoproductCat out;
  out.obj_offset = ob_off;
  out.arr_offset = ar_off;
  out.cat = mk(std::move(S));
  out.inl.dom = A;
  out.inl.cod = out.cat;
  out.inr.dom = B;
  out.inr.cod = out.cat;
  for (Idx o = 0; o < A->num_objects(); ++o) out.inl.ob.push_back(o);
  for (Idx a = 0; a < A->num_arrows(); ++a) out.inl.arr.push_back(a);
  for (Idx o = 0; o < B->num_objects(); ++o) out.inr.ob.push_back(o + ob_off);
  for (Idx a = 0; a < B->num_arrows(); ++a) out.inr.arr.push_back(a + ar_off);
  return out;
}

struct DisjointUnion {
  CatPtr cat;
  CatOverSet over;                 // fibred over the summand index
  std::vector<Idx> obj_offset;     // per summand
  std::vector<Idx> arr_offset;
};

inline DisjointUnion disjoint_union(const std::vector<CatPtr>& parts) {
  FinCat S;
  DisjointUnion out;
  std::vector<Idx> fiber_of;
  for (Idx i = 0; i < parts.size(); ++i) {
    const FinCat& c = *parts[i];
    out.obj_offset.push_back(S.objects.size);
    out.arr_offset.push_back(S.arrows.size());
    std::string tag = std::to_string(i) + ":";
    for (Idx o = 0; o < c.num_objects(); ++o) {
      S.objects.labels.push_back(tag + c.objects.label(o));
      fiber_of.push_back(i);
    }
    for (Idx a = 0; a < c.num_arrows(); ++a)
      S.arrows.push_back({c.src(a) + out.obj_offset[i],
                          c.dst(a) + out.obj_offset[i],
                          tag + c.arrow(a).label});
    S.objects.size += c.num_objects();
    for (Idx o = 0; o < c.num_objects(); ++o)
      S.identity_of.push_back(c.identity(o) + out.arr_offset[i]);
    c.for_each_composable([&](Idx g, Idx f, Idx gf) {
      S.set_composite(g + out.arr_offset[i], f + out.arr_offset[i],
                      gf + out.arr_offset[i]);
    });
  }
  out.cat = mk(std::move(S));
  out.over.total = out.cat;
  out.over.base = FinSet(parts.size());
  out.over.fiber_of = std::move(fiber_of);
  return out;
}

// ---------------------------------------------------------------------------
// Comma categories

struct CommaObj {
  Idx a = 0, b = 0, gamma = 0;  // gamma : u a -> v b
};

struct CommaArr {
  Idx alpha = 0, beta = 0;
};

struct Comma {
  CatPtr cat;
  Functor p, q;   // projections to dom(u), dom(v)
  NatTrans cell;  // u p => v q, component gamma at (a, b, gamma)
  std::vector<CommaObj> objs;
  std::vector<CommaArr> arrs;  // aligned with cat arrows

  Idx find_obj(Idx a, Idx b, Idx gamma) const {
    for (Idx i = 0; i < objs.size(); ++i)
      if (objs[i].a == a && objs[i].b == b && objs[i].gamma == gamma) return i;
    fail("Comma: object not found");
  }
};

inline Comma comma(const Functor& u, const Functor& v) {
  require(u.cod.get() == v.cod.get() ||
              (u.cod->num_objects() == v.cod->num_objects() &&
               u.cod->num_arrows() == v.cod->num_arrows()),
          "comma: codomain mismatch");
  const FinCat& A = *u.dom;
  const FinCat& B = *v.dom;
  const FinCat& C = *u.cod;
  Comma out;
  FinCat K;
  for (Idx a = 0; a < A.num_objects(); ++a)
    for (Idx b = 0; b < B.num_objects(); ++b)
      for (Idx g = 0; g < C.num_arrows(); ++g) {
        if (C.src(g) != u.ob[a] || C.dst(g) != v.ob[b]) continue;
        out.objs.push_back({a, b, g});
        K.objects.labels.push_back("(" + A.objects.label(a) + "," +
                                   B.objects.label(b) + "," + C.arrow(g).label +
                                   ")");
      }
  K.objects.size = out.objs.size();
  auto obj_index = [&](Idx a, Idx b, Idx g) -> Idx {
    for (Idx i = 0; i < out.objs.size(); ++i)
      if (out.objs[i].a == a && out.objs[i].b == b && out.objs[i].gamma == g)
        return i;
    return kNone;
  };
  // arrows: pairs (alpha, beta) with gamma' . u(alpha) = v(beta) . gamma
  for (Idx i = 0; i < out.objs.size(); ++i)
    for (Idx j = 0; j < out.objs.size(); ++j) {
      const CommaObj &o1 = out.objs[i], &o2 = out.objs[j];
      for (Idx al = 0; al < A.num_arrows(); ++al) {
        if (A.src(al) != o1.a || A.dst(al) != o2.a) continue;
        for (Idx be = 0; be < B.num_arrows(); ++be) {
          if (B.src(be) != o1.b || B.dst(be) != o2.b) continue;
          if (C.compose(o2.gamma, u.arr[al]) != C.compose(v.arr[be], o1.gamma))
            continue;
          out.arrs.push_back({al, be});
          K.arrows.push_back({i, j,
                              "(" + A.arrow(al).label + "," +
                                  B.arrow(be).label + ")"});
        }
      }
    }
  auto arr_index = [&](Idx from, Idx to, Idx al, Idx be) -> Idx {
    for (Idx m = 0; m < K.arrows.size(); ++m)
      if (K.arrows[m].src == from && K.arrows[m].dst == to &&
          out.arrs[m].alpha == al && out.arrs[m].beta == be)
        return m;
    return kNone;
  };
  K.identity_of.resize(K.objects.size);
  for (Idx i = 0; i < out.objs.size(); ++i)
    K.identity_of[i] = arr_index(i, i, A.identity(out.objs[i].a),
                                 B.identity(out.objs[i].b));
  for (Idx m1 = 0; m1 < K.arrows.size(); ++m1)
    for (Idx m2 = 0; m2 < K.arrows.size(); ++m2) {
      if (K.arrows[m1].dst != K.arrows[m2].src) continue;
      Idx al = A.compose(out.arrs[m2].alpha, out.arrs[m1].alpha);
      Idx be = B.compose(out.arrs[m2].beta, out.arrs[m1].beta);
      Idx h = arr_index(K.arrows[m1].src, K.arrows[m2].dst, al, be);
      require(h != kNone, "comma: composite arrow missing");
      K.set_composite(m2, m1, h);
    }
  out.cat = mk(std::move(K));
  out.p.dom = out.cat;
  out.p.cod = u.dom;
  out.q.dom = out.cat;
  out.q.cod = v.dom;
  for (const auto& o : out.objs) {
    out.p.ob.push_back(o.a);
    out.q.ob.push_back(o.b);
  }
  for (const auto& m : out.arrs) {
    out.p.arr.push_back(m.alpha);
    out.q.arr.push_back(m.beta);
  }
  out.cell.dom = compose_functor(u, out.p);
  out.cell.cod = compose_functor(v, out.q);
  for (const auto& o : out.objs) out.cell.component.push_back(o.gamma);
  return out;
}

// slice (u / b) for an object b of cod(u), as the comma (u / const b)
inline Comma slice_under(const Functor& u, Idx b) {
  CatPtr one = mk(one_cat());
  return comma(u, point_functor(one, u.cod, b));
}

// coslice (b / u)
inline Comma slice_over(const Functor& u, Idx b) {
  CatPtr one = mk(one_cat());
  return comma(point_functor(one, u.cod, b), u);
}

// ---------------------------------------------------------------------------
// Cat-valued diagrams and the Grothendieck construction

struct CatDiagram {
  CatPtr shape;
  std::vector<CatPtr> fiber;  // per object
  std::vector<Functor> act;   // per arrow (including identities)

  void validate() const {
    require(fiber.size() == shape->num_objects() &&
                act.size() == shape->num_arrows(),
            "CatDiagram: table sizes");
    for (Idx a = 0; a < act.size(); ++a) {
      require(act[a].dom.get() == fiber[shape->src(a)].get() &&
                  act[a].cod.get() == fiber[shape->dst(a)].get(),
              "CatDiagram: action endpoints");
      act[a].validate();
    }
    for (Idx o = 0; o < fiber.size(); ++o) {
      const Functor& id = act[shape->identity(o)];
      for (Idx x = 0; x < id.ob.size(); ++x)
        require(id.ob[x] == x, "CatDiagram: identity action not identity");
      for (Idx x = 0; x < id.arr.size(); ++x)
        require(id.arr[x] == x, "CatDiagram: identity action not identity");
    }
    shape->for_each_composable([&](Idx g, Idx f, Idx gf) {
      const Functor c = compose_functor(act[g], act[f]);
      require(c.ob == act[gf].ob && c.arr == act[gf].arr,
              "CatDiagram: not strictly functorial at (" +
                  shape->arrow(g).label + ", " + shape->arrow(f).label + ")");
    });
  }
};

inline CatDiagram constant_cat_diagram(CatPtr shape, CatPtr f) {
  CatDiagram e;
  e.shape = shape;
  e.fiber.assign(shape->num_objects(), f);
  e.act.assign(shape->num_arrows(), identity_functor(f));
  for (auto& u : e.act) {
    u.dom = f;
    u.cod = f;
  }
  return e;
}

// strict map of Cat-valued diagrams over a common shape
struct CatDiagMap {
  std::vector<Functor> at;  // per object of the shape

  void validate(const CatDiagram& e, const CatDiagram& f) const {
    require(at.size() == e.fiber.size(), "CatDiagMap: component count");
    for (Idx o = 0; o < at.size(); ++o) {
      require(at[o].dom.get() == e.fiber[o].get() &&
                  at[o].cod.get() == f.fiber[o].get(),
              "CatDiagMap: component endpoints");
      at[o].validate();
    }
    for (Idx a = 0; a < e.act.size(); ++a) {
      const FinCat& sh = *e.shape;
      const Functor lhs = compose_functor(at[sh.dst(a)], e.act[a]);
      const Functor rhs = compose_functor(f.act[a], at[sh.src(a)]);
      require(lhs.ob == rhs.ob && lhs.arr == rhs.arr,
              "CatDiagMap: not strictly natural at " + sh.arrow(a).label);
    }
  }
};

struct GrothObj {
  Idx base = 0, fib = 0;
};

struct GrothArr {
  Idx gamma = 0, phi = 0;  // base arrow, fiber arrow in the target fiber
};

struct Groth {
  CatPtr cat;
  Functor proj;  // split opfibration to the shape
  std::vector<GrothObj> objs;
  std::vector<GrothArr> arrs;
  std::vector<std::vector<Idx>> obj_index;  // [base][fib] -> total object
  std::unordered_map<std::uint64_t, Idx> arr_index_;

  Idx obj(Idx base, Idx fib) const { return obj_index[base][fib]; }
  Idx arr(Idx from, Idx gamma, Idx phi) const {
    auto it = arr_index_.find(pair_key(from, pair_key_small(gamma, phi)));
    require(it != arr_index_.end(), "Groth: arrow not found");
    return it->second;
  }
  // opcartesian lift of gamma at a total object
  Idx opcartesian_lift(const CatDiagram& e, Idx total_obj, Idx gamma) const {
    Idx fib2 = e.act[gamma].ob[objs[total_obj].fib];
    Idx target_fiber_id = e.fiber[e.shape->dst(gamma)]->identity(fib2);
    return arr(total_obj, gamma, target_fiber_id);
  }

  static std::uint64_t pair_key_small(Idx a, Idx b) {
    return (static_cast<std::uint64_t>(a) << 20) | static_cast<std::uint64_t>(b);
  }
};

inline Groth grothendieck(const CatDiagram& e) {
  e.validate();
  const FinCat& A = *e.shape;
  Groth out;
  FinCat T;
  out.obj_index.resize(A.num_objects());
  for (Idx c = 0; c < A.num_objects(); ++c) {
    out.obj_index[c].resize(e.fiber[c]->num_objects());
    for (Idx x = 0; x < e.fiber[c]->num_objects(); ++x) {
      out.obj_index[c][x] = out.objs.size();
      out.objs.push_back({c, x});
      T.objects.labels.push_back("(" + A.objects.label(c) + "|" +
                                 e.fiber[c]->objects.label(x) + ")");
    }
  }
  T.objects.size = out.objs.size();
  // arrows (gamma, phi) : (c, x) -> (c', x') with phi : E_gamma(x) -> x'
  for (Idx o = 0; o < out.objs.size(); ++o) {
    const GrothObj& go = out.objs[o];
    for (Idx gamma = 0; gamma < A.num_arrows(); ++gamma) {
      if (A.src(gamma) != go.base) continue;
      Idx c2 = A.dst(gamma);
      Idx ex = e.act[gamma].ob[go.fib];
      for (Idx phi = 0; phi < e.fiber[c2]->num_arrows(); ++phi) {
        if (e.fiber[c2]->src(phi) != ex) continue;
        Idx o2 = out.obj_index[c2][e.fiber[c2]->dst(phi)];
        Idx m = out.arrs.size();
        out.arrs.push_back({gamma, phi});
        out.arr_index_[pair_key(o, Groth::pair_key_small(gamma, phi))] = m;
        T.arrows.push_back({o, o2,
                            "(" + A.arrow(gamma).label + "|" +
                                e.fiber[c2]->arrow(phi).label + ")"});
      }
    }
  }
  T.identity_of.resize(T.objects.size);
  for (Idx o = 0; o < out.objs.size(); ++o) {
    const GrothObj& go = out.objs[o];
    T.identity_of[o] =
        out.arr_index_[pair_key(o, Groth::pair_key_small(
                                       A.identity(go.base),
                                       e.fiber[go.base]->identity(go.fib)))];
  }
  // (gamma', phi') . (gamma, phi) = (gamma' gamma, phi' . E_gamma'(phi))
  for (Idx m1 = 0; m1 < out.arrs.size(); ++m1) {
    Idx mid = T.arrows[m1].dst;
    const GrothArr& a1 = out.arrs[m1];
    for (Idx gamma2 = 0; gamma2 < A.num_arrows(); ++gamma2) {
      if (A.src(gamma2) != out.objs[mid].base) continue;
      Idx c3 = A.dst(gamma2);
      Idx ex = e.act[gamma2].ob[out.objs[mid].fib];
      for (Idx phi2 = 0; phi2 < e.fiber[c3]->num_arrows(); ++phi2) {
        if (e.fiber[c3]->src(phi2) != ex) continue;
        Idx m2 = out.arr_index_[pair_key(
            mid, Groth::pair_key_small(gamma2, phi2))];
        Idx gam = A.compose(gamma2, a1.gamma);
        Idx phi = e.fiber[c3]->compose(phi2, e.act[gamma2].arr[a1.phi]);
        Idx h = out.arr_index_[pair_key(
            T.arrows[m1].src, Groth::pair_key_small(gam, phi))];
        T.set_composite(m2, m1, h);
      }
    }
  }
  out.cat = mk(std::move(T));
  out.proj.dom = out.cat;
  out.proj.cod = e.shape;
  for (const auto& go : out.objs) out.proj.ob.push_back(go.base);
  for (const auto& ga : out.arrs) out.proj.arr.push_back(ga.gamma);
  return out;
}

// canonical comparison for a constant family: int(const F) vs A x F
inline bool groth_constant_iso(const CatDiagram& e, const Groth& g) {
  // e must be constant at some fiber F
  ProductCat p = product_cat(e.shape, e.fiber[0]);
  if (p.cat->num_objects() != g.cat->num_objects() ||
      p.cat->num_arrows() != g.cat->num_arrows())
    return false;
  // canonical functor int(E) -> A x F: (c, x) -> (c, x); (gamma, phi) -> (gamma, phi)
  Functor h;
  h.dom = g.cat;
  h.cod = p.cat;
  for (const auto& go : g.objs) h.ob.push_back(p.obj(go.base, go.fib));
  for (const auto& ga : g.arrs) h.arr.push_back(p.arr(ga.gamma, ga.phi));
  h.validate();
  // bijective on objects and arrows
  std::vector<bool> seen_o(p.cat->num_objects(), false),
      seen_a(p.cat->num_arrows(), false);
  for (Idx o : h.ob) {
    if (seen_o[o]) return false;
    seen_o[o] = true;
  }
  for (Idx a : h.arr) {
    if (seen_a[a]) return false;
    seen_a[a] = true;
  }
  return true;
}

}  // namespace setoids
