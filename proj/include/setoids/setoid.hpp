#pragma once

// Pseudo-equivalence relations over finite sets, their morphism
// representatives and equality witnesses.
//
// Three concrete representations sit behind one interface:
//   tabular    - X1 is a finite set with explicit s, t, r, v, m tables
//   relational - X1 is a set of related pairs (an equivalence relation);
//                r is the diagonal, v the swap, m relational composition
//   free       - X1 is the set of zigzag words over a generating edge list;
//                r is the empty word, v reversal, m concatenation
// plus a derived "product" representation whose witnesses are pairs.
//
// Witness carriers may be infinite (free words), so functions out of X1 are
// represented as callables and enumeration is capped where it is needed.

#include "setoids/fincat.hpp"

#include <variant>

namespace setoids {

inline constexpr Idx kDefaultWordCap = 4;

// A zigzag word over the generating edges of a free setoid.
struct Word {
  Idx start = 0;
  std::vector<ZigStep> steps;
};

struct Wit;
using WitPair = std::pair<Wit, Wit>;

struct Wit {
  // index into the witness table (tabular) or pair list (relational),
  // a word (free), or a pair of witnesses (product)
  std::variant<Idx, Word, std::shared_ptr<const WitPair>> v;

  Wit() : v(Idx{0}) {}
  explicit Wit(Idx i) : v(i) {}
  explicit Wit(Word w) : v(std::move(w)) {}
  Wit(Wit l, Wit r)
      : v(std::make_shared<const WitPair>(std::move(l), std::move(r))) {}

  Idx index() const { return std::get<Idx>(v); }
  const Word& word() const { return std::get<Word>(v); }
  const WitPair& pair() const {
    return *std::get<std::shared_ptr<const WitPair>>(v);
  }
};

inline bool operator==(const ZigStep& a, const ZigStep& b) {
  return a.index == b.index && a.forward == b.forward;
}

inline bool operator==(const Word& a, const Word& b) {
  return a.start == b.start && a.steps == b.steps;
}

inline bool wit_eq(const Wit& a, const Wit& b) {
  if (a.v.index() != b.v.index()) return false;
  switch (a.v.index()) {
    case 0: return a.index() == b.index();
    case 1: return a.word() == b.word();
    default:
      return wit_eq(a.pair().first, b.pair().first) &&
             wit_eq(a.pair().second, b.pair().second);
  }
}

inline bool wit_less(const Wit& a, const Wit& b) {
  if (a.v.index() != b.v.index()) return a.v.index() < b.v.index();
  switch (a.v.index()) {
    case 0: return a.index() < b.index();
    case 1: {
      const Word &x = a.word(), &y = b.word();
      if (x.start != y.start) return x.start < y.start;
      if (x.steps.size() != y.steps.size())
        return x.steps.size() < y.steps.size();
      for (Idx i = 0; i < x.steps.size(); ++i) {
        if (x.steps[i].index != y.steps[i].index)
          return x.steps[i].index < y.steps[i].index;
        if (x.steps[i].forward != y.steps[i].forward)
          return x.steps[i].forward > y.steps[i].forward;
      }
      return false;
    }
    default:
      if (wit_less(a.pair().first, b.pair().first)) return true;
      if (wit_less(b.pair().first, a.pair().first)) return false;
      return wit_less(a.pair().second, b.pair().second);
  }
}

struct Partition {
  FinSet classes;
  std::vector<Idx> class_of;
  std::vector<Idx> rep_of;  // least-index representative per class

  bool same_as(const Partition& other) const {
    return classes.size == other.classes.size && class_of == other.class_of;
  }
};

template <class W>
struct Verdict {
  bool holds = false;
  std::optional<W> witness;
  std::string detail;
};

// ---------------------------------------------------------------------------
// Setoid

class Setoid {
 public:
  enum class Rep { tabular, relational, free, product };

  Rep rep = Rep::relational;
  FinSet carrier;  // X0

  // tabular
  FinSet wit_carrier;
  std::vector<Idx> s_table, t_table, r_table, v_table;
  std::unordered_map<std::uint64_t, Idx> m_table;

  // relational
  std::vector<std::pair<Idx, Idx>> pairs;  // sorted
  std::unordered_map<std::uint64_t, Idx> pair_index;

  // free
  std::vector<std::pair<Idx, Idx>> edges;

  // product
  std::shared_ptr<const Setoid> left, right;

  Idx points() const { return carrier.size; }

  Idx src(const Wit& w) const {
    switch (rep) {
      case Rep::tabular: return s_table.at(w.index());
      case Rep::relational: return pairs.at(w.index()).first;
      case Rep::free: return w.word().start;
      case Rep::product:
        return left->src(w.pair().first) * right->points() +
               right->src(w.pair().second);
    }
    fail("unreachable");
  }

  Idx tgt(const Wit& w) const {
    switch (rep) {
      case Rep::tabular: return t_table.at(w.index());
      case Rep::relational: return pairs.at(w.index()).second;
      case Rep::free: {
        Idx at = w.word().start;
        for (const auto& st : w.word().steps)
          at = st.forward ? edges[st.index].second : edges[st.index].first;
        return at;
      }
      case Rep::product:
        return left->tgt(w.pair().first) * right->points() +
               right->tgt(w.pair().second);
    }
    fail("unreachable");
  }

  Wit refl(Idx x) const {
    require(x < points(), "Setoid::refl: point out of range");
    switch (rep) {
      case Rep::tabular: return Wit(r_table.at(x));
      case Rep::relational: return Wit(pair_index.at(pair_key(x, x)));
      case Rep::free: return Wit(Word{x, {}});
      case Rep::product:
        return Wit(left->refl(x / right->points()),
                   right->refl(x % right->points()));
    }
    fail("unreachable");
  }

  Wit sym(const Wit& w) const {
    switch (rep) {
      case Rep::tabular: return Wit(v_table.at(w.index()));
      case Rep::relational: {
        auto [x, y] = pairs.at(w.index());
        return Wit(pair_index.at(pair_key(y, x)));
      }
      case Rep::free: {
        Word r = w.word();
        r.start = tgt(w);
        std::reverse(r.steps.begin(), r.steps.end());
        for (auto& st : r.steps) st.forward = !st.forward;
        return Wit(std::move(r));
      }
      case Rep::product:
        return Wit(left->sym(w.pair().first), right->sym(w.pair().second));
    }
    fail("unreachable");
  }

  Wit trans(const Wit& a, const Wit& b) const {
    require(tgt(a) == src(b), "Setoid::trans: not composable");
    switch (rep) {
      case Rep::tabular: {
        auto it = m_table.find(pair_key(a.index(), b.index()));
        require(it != m_table.end(), "Setoid::trans: m table missing entry");
        return Wit(it->second);
      }
      case Rep::relational:
        return Wit(pair_index.at(pair_key(src(a), tgt(b))));
      case Rep::free: {
        Word r = a.word();
        const Word& w2 = b.word();
        r.steps.insert(r.steps.end(), w2.steps.begin(), w2.steps.end());
        return Wit(std::move(r));
      }
      case Rep::product:
        return Wit(left->trans(a.pair().first, b.pair().first),
                   right->trans(a.pair().second, b.pair().second));
    }
    fail("unreachable");
  }

  // Left-associated composite of a nonempty list.
  Wit trans_all(const std::vector<Wit>& ws) const {
    require(!ws.empty(), "trans_all: empty");
    Wit acc = ws[0];
    for (Idx i = 1; i < ws.size(); ++i) acc = trans(acc, ws[i]);
    return acc;
  }

  // Decision procedure for witness existence; deterministic (shortest word,
  // lexicographic tie-break) so results are reproducible.
  std::optional<Wit> related(Idx x, Idx y) const {
    switch (rep) {
      case Rep::tabular: {
        if (x == y) return refl(x);
        for (Idx i = 0; i < wit_carrier.size; ++i)
          if (s_table[i] == x && t_table[i] == y) return Wit(i);
        return std::nullopt;
      }
      case Rep::relational: {
        auto it = pair_index.find(pair_key(x, y));
        if (it == pair_index.end()) return std::nullopt;
        return Wit(it->second);
      }
      case Rep::free: {
        if (x == y) return Wit(Word{x, {}});
        std::vector<std::vector<std::pair<ZigStep, Idx>>> adj(points());
        for (Idx e = 0; e < edges.size(); ++e) {
          if (edges[e].first == edges[e].second) continue;
          adj[edges[e].first].push_back({{e, true}, edges[e].second});
          adj[edges[e].second].push_back({{e, false}, edges[e].first});
        }
        std::vector<std::pair<Idx, ZigStep>> pred(points(), {kNone, {}});
        std::vector<bool> seen(points(), false);
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
              Word w{x, {}};
              for (Idx o = y; o != x; o = pred[o].first)
                w.steps.push_back(pred[o].second);
              std::reverse(w.steps.begin(), w.steps.end());
              return Wit(std::move(w));
            }
            queue.push_back(next);
          }
        }
        return std::nullopt;
      }
      case Rep::product: {
        auto l = left->related(x / right->points(), y / right->points());
        if (!l) return std::nullopt;
        auto r = right->related(x % right->points(), y % right->points());
        if (!r) return std::nullopt;
        return Wit(std::move(*l), std::move(*r));
      }
    }
    fail("unreachable");
  }

  // Quotient of X0 by the equivalence relation generated by {(s xi, t xi)};
  // classes are numbered by least representative.
  Partition quotient() const {
    detail::UnionFind uf(points());
    switch (rep) {
      case Rep::tabular:
        for (Idx i = 0; i < wit_carrier.size; ++i)
          uf.unite(s_table[i], t_table[i]);
        break;
      case Rep::relational:
        for (const auto& [x, y] : pairs) uf.unite(x, y);
        break;
      case Rep::free:
        for (const auto& [x, y] : edges) uf.unite(x, y);
        break;
      case Rep::product: {
        Partition pl = left->quotient(), pr = right->quotient();
        // classes of a product are pairs of classes
        std::unordered_map<std::uint64_t, Idx> first_with;
        for (Idx x = 0; x < points(); ++x) {
          std::uint64_t key = pair_key(pl.class_of[x / right->points()],
                                       pr.class_of[x % right->points()]);
          auto it = first_with.find(key);
          if (it == first_with.end())
            first_with.emplace(key, x);
          else
            uf.unite(it->second, x);
        }
        break;
      }
    }
    auto [classes, of] = uf.partition();
    Partition p{classes, of, {}};
    p.rep_of.assign(classes.size, kNone);
    for (Idx x = 0; x < points(); ++x)
      if (p.rep_of[of[x]] == kNone) p.rep_of[of[x]] = x;
    return p;
  }

  // Enumerate witnesses; `cap` bounds word length for free carriers.
  std::vector<Wit> witnesses(Idx cap) const {
    std::vector<Wit> out;
    switch (rep) {
      case Rep::tabular:
        for (Idx i = 0; i < wit_carrier.size; ++i) out.push_back(Wit(i));
        break;
      case Rep::relational:
        for (Idx i = 0; i < pairs.size(); ++i) out.push_back(Wit(i));
        break;
      case Rep::free:
        for (Idx x = 0; x < points(); ++x) {
          Word w{x, {}};
          enumerate_words(w, x, cap, out);
        }
        break;
      case Rep::product:
        for (const Wit& l : left->witnesses(cap))
          for (const Wit& r : right->witnesses(cap)) out.push_back(Wit(l, r));
        break;
    }
    return out;
  }

  std::vector<Wit> witnesses_between(Idx x, Idx y, Idx cap) const {
    std::vector<Wit> out;
    switch (rep) {
      case Rep::tabular:
        for (Idx i = 0; i < wit_carrier.size; ++i)
          if (s_table[i] == x && t_table[i] == y) out.push_back(Wit(i));
        break;
      case Rep::relational: {
        auto it = pair_index.find(pair_key(x, y));
        if (it != pair_index.end()) out.push_back(Wit(it->second));
        break;
      }
      case Rep::free: {
        Word w{x, {}};
        std::vector<Wit> all;
        enumerate_words(w, x, cap, all);
        for (auto& cand : all)
          if (tgt(cand) == y) out.push_back(std::move(cand));
        break;
      }
      case Rep::product:
        for (const Wit& l : left->witnesses_between(
                 x / right->points(), y / right->points(), cap))
          for (const Wit& r : right->witnesses_between(
                   x % right->points(), y % right->points(), cap))
            out.push_back(Wit(l, r));
        break;
    }
    return out;
  }

  // The five structure equations. Tabular and relational are exhaustive;
  // free is checked on words of length <= 3 (they hold symbolically).
  void validate(Idx cap = 3) const {
    carrier.validate();
    switch (rep) {
      case Rep::tabular: {
        require(s_table.size() == wit_carrier.size &&
                    t_table.size() == wit_carrier.size &&
                    v_table.size() == wit_carrier.size &&
                    r_table.size() == carrier.size,
                "Setoid: tabular table sizes");
        for (Idx i = 0; i < wit_carrier.size; ++i) {
          require(s_table[i] < points() && t_table[i] < points(),
                  "Setoid: s/t out of range");
          require(v_table[i] < wit_carrier.size, "Setoid: v out of range");
          require(s_table[v_table[i]] == t_table[i] &&
                      t_table[v_table[i]] == s_table[i],
                  "Setoid: sv = t, tv = s fail");
        }
        for (Idx x = 0; x < points(); ++x) {
          require(r_table[x] < wit_carrier.size, "Setoid: r out of range");
          require(s_table[r_table[x]] == x && t_table[r_table[x]] == x,
                  "Setoid: sr = tr = id fails");
        }
        for (Idx i = 0; i < wit_carrier.size; ++i)
          for (Idx j = 0; j < wit_carrier.size; ++j) {
            auto it = m_table.find(pair_key(i, j));
            if (t_table[i] != s_table[j]) {
              require(it == m_table.end(),
                      "Setoid: m defined on non-composable pair");
              continue;
            }
            require(it != m_table.end(), "Setoid: m missing composable pair");
            require(s_table[it->second] == s_table[i] &&
                        t_table[it->second] == t_table[j],
                    "Setoid: sm = s pi1, tm = t pi2 fail");
          }
        break;
      }
      case Rep::relational: {
        for (const auto& [x, y] : pairs)
          require(x < points() && y < points(), "Setoid: pair out of range");
        for (Idx x = 0; x < points(); ++x)
          require(pair_index.count(pair_key(x, x)),
                  "Setoid: relation not reflexive");
        for (const auto& [x, y] : pairs) {
          require(pair_index.count(pair_key(y, x)),
                  "Setoid: relation not symmetric");
          for (const auto& [y2, z] : pairs)
            if (y2 == y)
              require(pair_index.count(pair_key(x, z)),
                      "Setoid: relation not transitive");
        }
        break;
      }
      case Rep::free: {
        for (const auto& [x, y] : edges)
          require(x < points() && y < points(), "Setoid: edge out of range");
        for (const Wit& w : witnesses(std::min<Idx>(cap, 3))) {
          Idx x = src(w), y = tgt(w);
          require(src(refl(x)) == x && tgt(refl(x)) == x, "free: r law");
          require(src(sym(w)) == y && tgt(sym(w)) == x, "free: v law");
          Wit c = trans(w, sym(w));
          require(src(c) == x && tgt(c) == x, "free: m law");
        }
        break;
      }
      case Rep::product: {
        require(left && right, "Setoid: product parts missing");
        require(points() == left->points() * right->points(),
                "Setoid: product carrier size");
        left->validate(cap);
        right->validate(cap);
        break;
      }
    }
  }

 private:
  void enumerate_words(Word& w, Idx at, Idx cap, std::vector<Wit>& out) const {
    out.push_back(Wit(w));
    if (w.steps.size() >= cap) return;
    for (Idx e = 0; e < edges.size(); ++e) {
      if (edges[e].first == at) {
        w.steps.push_back({e, true});
        enumerate_words(w, edges[e].second, cap, out);
        w.steps.pop_back();
      }
      if (edges[e].second == at) {
        w.steps.push_back({e, false});
        enumerate_words(w, edges[e].first, cap, out);
        w.steps.pop_back();
      }
    }
  }
};

using SetoidPtr = std::shared_ptr<const Setoid>;

inline SetoidPtr mk(Setoid s) { return std::make_shared<const Setoid>(std::move(s)); }

inline bool same_setoid(const Setoid& a, const Setoid& b) {
  if (&a == &b) return true;
  if (a.rep != b.rep || a.points() != b.points()) return false;
  switch (a.rep) {
    case Setoid::Rep::tabular:
      return a.wit_carrier.size == b.wit_carrier.size &&
             a.s_table == b.s_table && a.t_table == b.t_table &&
             a.r_table == b.r_table && a.v_table == b.v_table &&
             a.m_table == b.m_table;
    case Setoid::Rep::relational: return a.pairs == b.pairs;
    case Setoid::Rep::free: return a.edges == b.edges;
    case Setoid::Rep::product:
      return same_setoid(*a.left, *b.left) && same_setoid(*a.right, *b.right);
  }
  return false;
}

inline bool same_setoid(const SetoidPtr& a, const SetoidPtr& b) {
  return a.get() == b.get() || same_setoid(*a, *b);
}

// --- constructors ----------------------------------------------------------

inline Setoid relational_setoid(FinSet x0,
                                std::vector<std::pair<Idx, Idx>> rel) {
  Setoid s;
  s.rep = Setoid::Rep::relational;
  s.carrier = std::move(x0);
  std::sort(rel.begin(), rel.end());
  rel.erase(std::unique(rel.begin(), rel.end()), rel.end());
  s.pairs = std::move(rel);
  for (Idx i = 0; i < s.pairs.size(); ++i)
    s.pair_index[pair_key(s.pairs[i].first, s.pairs[i].second)] = i;
  s.validate();  // rejects non-equivalence-relation input
  return s;
}

inline Setoid discrete_setoid(FinSet x0) {
  std::vector<std::pair<Idx, Idx>> diag;
  for (Idx x = 0; x < x0.size; ++x) diag.push_back({x, x});
  return relational_setoid(std::move(x0), std::move(diag));
}

inline Setoid terminal_setoid() { return discrete_setoid(FinSet(1, {"*"})); }

inline Setoid full_setoid(FinSet x0) {
  std::vector<std::pair<Idx, Idx>> all;
  for (Idx x = 0; x < x0.size; ++x)
    for (Idx y = 0; y < x0.size; ++y) all.push_back({x, y});
  return relational_setoid(std::move(x0), std::move(all));
}

inline Setoid free_setoid(FinSet x0, std::vector<std::pair<Idx, Idx>> edges) {
  Setoid s;
  s.rep = Setoid::Rep::free;
  s.carrier = std::move(x0);
  s.edges = std::move(edges);
  s.validate();
  return s;
}

inline Setoid product_setoid(SetoidPtr l, SetoidPtr r) {
  Setoid s;
  s.rep = Setoid::Rep::product;
  s.carrier = FinSet(l->points() * r->points());
  for (Idx x = 0; x < l->points(); ++x)
    for (Idx y = 0; y < r->points(); ++y)
      s.carrier.labels.push_back("(" + l->carrier.label(x) + "," +
                                 r->carrier.label(y) + ")");
  s.left = std::move(l);
  s.right = std::move(r);
  return s;
}

// ---------------------------------------------------------------------------
// Morphism representatives

struct MorRep {
  SetoidPtr dom, cod;
  std::vector<Idx> f0;
  std::function<Wit(const Wit&)> f1;

  Wit on_wit(const Wit& w) const { return f1(w); }

  // s f1 = f0 s and t f1 = f0 t, checked on the capped enumeration (all of
  // X1 for tabular/relational domains, generators and short words for free)
  void validate(Idx cap = 2) const {
    require(f0.size() == dom->points(), "MorRep: f0 size");
    for (Idx x : f0) require(x < cod->points(), "MorRep: f0 out of range");
    for (const Wit& w : dom->witnesses(cap)) {
      Wit fw = f1(w);
      require(cod->src(fw) == f0[dom->src(w)] &&
                  cod->tgt(fw) == f0[dom->tgt(w)],
              "MorRep: f1 does not lie over f0");
    }
  }
};

inline MorRep identity_mor(SetoidPtr x) {
  MorRep f;
  f.dom = f.cod = std::move(x);
  f.f0.resize(f.dom->points());
  for (Idx i = 0; i < f.f0.size(); ++i) f.f0[i] = i;
  f.f1 = [](const Wit& w) { return w; };
  return f;
}

inline MorRep mor_from_table(SetoidPtr dom, SetoidPtr cod, std::vector<Idx> f0,
                             std::vector<Wit> f1_table) {
  require(dom->rep == Setoid::Rep::tabular ||
              dom->rep == Setoid::Rep::relational,
          "mor_from_table: domain witness carrier must be finite");
  MorRep f;
  f.dom = std::move(dom);
  f.cod = std::move(cod);
  f.f0 = std::move(f0);
  f.f1 = [table = std::move(f1_table)](const Wit& w) {
    return table.at(w.index());
  };
  return f;
}

// The (weak) universal property of a free setoid: extend f0 plus generator
// images to all words. Backward steps go through v, the empty word through
// r, and longer words are combined by left-associated m.
inline MorRep free_extend(SetoidPtr dom, SetoidPtr cod, std::vector<Idx> f0,
                          std::vector<Wit> edge_images) {
  require(dom->rep == Setoid::Rep::free, "free_extend: domain not free");
  require(edge_images.size() == dom->edges.size(),
          "free_extend: one image per generator required");
  for (Idx e = 0; e < edge_images.size(); ++e)
    require(cod->src(edge_images[e]) == f0[dom->edges[e].first] &&
                cod->tgt(edge_images[e]) == f0[dom->edges[e].second],
            "free_extend: generator image not over f0 x f0");
  MorRep f;
  f.dom = dom;
  f.cod = cod;
  f.f0 = std::move(f0);
  f.f1 = [dom, cod = f.cod, f0v = f.f0,
          imgs = std::move(edge_images)](const Wit& w) {
    const Word& word = w.word();
    // n = 0 is the reflexivity operation; otherwise fold the entry images
    // with left-associated m so that f1 . eta = g on the nose
    if (word.steps.empty()) return cod->refl(f0v[word.start]);
    auto step_image = [&](const ZigStep& st) {
      return st.forward ? imgs[st.index] : cod->sym(imgs[st.index]);
    };
    Wit acc = step_image(word.steps[0]);
    for (Idx i = 1; i < word.steps.size(); ++i)
      acc = cod->trans(acc, step_image(word.steps[i]));
    return acc;
  };
  return f;
}

// Derive f1 by witness search; fails if some required witness is absent.
inline std::optional<MorRep> mor_auto(SetoidPtr dom, SetoidPtr cod,
                                      std::vector<Idx> f0, Idx cap = 2) {
  if (dom->rep == Setoid::Rep::free) {
    std::vector<Wit> imgs;
    for (const auto& [x, y] : dom->edges) {
      auto w = cod->related(f0[x], f0[y]);
      if (!w) return std::nullopt;
      imgs.push_back(std::move(*w));
    }
    return free_extend(dom, cod, std::move(f0), std::move(imgs));
  }
  // witness-by-witness search for the other representations
  for (const Wit& w : dom->witnesses(cap))
    if (!cod->related(f0[dom->src(w)], f0[dom->tgt(w)])) return std::nullopt;
  MorRep f;
  f.dom = dom;
  f.cod = cod;
  f.f0 = std::move(f0);
  f.f1 = [dom, cod, f0v = f.f0](const Wit& w) {
    return *cod->related(f0v[dom->src(w)], f0v[dom->tgt(w)]);
  };
  return f;
}

inline MorRep compose_mor(const MorRep& g, const MorRep& f) {
  require(same_setoid(f.cod, g.dom), "compose_mor: middle setoid mismatch");
  MorRep h;
  h.dom = f.dom;
  h.cod = g.cod;
  h.f0.resize(f.f0.size());
  for (Idx x = 0; x < f.f0.size(); ++x) h.f0[x] = g.f0[f.f0[x]];
  h.f1 = [ff = f.f1, gf = g.f1](const Wit& w) { return gf(ff(w)); };
  return h;
}

inline MorRep constant_mor(SetoidPtr dom, SetoidPtr cod, Idx point) {
  MorRep f;
  f.dom = std::move(dom);
  f.cod = std::move(cod);
  f.f0.assign(f.dom->points(), point);
  f.f1 = [cod = f.cod, point](const Wit&) { return cod->refl(point); };
  return f;
}

// --- product structure -----------------------------------------------------

inline MorRep proj_left(SetoidPtr prod) {
  require(prod->rep == Setoid::Rep::product, "proj_left: not a product");
  MorRep f;
  f.dom = prod;
  f.cod = prod->left;
  for (Idx x = 0; x < prod->points(); ++x)
    f.f0.push_back(x / prod->right->points());
  f.f1 = [](const Wit& w) { return w.pair().first; };
  return f;
}

inline MorRep proj_right(SetoidPtr prod) {
  require(prod->rep == Setoid::Rep::product, "proj_right: not a product");
  MorRep f;
  f.dom = prod;
  f.cod = prod->right;
  for (Idx x = 0; x < prod->points(); ++x)
    f.f0.push_back(x % prod->right->points());
  f.f1 = [](const Wit& w) { return w.pair().second; };
  return f;
}

inline MorRep pair_mor(SetoidPtr prod, const MorRep& f, const MorRep& g) {
  require(prod->rep == Setoid::Rep::product && same_setoid(prod->left, f.cod) &&
              same_setoid(prod->right, g.cod) && same_setoid(f.dom, g.dom),
          "pair_mor: shape mismatch");
  MorRep h;
  h.dom = f.dom;
  h.cod = prod;
  Idx nr = prod->right->points();
  for (Idx x = 0; x < f.f0.size(); ++x) h.f0.push_back(f.f0[x] * nr + g.f0[x]);
  h.f1 = [ff = f.f1, gf = g.f1](const Wit& w) { return Wit(ff(w), gf(w)); };
  return h;
}

inline MorRep product_mor(SetoidPtr dom_prod, SetoidPtr cod_prod,
                          const MorRep& f, const MorRep& g) {
  MorRep l = compose_mor(f, proj_left(dom_prod));
  MorRep r = compose_mor(g, proj_right(dom_prod));
  return pair_mor(cod_prod, l, r);
}

// ---------------------------------------------------------------------------
// Equality of representatives and isomorphism

struct EqWitness {
  std::vector<Wit> h;  // X0 -> Y1 with s h = f0, t h = g0
};

inline void validate_eq_witness(const MorRep& f, const MorRep& g,
                                const EqWitness& w) {
  require(w.h.size() == f.dom->points(), "EqWitness: size");
  for (Idx x = 0; x < w.h.size(); ++x)
    require(f.cod->src(w.h[x]) == f.f0[x] && f.cod->tgt(w.h[x]) == g.f0[x],
            "EqWitness: not over (f0, g0)");
}

inline std::optional<EqWitness> equal_mor(const MorRep& f, const MorRep& g) {
  require(same_setoid(f.dom, g.dom) && same_setoid(f.cod, g.cod),
          "equal_mor: not parallel");
  EqWitness w;
  for (Idx x = 0; x < f.dom->points(); ++x) {
    auto h = f.cod->related(f.f0[x], g.f0[x]);
    if (!h) return std::nullopt;
    w.h.push_back(std::move(*h));
  }
  return w;
}

struct MorIsoWitness {
  MorRep inverse;
  std::vector<Wit> h;  // g f ~ id on the domain
  std::vector<Wit> k;  // f g ~ id on the codomain
};

using MorIso = Verdict<MorIsoWitness>;

// A representative is invertible iff it induces a bijection of quotients;
// when it does, an inverse representative and both round-trip witnesses are
// produced by finite search.
inline MorIso is_iso(const MorRep& f) {
  MorIso out;
  Partition qd = f.dom->quotient(), qc = f.cod->quotient();
  if (qd.classes.size != qc.classes.size) {
    out.detail = "quotient sizes differ";
    return out;
  }
  std::vector<Idx> image(qd.classes.size), preimage(qc.classes.size, kNone);
  for (Idx c = 0; c < qd.classes.size; ++c) {
    image[c] = qc.class_of[f.f0[qd.rep_of[c]]];
    if (preimage[image[c]] != kNone) {
      out.detail = "induced map on quotients not injective";
      return out;
    }
    preimage[image[c]] = c;
  }
  out.holds = true;
  MorRep g;
  g.dom = f.cod;
  g.cod = f.dom;
  for (Idx y = 0; y < f.cod->points(); ++y)
    g.f0.push_back(qd.rep_of[preimage[qc.class_of[y]]]);
  g.f1 = [dom = g.dom, cod = g.cod, g0 = g.f0](const Wit& w) {
    return *cod->related(g0[dom->src(w)], g0[dom->tgt(w)]);
  };
  MorIsoWitness wit;
  for (Idx x = 0; x < f.dom->points(); ++x)
    wit.h.push_back(*f.dom->related(g.f0[f.f0[x]], x));
  for (Idx y = 0; y < f.cod->points(); ++y)
    wit.k.push_back(*f.cod->related(f.f0[g.f0[y]], y));
  wit.inverse = std::move(g);
  out.witness = std::move(wit);
  return out;
}

}  // namespace setoids
