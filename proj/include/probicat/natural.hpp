#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"
#include "presheaf.hpp"

namespace probicat {

/// Components of a natural transformation between set-valued presheaves:
/// components[x][e] is the image of e ∈ F(x) in G(x).
using Components = std::vector<std::vector<int>>;

inline constexpr std::size_t kDefaultSearchCap = 1'000'000;

/// Certificate backing an isomorphism claim.
struct Witness {
  enum class Kind { natural_iso, order_equality };
  Kind kind = Kind::order_equality;
  Components components;

  static Witness equality() { return {}; }
  static Witness iso(Components c) {
    return {Kind::natural_iso, std::move(c)};
  }

  json to_json() const {
    if (kind == Kind::order_equality) return {{"kind", "order_equality"}};
    return {{"kind", "natural_iso"}, {"components", components}};
  }
};

inline Validation check_natural(const SetPresheaf& f, const SetPresheaf& g,
                                const Components& a) {
  const FinCategory& c = f.base();
  if (a.size() != static_cast<std::size_t>(c.num_objects()))
    return Validation::fail("shape", "component family is not total");
  for (int x = 0; x < c.num_objects(); ++x) {
    if (a[x].size() != static_cast<std::size_t>(f.size(x)))
      return Validation::fail("shape", "component has the wrong domain",
                              {{"object", x}});
    for (int v : a[x])
      if (v < 0 || v >= g.size(x))
        return Validation::fail("shape", "component leaves the target",
                                {{"object", x}});
  }
  for (int m = 0; m < c.num_morphisms(); ++m) {
    const int x = c.source(m), y = c.target(m);
    for (int e = 0; e < f.size(x); ++e)
      if (a[y][f.apply(m, e)] != g.apply(m, a[x][e]))
        return Validation::fail(
            "naturality", "naturality square does not commute",
            {{"morphism", m}, {"element", e}, {"source", x}, {"target", y}});
  }
  return Validation::pass();
}

inline bool is_bijective(const Components& a, const SetPresheaf& target) {
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a[x].size() != static_cast<std::size_t>(target.size(static_cast<int>(x))))
      return false;
    std::vector<char> hit(a[x].size(), 0);
    for (int v : a[x]) {
      if (hit[v]) return false;
      hit[v] = 1;
    }
  }
  return true;
}

inline Components identity_components(const SetPresheaf& f) {
  Components a(f.base().num_objects());
  for (int x = 0; x < f.base().num_objects(); ++x)
    for (int e = 0; e < f.size(x); ++e) a[x].push_back(e);
  return a;
}

/// (b ∘ a)_x = b_x ∘ a_x.
inline Components compose_components(const Components& b, const Components& a) {
  Components out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x)
    for (int v : a[x]) out[x].push_back(b[x][v]);
  return out;
}

inline Components invert_components(const Components& a) {
  Components out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) {
    out[x].assign(a[x].size(), -1);
    for (std::size_t e = 0; e < a[x].size(); ++e)
      out[x][a[x][e]] = static_cast<int>(e);
  }
  return out;
}

namespace detail {

/// Joint colour refinement of the elements of two presheaves on the same
/// base. Equal colours are necessary for an isomorphism to match elements.
inline std::pair<Components, Components> refine_colours(const SetPresheaf& f,
                                                         const SetPresheaf& g) {
  const FinCategory& c = f.base();
  const int n = c.num_objects();
  Components cf(n), cg(n);
  for (int x = 0; x < n; ++x) {
    cf[x].assign(f.size(x), x);
    cg[x].assign(g.size(x), x);
  }
  std::size_t classes = static_cast<std::size_t>(n);
  for (int round = 0; round < 8; ++round) {
    using Sig = std::vector<int>;
    std::map<Sig, int> ids;
    auto signature = [&](const SetPresheaf& p, const Components& col, int x,
                         int e) {
      Sig s{col[x][e]};
      for (int m = 0; m < c.num_morphisms(); ++m) {
        if (c.is_identity(m)) continue;
        if (c.source(m) == x) {
          s.push_back(m);
          s.push_back(col[c.target(m)][p.apply(m, e)]);
        }
        if (c.target(m) == x) {
          std::vector<int> pre;
          const int w = c.source(m);
          for (int d = 0; d < p.size(w); ++d)
            if (p.apply(m, d) == e) pre.push_back(col[w][d]);
          std::sort(pre.begin(), pre.end());
          s.push_back(-1 - m);
          s.push_back(static_cast<int>(pre.size()));
          s.insert(s.end(), pre.begin(), pre.end());
        }
      }
      return s;
    };
    Components nf(n), ng(n);
    std::vector<std::pair<Sig, std::pair<int, int>>> pending;
    for (int x = 0; x < n; ++x) {
      for (int e = 0; e < f.size(x); ++e) nf[x].push_back(0);
      for (int e = 0; e < g.size(x); ++e) ng[x].push_back(0);
    }
    std::vector<Sig> sf, sg;
    for (int x = 0; x < n; ++x) {
      for (int e = 0; e < f.size(x); ++e) ids.emplace(signature(f, cf, x, e), 0);
      for (int e = 0; e < g.size(x); ++e) ids.emplace(signature(g, cg, x, e), 0);
    }
    int next = 0;
    for (auto& [sig, id] : ids) id = next++;
    for (int x = 0; x < n; ++x) {
      for (int e = 0; e < f.size(x); ++e) nf[x][e] = ids[signature(f, cf, x, e)];
      for (int e = 0; e < g.size(x); ++e) ng[x][e] = ids[signature(g, cg, x, e)];
    }
    cf = std::move(nf);
    cg = std::move(ng);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {cf, cg};
}

}  // namespace detail

/// Backtracking search over natural transformations F ⇒ G.
///
/// Variables are the elements (x, e) in lexicographic order of object id then
/// element id; values are tried in ascending order, so solutions are produced
/// in lexicographic order of their component tables. Assigning an element
/// forces the images of everything it reaches, which only prunes and so keeps
/// that order. `fix` pins components in advance. Every candidate value tried
/// counts against `cap`; exceeding it throws SearchCapExceeded.
class NaturalSearch {
 public:
  NaturalSearch(const SetPresheaf& f, const SetPresheaf& g, bool bijective,
                std::size_t cap = kDefaultSearchCap, bool refine = true)
      : f_(f), g_(g), bijective_(bijective), refine_(bijective && refine),
        cap_(cap) {
    const FinCategory& c = f.base();
    const int n = c.num_objects();
    offset_.assign(n + 1, 0);
    for (int x = 0; x < n; ++x) offset_[x + 1] = offset_[x] + f.size(x);
    const int total = offset_[n];
    obj_.resize(total);
    elem_.resize(total);
    for (int x = 0; x < n; ++x)
      for (int e = 0; e < f.size(x); ++e) {
        obj_[offset_[x] + e] = x;
        elem_[offset_[x] + e] = e;
      }
    out_.assign(total, {});
    in_.assign(total, {});
    for (int m = 0; m < c.num_morphisms(); ++m) {
      if (c.is_identity(m)) continue;
      const int x = c.source(m), y = c.target(m);
      for (int e = 0; e < f.size(x); ++e) {
        const int u = offset_[x] + e;
        const int v = offset_[y] + f.apply(m, e);
        // value(v) == G(m)(value(u)).
        out_[u].push_back({v, m});
        in_[v].push_back({u, m});
      }
    }
    if (refine_) {
      auto [cf, cg] = detail::refine_colours(f, g);
      colour_f_ = std::move(cf);
      colour_g_ = std::move(cg);
    }
  }

  /// Pin component values before searching.
  void fix(int x, int e, int value) {
    if (fixed_.empty()) fixed_.assign(offset_.back(), -1);
    fixed_[offset_[x] + e] = value;
  }

  /// Calls `visit` for each solution in lexicographic order until it returns
  /// false. Returns the number of solutions visited.
  std::size_t run(const std::function<bool(const Components&)>& visit) {
    const FinCategory& c = f_.base();
    const int n = c.num_objects();
    if (bijective_)
      for (int x = 0; x < n; ++x)
        if (f_.size(x) != g_.size(x)) return 0;
    if (refine_) {
      for (int x = 0; x < n; ++x) {
        std::vector<int> a = colour_f_[x], b = colour_g_[x];
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return 0;
      }
    }
    for (int x = 0; x < n; ++x)
      if (f_.size(x) > 0 && g_.size(x) == 0) return 0;
    const int total = offset_[n];
    value_.assign(total, -1);
    used_.assign(n, std::vector<char>());
    for (int x = 0; x < n; ++x) used_[x].assign(g_.size(x), 0);
    trail_.clear();
    visit_ = &visit;
    found_ = 0;
    stop_ = false;
    descend(0);
    return found_;
  }

  std::optional<Components> first() {
    std::optional<Components> out;
    run([&](const Components& a) {
      out = a;
      return false;
    });
    return out;
  }

  std::vector<Components> all() {
    std::vector<Components> out;
    run([&](const Components& a) {
      out.push_back(a);
      return true;
    });
    return out;
  }

  std::size_t nodes() const { return nodes_; }

 private:
  struct Edge {
    int other;
    int morphism;
  };

  // Assigns var := v and everything it forces; false on a contradiction.
  // Assignments are recorded on the trail either way.
  bool assign(int var, int v) {
    const int x = obj_[var];
    if (!fixed_.empty() && fixed_[var] >= 0 && fixed_[var] != v) return false;
    if (bijective_ && used_[x][v]) return false;
    if (refine_ && colour_g_[x][v] != colour_f_[x][elem_[var]]) return false;
    value_[var] = v;
    if (bijective_) used_[x][v] = 1;
    trail_.push_back(var);
    for (const Edge& k : in_[var]) {
      const int ov = value_[k.other];
      if (ov >= 0 && g_.apply(k.morphism, ov) != v) return false;
    }
    for (const Edge& k : out_[var]) {
      const int want = g_.apply(k.morphism, v);
      const int ov = value_[k.other];
      if (ov >= 0) {
        if (ov != want) return false;
      } else if (!assign(k.other, want)) {
        return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const int var = trail_.back();
      trail_.pop_back();
      if (bijective_) used_[obj_[var]][value_[var]] = 0;
      value_[var] = -1;
    }
  }

  void descend(int var) {
    if (stop_) return;
    const int total = static_cast<int>(value_.size());
    while (var < total && value_[var] >= 0) ++var;
    if (var == total) {
      ++found_;
      Components a(f_.base().num_objects());
      for (int u = 0; u < total; ++u) a[obj_[u]].push_back(value_[u]);
      if (!(*visit_)(a)) stop_ = true;
      return;
    }
    const int x = obj_[var];
    int lo = 0, hi = g_.size(x);
    if (!fixed_.empty() && fixed_[var] >= 0) {
      lo = fixed_[var];
      hi = lo + 1;
    }
    for (int v = lo; v < hi && !stop_; ++v) {
      if (++nodes_ > cap_) throw SearchCapExceeded(cap_);
      const std::size_t mark = trail_.size();
      if (assign(var, v)) descend(var + 1);
      undo(mark);
    }
  }

  const SetPresheaf& f_;
  const SetPresheaf& g_;
  bool bijective_;
  bool refine_;
  std::size_t cap_;
  std::vector<int> offset_, obj_, elem_;
  std::vector<std::vector<Edge>> out_, in_;
  Components colour_f_, colour_g_;
  std::vector<int> fixed_;
  std::vector<int> value_;
  std::vector<int> trail_;
  std::vector<std::vector<char>> used_;
  const std::function<bool(const Components&)>* visit_ = nullptr;
  std::size_t found_ = 0;
  std::size_t nodes_ = 0;
  bool stop_ = false;
};

/// Lexicographically least natural isomorphism F ≅ G, or nullopt when the
/// exhaustive search proves none exists.
inline std::optional<Witness> find_natural_iso(
    const SetPresheaf& f, const SetPresheaf& g,
    std::size_t cap = kDefaultSearchCap) {
  if (!(f.base() == g.base()))
    throw InputError("natural iso search between presheaves on different bases");
  // A short unrefined search settles most pairs; colours only prune, so the
  // refined search finds the same least witness when it is needed.
  constexpr std::size_t kQuickBudget = 4096;
  if (cap > kQuickBudget) {
    try {
      NaturalSearch quick(f, g, true, kQuickBudget, false);
      auto a = quick.first();
      if (a) return Witness::iso(std::move(*a));
      return std::nullopt;
    } catch (const SearchCapExceeded&) {
    }
  }
  NaturalSearch search(f, g, true, cap);
  auto a = search.first();
  if (!a) return std::nullopt;
  return Witness::iso(std::move(*a));
}

/// In the quantale backend isomorphic presheaves are equal.
inline std::optional<Witness> find_natural_iso(const VPresheaf& f,
                                               const VPresheaf& g,
                                               std::size_t = kDefaultSearchCap) {
  if (f.base().num_objects() != g.base().num_objects())
    throw InputError("natural iso search between presheaves on different bases");
  if (f == g) return Witness::equality();
  return std::nullopt;
}

/// All natural transformations F ⇒ G in lexicographic order.
inline std::vector<Components> natural_transformations(
    const SetPresheaf& f, const SetPresheaf& g,
    std::size_t cap = kDefaultSearchCap) {
  return NaturalSearch(f, g, false, cap).all();
}

/// The unique natural β: F ⇒ G agreeing with `partial` wherever it is ≥ 0,
/// if one exists. Used to extend maps along reflection units.
inline std::optional<Components> complete_natural(
    const SetPresheaf& f, const SetPresheaf& g, const Components& partial,
    std::size_t cap = kDefaultSearchCap) {
  NaturalSearch search(f, g, false, cap);
  for (std::size_t x = 0; x < partial.size(); ++x)
    for (std::size_t e = 0; e < partial[x].size(); ++e)
      if (partial[x][e] >= 0)
        search.fix(static_cast<int>(x), static_cast<int>(e), partial[x][e]);
  return search.first();
}

}  // namespace probicat
