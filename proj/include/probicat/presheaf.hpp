#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "category.hpp"
#include "core.hpp"

namespace probicat {

/// Covariant functor from a finite category into finite sets. Elements of
/// F(x) are 0..size(x)-1; `map(f)` is the action of morphism f.
class SetPresheaf {
 public:
  SetPresheaf() = default;
  SetPresheaf(CatPtr base, std::vector<int> sizes,
              std::vector<std::vector<int>> action)
      : base_(std::move(base)),
        sizes_(std::move(sizes)),
        action_(std::move(action)) {
    if (!base_) throw InputError("presheaf without base category");
    if (sizes_.size() != static_cast<std::size_t>(base_->num_objects()))
      throw InputError("presheaf sizes do not cover every object");
    if (action_.size() != static_cast<std::size_t>(base_->num_morphisms()))
      throw InputError("presheaf action does not cover every morphism");
  }

  const CatPtr& base_ptr() const { return base_; }
  const FinCategory& base() const { return *base_; }
  int size(int x) const { return sizes_[x]; }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<int>& map(int f) const { return action_[f]; }
  const std::vector<std::vector<int>>& action() const { return action_; }
  int apply(int f, int e) const { return action_[f][e]; }
  int total_size() const {
    int t = 0;
    for (int s : sizes_) t += s;
    return t;
  }

  friend bool operator==(const SetPresheaf& a, const SetPresheaf& b) {
    return a.sizes_ == b.sizes_ && a.action_ == b.action_;
  }
  friend bool operator<(const SetPresheaf& a, const SetPresheaf& b) {
    return std::tie(a.sizes_, a.action_) < std::tie(b.sizes_, b.action_);
  }

  json to_json() const {
    json j;
    j["sizes"] = sizes_;
    json act = json::object();
    for (int f = 0; f < base_->num_morphisms(); ++f)
      if (!base_->is_identity(f)) act[base_->morphism_label(f)] = action_[f];
    j["action"] = std::move(act);
    return j;
  }

 private:
  CatPtr base_;
  std::vector<int> sizes_;
  std::vector<std::vector<int>> action_;
};

inline Validation check_presheaf(const SetPresheaf& p) {
  const FinCategory& c = p.base();
  for (int f = 0; f < c.num_morphisms(); ++f) {
    const auto& m = p.map(f);
    if (m.size() != static_cast<std::size_t>(p.size(c.source(f))))
      return Validation::fail("shape", "action has the wrong domain size",
                              {{"morphism", f}});
    for (int v : m)
      if (v < 0 || v >= p.size(c.target(f)))
        return Validation::fail("shape", "action leaves the target set",
                                {{"morphism", f}});
  }
  for (int x = 0; x < c.num_objects(); ++x)
    for (int e = 0; e < p.size(x); ++e)
      if (p.apply(c.identity(x), e) != e)
        return Validation::fail("functoriality", "F(id) != id",
                                {{"object", x}, {"element", e}});
  for (int g = 0; g < c.num_morphisms(); ++g)
    for (int f = 0; f < c.num_morphisms(); ++f) {
      const int gf = c.compose(g, f);
      if (gf < 0) continue;
      for (int e = 0; e < p.size(c.source(f)); ++e)
        if (p.apply(gf, e) != p.apply(g, p.apply(f, e)))
          return Validation::fail("functoriality", "F(g∘f) != F(g)∘F(f)",
                                  {{"g", g}, {"f", f}, {"element", e}});
    }
  return Validation::pass();
}

/// Presheaf valued in a quantale: F(x) with hom(x,y)⊗F(x) ≤ F(y).
class VPresheaf {
 public:
  VPresheaf() = default;
  VPresheaf(VCatPtr base, std::vector<int> values)
      : base_(std::move(base)), values_(std::move(values)) {
    if (!base_) throw InputError("presheaf without base category");
    if (values_.size() != static_cast<std::size_t>(base_->num_objects()))
      throw InputError("presheaf values do not cover every object");
    for (int v : values_)
      if (!base_->quantale().contains(v))
        throw InputError("presheaf value outside the carrier");
  }

  const VCatPtr& base_ptr() const { return base_; }
  const VCategory& base() const { return *base_; }
  const Quantale& quantale() const { return base_->quantale(); }
  int operator[](int x) const { return values_[x]; }
  int value(int x) const { return values_[x]; }
  const std::vector<int>& values() const { return values_; }

  friend bool operator==(const VPresheaf& a, const VPresheaf& b) {
    return a.values_ == b.values_;
  }
  friend bool operator<(const VPresheaf& a, const VPresheaf& b) {
    return a.values_ < b.values_;
  }

  json to_json() const { return {{"values", values_}}; }

 private:
  VCatPtr base_;
  std::vector<int> values_;
};

inline Validation check_presheaf(const VPresheaf& p) {
  const VCategory& c = p.base();
  const Quantale& q = c.quantale();
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = 0; y < c.num_objects(); ++y)
      if (!q.leq(q.tensor(c.hom(x, y), p[x]), p[y]))
        return Validation::fail("functoriality",
                                "hom(x,y)⊗F(x) is not below F(y)",
                                {{"x", x}, {"y", y}});
  return Validation::pass();
}

// ---------------------------------------------------------------------------
// Constructions shared by the calculus.

inline SetPresheaf constant_presheaf(const CatPtr& c, int n) {
  std::vector<std::vector<int>> act;
  std::vector<int> ident(n);
  for (int i = 0; i < n; ++i) ident[i] = i;
  for (int f = 0; f < c->num_morphisms(); ++f) act.push_back(ident);
  return SetPresheaf(c, std::vector<int>(c->num_objects(), n), std::move(act));
}

inline VPresheaf constant_presheaf(const VCatPtr& c, int value) {
  return VPresheaf(c, std::vector<int>(c->num_objects(), value));
}

/// The covariant representable C(x, -).
inline SetPresheaf representable(const CatPtr& c, int x) {
  const FinCategory& cat = *c;
  std::vector<int> sizes;
  for (int y = 0; y < cat.num_objects(); ++y)
    sizes.push_back(static_cast<int>(cat.hom(x, y).size()));
  std::vector<std::vector<int>> act;
  for (int f = 0; f < cat.num_morphisms(); ++f) {
    const auto& src = cat.hom(x, cat.source(f));
    const auto& tgt = cat.hom(x, cat.target(f));
    std::vector<int> m;
    for (int h : src) {
      const int fh = cat.compose(f, h);
      m.push_back(static_cast<int>(
          std::lower_bound(tgt.begin(), tgt.end(), fh) - tgt.begin()));
    }
    act.push_back(std::move(m));
  }
  return SetPresheaf(c, std::move(sizes), std::move(act));
}

inline VPresheaf representable(const VCatPtr& c, int x) {
  std::vector<int> v;
  for (int y = 0; y < c->num_objects(); ++y) v.push_back(c->hom(x, y));
  return VPresheaf(c, std::move(v));
}

/// Restriction along a functor: (F∘Φ)(x) = F(Φx).
inline SetPresheaf pullback(const SetPresheaf& f, const FinFunctor& phi) {
  std::vector<int> sizes;
  std::vector<std::vector<int>> act;
  for (int x : phi.on_objects) sizes.push_back(f.size(x));
  for (int m : phi.on_morphisms) act.push_back(f.map(m));
  return SetPresheaf(phi.domain, std::move(sizes), std::move(act));
}

inline VPresheaf pullback(const VPresheaf& f, const VFunctor& phi) {
  std::vector<int> v;
  for (int x : phi.on_objects) v.push_back(f[x]);
  return VPresheaf(phi.domain, std::move(v));
}

/// Pull a presheaf on `a` back along the projection a × b → a (which = 0) or
/// b × a → a (which = 1).
inline SetPresheaf pullback_projection(const SetPresheaf& f, const CatPtr& prod,
                                       const CatPtr& other, int which) {
  const int n_other = other->num_objects(), m_other = other->num_morphisms();
  std::vector<int> sizes(prod->num_objects());
  std::vector<std::vector<int>> act(prod->num_morphisms());
  for (int x = 0; x < prod->num_objects(); ++x)
    sizes[x] = f.size(which == 0 ? x / n_other : x % f.base().num_objects());
  for (int m = 0; m < prod->num_morphisms(); ++m)
    act[m] = f.map(which == 0 ? m / m_other : m % f.base().num_morphisms());
  return SetPresheaf(prod, std::move(sizes), std::move(act));
}

inline VPresheaf pullback_projection(const VPresheaf& f, const VCatPtr& prod,
                                     const VCatPtr& other, int which) {
  const int n_other = other->num_objects();
  std::vector<int> v(prod->num_objects());
  for (int x = 0; x < prod->num_objects(); ++x)
    v[x] = f[which == 0 ? x / n_other : x % f.base().num_objects()];
  return VPresheaf(prod, std::move(v));
}

/// Reindex a presheaf on a × b to one on b × a (the caller supplies b × a).
inline SetPresheaf swap_factors(const SetPresheaf& f, const FinCategory& a,
                                const FinCategory& b, const CatPtr& swapped) {
  const int n1 = a.num_objects(), n2 = b.num_objects();
  const int m1 = a.num_morphisms(), m2 = b.num_morphisms();
  std::vector<int> sizes(n1 * n2);
  std::vector<std::vector<int>> act(static_cast<std::size_t>(m1) * m2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) sizes[j * n1 + i] = f.size(i * n2 + j);
  for (int f1 = 0; f1 < m1; ++f1)
    for (int f2 = 0; f2 < m2; ++f2) act[f2 * m1 + f1] = f.map(f1 * m2 + f2);
  return SetPresheaf(swapped, std::move(sizes), std::move(act));
}

inline VPresheaf swap_factors(const VPresheaf& f, const VCategory& a,
                              const VCategory& b, const VCatPtr& swapped) {
  const int n1 = a.num_objects(), n2 = b.num_objects();
  std::vector<int> v(n1 * n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) v[j * n1 + i] = f[i * n2 + j];
  return VPresheaf(swapped, std::move(v));
}

/// External product F ⊠ G on a × b: (F⊠G)(x, y) = F(x) × G(y), element
/// (u, v) encoded as u·|G(y)| + v.
inline SetPresheaf external_product(const SetPresheaf& f, const SetPresheaf& g,
                                    const CatPtr& prod) {
  const FinCategory& a = f.base();
  const FinCategory& b = g.base();
  const int n2 = b.num_objects(), m2 = b.num_morphisms();
  std::vector<int> sizes(prod->num_objects());
  for (int i = 0; i < a.num_objects(); ++i)
    for (int j = 0; j < n2; ++j) sizes[i * n2 + j] = f.size(i) * g.size(j);
  std::vector<std::vector<int>> act(prod->num_morphisms());
  for (int f1 = 0; f1 < a.num_morphisms(); ++f1)
    for (int f2 = 0; f2 < m2; ++f2) {
      const int sj = b.source(f2), tj = b.target(f2);
      std::vector<int> m;
      for (int u = 0; u < f.size(a.source(f1)); ++u)
        for (int v = 0; v < g.size(sj); ++v)
          m.push_back(f.apply(f1, u) * g.size(tj) + g.apply(f2, v));
      act[f1 * m2 + f2] = std::move(m);
    }
  return SetPresheaf(prod, std::move(sizes), std::move(act));
}

inline VPresheaf external_product(const VPresheaf& f, const VPresheaf& g,
                                  const VCatPtr& prod) {
  const Quantale& q = f.quantale();
  const int n2 = g.base().num_objects();
  std::vector<int> v(prod->num_objects());
  for (int i = 0; i < f.base().num_objects(); ++i)
    for (int j = 0; j < n2; ++j) v[i * n2 + j] = q.tensor(f[i], g[j]);
  return VPresheaf(prod, std::move(v));
}

/// Slice of a presheaf on p × b at a fixed first coordinate, as a presheaf on
/// b (the caller supplies b's pointer).
inline SetPresheaf slice_first(const SetPresheaf& f, int p, const CatPtr& b) {
  const FinCategory& prod = f.base();
  const int n2 = b->num_objects(), m2 = b->num_morphisms();
  std::vector<int> sizes(n2);
  for (int j = 0; j < n2; ++j) sizes[j] = f.size(p * n2 + j);
  // (id_p, id_0) has id id_p·m₂ + id_0 and id_0 < m₂.
  const int id_p = prod.identity(p * n2) / m2;
  std::vector<std::vector<int>> act(m2);
  for (int g = 0; g < m2; ++g) act[g] = f.map(id_p * m2 + g);
  return SetPresheaf(b, std::move(sizes), std::move(act));
}

inline VPresheaf slice_first(const VPresheaf& f, int p, const VCatPtr& b) {
  const int n2 = b->num_objects();
  std::vector<int> v(n2);
  for (int j = 0; j < n2; ++j) v[j] = f[p * n2 + j];
  return VPresheaf(b, std::move(v));
}

// ---------------------------------------------------------------------------
// Scope enumeration.

/// Every presheaf on c with at most `max_size` elements per object, in
/// canonical order (sizes lexicographic, then actions lexicographic by
/// morphism id).
inline std::vector<SetPresheaf> enumerate_presheaves(const CatPtr& c,
                                                     int max_size) {
  const FinCategory& cat = *c;
  const int n = cat.num_objects(), m = cat.num_morphisms();
  std::vector<SetPresheaf> out;
  std::vector<int> sizes(n, 0);
  std::vector<int> order;  // non-identity morphisms
  for (int f = 0; f < m; ++f)
    if (!cat.is_identity(f)) order.push_back(f);

  std::function<void(int)> over_sizes;
  std::vector<std::vector<int>> act(m);

  // Partial functoriality test over morphisms assigned so far.
  auto consistent = [&](std::size_t upto) {
    std::vector<char> known(m, 0);
    for (int x = 0; x < n; ++x) known[cat.identity(x)] = 1;
    for (std::size_t i = 0; i <= upto; ++i) known[order[i]] = 1;
    for (int g = 0; g < m; ++g) {
      if (!known[g]) continue;
      for (int f = 0; f < m; ++f) {
        if (!known[f]) continue;
        const int gf = cat.compose(g, f);
        if (gf < 0 || !known[gf]) continue;
        for (int e = 0; e < sizes[cat.source(f)]; ++e)
          if (act[gf][e] != act[g][act[f][e]]) return false;
      }
    }
    return true;
  };

  std::function<void(std::size_t)> over_maps = [&](std::size_t i) {
    if (i == order.size()) {
      out.emplace_back(c, sizes, act);
      return;
    }
    const int f = order[i];
    const int s = sizes[cat.source(f)], t = sizes[cat.target(f)];
    if (s > 0 && t == 0) return;
    std::vector<int> mp(s, 0);
    while (true) {
      act[f] = mp;
      if (consistent(i)) over_maps(i + 1);
      int k = s - 1;
      while (k >= 0 && mp[k] == t - 1) mp[k--] = 0;
      if (k < 0) break;
      ++mp[k];
    }
  };

  over_sizes = [&](int x) {
    if (x == n) {
      for (int y = 0; y < n; ++y) {
        std::vector<int> ident(sizes[y]);
        for (int e = 0; e < sizes[y]; ++e) ident[e] = e;
        act[cat.identity(y)] = ident;
      }
      over_maps(0);
      return;
    }
    for (int s = 0; s <= max_size; ++s) {
      sizes[x] = s;
      over_sizes(x + 1);
    }
  };
  over_sizes(0);
  return out;
}

/// Every quantale-valued presheaf on c, in lexicographic order of values.
inline std::vector<VPresheaf> enumerate_presheaves(const VCatPtr& c) {
  const int n = c->num_objects();
  const int k = c->quantale().size();
  std::vector<VPresheaf> out;
  std::vector<int> v(n, 0);
  while (true) {
    VPresheaf p(c, v);
    if (check_presheaf(p)) out.push_back(std::move(p));
    int i = n - 1;
    while (i >= 0 && v[i] == k - 1) v[i--] = 0;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

}  // namespace probicat
