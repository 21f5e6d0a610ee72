#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "calculus.hpp"
#include "natural.hpp"

namespace probicat {

/// Coherence data of a monoidal finite category: tensor on objects and
/// morphisms, unit object, and the associator and unitor components
/// α: (a⊗b)⊗c → a⊗(b⊗c), λ: I⊗a → a, ρ: a⊗I → a.
struct MonoidalData {
  std::vector<int> tensor_objects;    // n × n
  std::vector<int> tensor_morphisms;  // m × m, -1 never
  int unit = 0;
  std::vector<int> associator;  // n × n × n
  std::vector<int> left_unitor;
  std::vector<int> right_unitor;
};

/// A probicategory: hom categories A_xy, structure presheaves
/// P_xyz on (A_yz^op × A_xy^op) × A_xz and identities J_x on A_xx.
template <class V>
class Probicategory {
 public:
  using CatP = typename V::CatP;
  using Presheaf = PresheafOf<V>;

  Probicategory(std::vector<std::string> objects, std::vector<CatP> homs,
                std::vector<Presheaf> structure, std::vector<Presheaf> ids,
                std::optional<MonoidalData> coherence = std::nullopt)
      : objects_(std::move(objects)),
        homs_(std::move(homs)),
        structure_(std::move(structure)),
        ids_(std::move(ids)),
        coherence_(std::move(coherence)) {
    const std::size_t n = objects_.size();
    if (n == 0) throw InputError("probicategory without objects");
    if (homs_.size() != n * n)
      throw InputError("hom family does not cover every pair of objects");
    if (structure_.size() != n * n * n)
      throw InputError("structure functors do not cover every triple");
    if (ids_.size() != n)
      throw InputError("identity weights do not cover every object");
    for (int x = 0; x < size(); ++x)
      for (int y = 0; y < size(); ++y)
        for (int z = 0; z < size(); ++z) {
          const auto expected = structure_base(x, y, z);
          if (P(x, y, z).base().num_objects() != expected->num_objects())
            throw InputError("structure functor P_" + index_label(x, y, z) +
                             " has the wrong domain");
        }
    for (int x = 0; x < size(); ++x)
      if (J(x).base().num_objects() != hom(x, x)->num_objects())
        throw InputError("identity weight J_" + objects_[x] +
                         " has the wrong domain");
  }

  int size() const { return static_cast<int>(objects_.size()); }
  const std::vector<std::string>& objects() const { return objects_; }
  const CatP& hom(int x, int y) const { return homs_[x * size() + y]; }
  const Presheaf& P(int x, int y, int z) const {
    return structure_[(x * size() + y) * size() + z];
  }
  const Presheaf& J(int x) const { return ids_[x]; }
  const std::optional<MonoidalData>& coherence() const { return coherence_; }

  /// (A_yz^op × A_xy^op) × A_xz.
  CatP structure_base(int x, int y, int z) const {
    return prod(prod(op(hom(y, z)), op(hom(x, y))), hom(x, z));
  }
  /// A_yz × A_xy, the index of the convolution coend.
  CatP pair_base(int x, int y, int z) const {
    return prod(hom(y, z), hom(x, y));
  }

  std::string index_label(int x, int y, int z) const {
    return objects_[x] + objects_[y] + objects_[z];
  }

  /// Copy with one structure presheaf replaced (used by mutation tests).
  Probicategory with_structure(int x, int y, int z, Presheaf p) const {
    Probicategory out = *this;
    out.structure_[(x * size() + y) * size() + z] = std::move(p);
    return out;
  }

 private:
  std::vector<std::string> objects_;
  std::vector<CatP> homs_;
  std::vector<Presheaf> structure_;
  std::vector<Presheaf> ids_;
  std::optional<MonoidalData> coherence_;
};

// ---------------------------------------------------------------------------
// Construction.

/// One object, discrete hom category on the monoid elements,
/// P(a, b, c) = unit iff a·b = c, J = indicator of the monoid unit.
inline Probicategory<SetV> delooped_monoid(int n, const std::vector<int>& table,
                                           int unit,
                                           std::vector<std::string> labels = {}) {
  if (table.size() != static_cast<std::size_t>(n * n))
    throw InputError("monoid table is not n×n");
  FinCategory d = discrete_category(n);
  if (!labels.empty()) {
    std::vector<Morphism> mor;
    std::vector<std::string> ml;
    std::vector<int> ids, comp(n * n, -1);
    for (int i = 0; i < n; ++i) {
      mor.push_back({i, i});
      ml.push_back("id_" + labels[i]);
      ids.push_back(i);
      comp[i * n + i] = i;
    }
    d = FinCategory(labels, mor, ml, ids, comp);
  }
  CatPtr a = share(std::move(d));
  CatPtr base = prod(prod(op(a), op(a)), a);
  std::vector<int> sizes(n * n * n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) sizes[(x * n + y) * n + table[x * n + y]] = 1;
  std::vector<std::vector<int>> act(base->num_morphisms());
  for (int m = 0; m < base->num_morphisms(); ++m)
    act[m] = std::vector<int>(sizes[base->source(m)], 0);
  std::vector<int> jsizes(n, 0);
  jsizes[unit] = 1;
  std::vector<std::vector<int>> jact(n);
  for (int m = 0; m < n; ++m) jact[m] = std::vector<int>(jsizes[m], 0);
  return Probicategory<SetV>({"x"}, {a},
                             {SetPresheaf(base, std::move(sizes), std::move(act))},
                             {SetPresheaf(a, std::move(jsizes), std::move(jact))});
}

inline Probicategory<QuantaleV> delooped_monoid(
    const QuantalePtr& q, int n, const std::vector<int>& table, int unit,
    std::vector<std::string> labels = {}) {
  if (table.size() != static_cast<std::size_t>(n * n))
    throw InputError("monoid table is not n×n");
  VCategory d = enriched_discrete(q, n);
  if (!labels.empty()) d = VCategory(q, labels, d.hom_matrix());
  VCatPtr a = share(std::move(d));
  VCatPtr base = prod(prod(op(a), op(a)), a);
  std::vector<int> v(n * n * n, q->bottom());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) v[(x * n + y) * n + table[x * n + y]] = q->unit();
  std::vector<int> j(n, q->bottom());
  j[unit] = q->unit();
  return Probicategory<QuantaleV>({"x"}, {a}, {VPresheaf(base, std::move(v))},
                                  {VPresheaf(a, std::move(j))});
}

namespace detail {

inline int hom_index(const FinCategory& c, int x, int y, int f) {
  const auto& h = c.hom(x, y);
  return static_cast<int>(std::lower_bound(h.begin(), h.end(), f) - h.begin());
}

}  // namespace detail

/// The manifold probicategory of a family of categories: A_xy = A_x^op × A_y
/// and P((A,A′),(B,B′),(C,C′)) = A_x(C,B) × A_y(B′,A) × A_z(A′,C′),
/// J_x = A_x(−, −).
inline Probicategory<SetV> manifold(const std::vector<CatPtr>& family,
                                    std::vector<std::string> labels = {}) {
  const int n = static_cast<int>(family.size());
  if (n == 0) throw InputError("manifold over an empty family");
  if (labels.empty())
    for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  std::vector<CatPtr> homs(n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) homs[x * n + y] = prod(op(family[x]), family[y]);
  std::vector<SetPresheaf> structure;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const FinCategory& ax = *family[x];
        const FinCategory& ay = *family[y];
        const FinCategory& az = *family[z];
        const CatPtr& ayz = homs[y * n + z];
        const CatPtr& axy = homs[x * n + y];
        const CatPtr& axz = homs[x * n + z];
        CatPtr base = prod(prod(op(ayz), op(axy)), axz);
        const int nyz = ayz->num_objects(), nxy = axy->num_objects(),
                  nxz = axz->num_objects();
        const int myz = ayz->num_morphisms(), mxy = axy->num_morphisms(),
                  mxz = axz->num_morphisms();
        const int ny = ay.num_objects(), nz = az.num_objects();
        const int my = ay.num_morphisms(), mz = az.num_morphisms();
        auto split_yz = [&](int o) { return std::make_pair(o / nz, o % nz); };
        auto split_xy = [&](int o) { return std::make_pair(o / ny, o % ny); };
        auto split_xz = [&](int o) { return std::make_pair(o / nz, o % nz); };
        std::vector<int> sizes(base->num_objects());
        for (int i = 0; i < nyz; ++i)
          for (int j = 0; j < nxy; ++j)
            for (int k = 0; k < nxz; ++k) {
              auto [a, a2] = split_yz(i);
              auto [b, b2] = split_xy(j);
              auto [c, c2] = split_xz(k);
              sizes[(i * nxy + j) * nxz + k] =
                  static_cast<int>(ax.hom(c, b).size() * ay.hom(b2, a).size() *
                                   az.hom(a2, c2).size());
            }
        std::vector<std::vector<int>> act(base->num_morphisms());
        for (int u = 0; u < myz; ++u)
          for (int v = 0; v < mxy; ++v)
            for (int w = 0; w < mxz; ++w) {
              // u = (u1 in A_y, u2 in A_z) read in A_yz^op, and so on.
              const int u1 = u / mz, u2 = u % mz;
              const int v1 = v / my, v2 = v % my;
              const int w1 = w / mz, w2 = w % mz;
              const int m = (u * mxy + v) * mxz + w;
              const int src = base->source(m);
              const int tgt = base->target(m);
              const int si = src / (nxy * nxz), sj = (src / nxz) % nxy,
                        sk = src % nxz;
              const int ti = tgt / (nxy * nxz), tj = (tgt / nxz) % nxy,
                        tk = tgt % nxz;
              auto [sa, sa2] = split_yz(si);
              auto [sb, sb2] = split_xy(sj);
              auto [sc, sc2] = split_xz(sk);
              auto [ta, ta2] = split_yz(ti);
              auto [tb, tb2] = split_xy(tj);
              auto [tc, tc2] = split_xz(tk);
              const auto& h1 = ax.hom(sc, sb);
              const auto& h2 = ay.hom(sb2, sa);
              const auto& h3 = az.hom(sa2, sc2);
              const int t2 = static_cast<int>(ay.hom(tb2, ta).size());
              const int t3 = static_cast<int>(az.hom(ta2, tc2).size());
              std::vector<int> mp;
              for (int k1 : h1)
                for (int k2 : h2)
                  for (int k3 : h3) {
                    // k1: C → B in A_x, moved by v1 after and w1 before.
                    const int n1 = ax.compose(v1, ax.compose(k1, w1));
                    const int n2 = ay.compose(u1, ay.compose(k2, v2));
                    const int n3 = az.compose(w2, az.compose(k3, u2));
                    const int e = (detail::hom_index(ax, tc, tb, n1) * t2 +
                                   detail::hom_index(ay, tb2, ta, n2)) *
                                      t3 +
                                  detail::hom_index(az, ta2, tc2, n3);
                    mp.push_back(e);
                  }
              act[m] = std::move(mp);
            }
        structure.emplace_back(base, std::move(sizes), std::move(act));
      }
  std::vector<SetPresheaf> ids;
  for (int x = 0; x < n; ++x) {
    SetPresheaf y = yoneda_embed(family[x]);
    ids.emplace_back(homs[x * n + x], y.sizes(), y.action());
  }
  return Probicategory<SetV>(std::move(labels), std::move(homs),
                             std::move(structure), std::move(ids));
}

inline Probicategory<QuantaleV> manifold(const std::vector<VCatPtr>& family,
                                         std::vector<std::string> labels = {}) {
  const int n = static_cast<int>(family.size());
  if (n == 0) throw InputError("manifold over an empty family");
  if (labels.empty())
    for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  const Quantale& q = family[0]->quantale();
  std::vector<VCatPtr> homs(n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) homs[x * n + y] = prod(op(family[x]), family[y]);
  std::vector<VPresheaf> structure;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const VCategory& ax = *family[x];
        const VCategory& ay = *family[y];
        const VCategory& az = *family[z];
        const int ny = ay.num_objects(), nz = az.num_objects();
        const int nyz = homs[y * n + z]->num_objects(),
                  nxy = homs[x * n + y]->num_objects(),
                  nxz = homs[x * n + z]->num_objects();
        VCatPtr base = prod(prod(op(homs[y * n + z]), op(homs[x * n + y])),
                            homs[x * n + z]);
        std::vector<int> v(base->num_objects());
        for (int i = 0; i < nyz; ++i)
          for (int j = 0; j < nxy; ++j)
            for (int k = 0; k < nxz; ++k) {
              const int a = i / nz, a2 = i % nz;
              const int b = j / ny, b2 = j % ny;
              const int c = k / nz, c2 = k % nz;
              v[(i * nxy + j) * nxz + k] =
                  q.tensor(q.tensor(ax.hom(c, b), ay.hom(b2, a)), az.hom(a2, c2));
            }
        structure.emplace_back(base, std::move(v));
      }
  std::vector<VPresheaf> ids;
  for (int x = 0; x < n; ++x)
    ids.emplace_back(homs[x * n + x], family[x]->hom_matrix());
  return Probicategory<QuantaleV>(std::move(labels), std::move(homs),
                                  std::move(structure), std::move(ids));
}

/// Validation of monoidal coherence data on a finite category: ⊗ is a
/// bifunctor, α, λ, ρ are natural isomorphisms, pentagon and triangle hold.
inline Validation check_monoidal(const FinCategory& c, const MonoidalData& m) {
  const int n = c.num_objects(), k = c.num_morphisms();
  if (m.tensor_objects.size() != static_cast<std::size_t>(n * n) ||
      m.tensor_morphisms.size() != static_cast<std::size_t>(k * k) ||
      m.associator.size() != static_cast<std::size_t>(n * n * n) ||
      m.left_unitor.size() != static_cast<std::size_t>(n) ||
      m.right_unitor.size() != static_cast<std::size_t>(n))
    return Validation::fail("coherence", "monoidal data tables have wrong sizes");
  auto to = [&](int a, int b) { return m.tensor_objects[a * n + b]; };
  auto tm = [&](int f, int g) { return m.tensor_morphisms[f * k + g]; };
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g) {
      const int h = tm(f, g);
      if (h < 0 || h >= k || c.source(h) != to(c.source(f), c.source(g)) ||
          c.target(h) != to(c.target(f), c.target(g)))
        return Validation::fail("tensor", "f⊗g has wrong endpoints",
                                {{"f", f}, {"g", g}});
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (tm(c.identity(a), c.identity(b)) != c.identity(to(a, b)))
        return Validation::fail("tensor", "id⊗id is not an identity",
                                {{"a", a}, {"b", b}});
  for (int f = 0; f < k; ++f)
    for (int f2 = 0; f2 < k; ++f2) {
      if (c.target(f) != c.source(f2)) continue;
      for (int g = 0; g < k; ++g)
        for (int g2 = 0; g2 < k; ++g2) {
          if (c.target(g) != c.source(g2)) continue;
          if (tm(c.compose(f2, f), c.compose(g2, g)) !=
              c.compose(tm(f2, g2), tm(f, g)))
            return Validation::fail("tensor", "⊗ does not preserve composition",
                                    {{"f", f}, {"g", g}});
        }
    }
  auto invertible = [&](int f) {
    for (int g : c.hom(c.target(f), c.source(f)))
      if (c.compose(g, f) == c.identity(c.source(f)) &&
          c.compose(f, g) == c.identity(c.target(f)))
        return true;
    return false;
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        const int al = m.associator[(a * n + b) * n + d];
        if (al < 0 || al >= k || c.source(al) != to(to(a, b), d) ||
            c.target(al) != to(a, to(b, d)) || !invertible(al))
          return Validation::fail("coherence", "associator component is not an "
                                  "isomorphism (a⊗b)⊗c → a⊗(b⊗c)",
                                  {{"a", a}, {"b", b}, {"c", d}});
      }
  for (int a = 0; a < n; ++a) {
    const int l = m.left_unitor[a], r = m.right_unitor[a];
    if (l < 0 || l >= k || c.source(l) != to(m.unit, a) || c.target(l) != a ||
        !invertible(l))
      return Validation::fail("coherence", "left unitor is not an isomorphism",
                              {{"a", a}});
    if (r < 0 || r >= k || c.source(r) != to(a, m.unit) || c.target(r) != a ||
        !invertible(r))
      return Validation::fail("coherence", "right unitor is not an isomorphism",
                              {{"a", a}});
  }
  auto alpha = [&](int a, int b, int d) {
    return m.associator[(a * n + b) * n + d];
  };
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g)
      for (int h = 0; h < k; ++h) {
        const int lhs = c.compose(alpha(c.target(f), c.target(g), c.target(h)),
                                  tm(tm(f, g), h));
        const int rhs = c.compose(tm(f, tm(g, h)),
                                  alpha(c.source(f), c.source(g), c.source(h)));
        if (lhs != rhs)
          return Validation::fail("coherence", "associator is not natural",
                                  {{"f", f}, {"g", g}, {"h", h}});
      }
  const int id_i = c.identity(m.unit);
  for (int f = 0; f < k; ++f) {
    if (c.compose(f, m.left_unitor[c.source(f)]) !=
        c.compose(m.left_unitor[c.target(f)], tm(id_i, f)))
      return Validation::fail("coherence", "left unitor is not natural",
                              {{"f", f}});
    if (c.compose(f, m.right_unitor[c.source(f)]) !=
        c.compose(m.right_unitor[c.target(f)], tm(f, id_i)))
      return Validation::fail("coherence", "right unitor is not natural",
                              {{"f", f}});
  }
  auto id = [&](int a) { return c.identity(a); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < n; ++e) {
          const int lhs = c.compose(alpha(a, b, to(d, e)),
                                    alpha(to(a, b), d, e));
          const int rhs = c.compose(
              tm(id(a), alpha(b, d, e)),
              c.compose(alpha(a, to(b, d), e), tm(alpha(a, b, d), id(e))));
          if (lhs != rhs)
            return Validation::fail("coherence", "pentagon fails",
                                    {{"a", a}, {"b", b}, {"c", d}, {"d", e}});
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (c.compose(tm(id(a), m.left_unitor[b]), alpha(a, m.unit, b)) !=
          tm(m.right_unitor[a], id(b)))
        return Validation::fail("coherence", "triangle fails",
                                {{"a", a}, {"b", b}});
  return Validation::pass();
}

/// Monoidal structure on a thin category given by a monotone object table;
/// every coherence component is the unique morphism of its type.
inline MonoidalData thin_monoidal(const FinCategory& c,
                                  std::vector<int> tensor_objects, int unit) {
  const int n = c.num_objects(), k = c.num_morphisms();
  MonoidalData m;
  m.tensor_objects = std::move(tensor_objects);
  m.unit = unit;
  auto unique = [&](int a, int b) {
    const auto& h = c.hom(a, b);
    if (h.size() != 1) throw InputError("category is not thin on the needed hom");
    return h[0];
  };
  auto to = [&](int a, int b) { return m.tensor_objects[a * n + b]; };
  m.tensor_morphisms.resize(k * k);
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g)
      m.tensor_morphisms[f * k + g] =
          unique(to(c.source(f), c.source(g)), to(c.target(f), c.target(g)));
  m.associator.resize(n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d)
        m.associator[(a * n + b) * n + d] = unique(to(to(a, b), d), to(a, to(b, d)));
  for (int a = 0; a < n; ++a) {
    m.left_unitor.push_back(unique(to(unit, a), a));
    m.right_unitor.push_back(unique(to(a, unit), a));
  }
  return m;
}

/// The one-object probicategory of a monoidal category: P(a, b, c) =
/// A(a⊗b, c), J = A(I, −). Coherence data is mandatory and verified.
inline Probicategory<SetV> from_monoidal(const CatPtr& a, const MonoidalData& m) {
  const Validation v = check_monoidal(*a, m);
  if (!v.ok) throw InputError("monoidal input rejected: " + v.detail);
  const FinCategory& c = *a;
  const int n = c.num_objects(), k = c.num_morphisms();
  CatPtr base = prod(prod(op(a), op(a)), a);
  std::vector<int> sizes(n * n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        sizes[(x * n + y) * n + z] =
            static_cast<int>(c.hom(m.tensor_objects[x * n + y], z).size());
  std::vector<std::vector<int>> act(base->num_morphisms());
  for (int f = 0; f < k; ++f)
    for (int g = 0; g < k; ++g)
      for (int h = 0; h < k; ++h) {
        // In A^op, f runs from t f to s f, so ((f, g), h) starts at
        // (t f, t g, s h) and acts by κ ↦ h ∘ κ ∘ (f ⊗ g).
        const int fg = m.tensor_morphisms[f * k + g];
        const int src_a = m.tensor_objects[c.target(f) * n + c.target(g)];
        const int tgt_a = m.tensor_objects[c.source(f) * n + c.source(g)];
        std::vector<int> mp;
        for (int kappa : c.hom(src_a, c.source(h))) {
          const int moved = c.compose(h, c.compose(kappa, fg));
          mp.push_back(detail::hom_index(c, tgt_a, c.target(h), moved));
        }
        act[(f * k + g) * k + h] = std::move(mp);
      }
  SetPresheaf j = representable(a, m.unit);
  return Probicategory<SetV>({"x"}, {a},
                             {SetPresheaf(base, std::move(sizes), std::move(act))},
                             {j}, m);
}

inline Probicategory<QuantaleV> from_monoidal(const VCatPtr& a,
                                              const std::vector<int>& tensor,
                                              int unit) {
  const VCategory& c = *a;
  const Quantale& q = c.quantale();
  const int n = c.num_objects();
  if (tensor.size() != static_cast<std::size_t>(n * n))
    throw InputError("tensor table is not n×n");
  for (int x = 0; x < n; ++x)
    for (int x2 = 0; x2 < n; ++x2)
      for (int y = 0; y < n; ++y)
        for (int y2 = 0; y2 < n; ++y2)
          if (!q.leq(q.tensor(c.hom(x, x2), c.hom(y, y2)),
                     c.hom(tensor[x * n + y], tensor[x2 * n + y2])))
            throw InputError("tensor is not a V-functor");
  VCatPtr base = prod(prod(op(a), op(a)), a);
  std::vector<int> v(n * n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        v[(x * n + y) * n + z] = c.hom(tensor[x * n + y], z);
  return Probicategory<QuantaleV>({"x"}, {a}, {VPresheaf(base, std::move(v))},
                                  {representable(a, unit)});
}

// ---------------------------------------------------------------------------
// Convolution.

inline SetColimit conv_compose_colimit(const Probicategory<SetV>& p, int x,
                                       int y, int z, const SetPresheaf& f,
                                       const SetPresheaf& g) {
  const CatPtr k = p.pair_base(x, y, z);
  SetPresheaf w = external_product(f, g, k);
  return weighted_colimit(w, p.P(x, y, z), *terminal(), *k, p.hom(x, z));
}

/// F ∘ G for F on A_yz and G on A_xy.
inline SetPresheaf conv_compose(const Probicategory<SetV>& p, int x, int y,
                                int z, const SetPresheaf& f,
                                const SetPresheaf& g) {
  return conv_compose_colimit(p, x, y, z, f, g).value;
}

inline VPresheaf conv_compose(const Probicategory<QuantaleV>& p, int x, int y,
                              int z, const VPresheaf& f, const VPresheaf& g) {
  const VCatPtr k = p.pair_base(x, y, z);
  VPresheaf w = external_product(f, g, k);
  return weighted_colimit_value(w, p.P(x, y, z),
                                *terminal(p.hom(x, z)->quantale_ptr()), *k,
                                p.hom(x, z));
}

/// The map F ∘ G → F′ ∘ G′ induced by α: F ⇒ F′ and β: G ⇒ G′.
inline Components conv_compose_map(const Probicategory<SetV>& p, int x, int y,
                                   int z, const SetPresheaf& f,
                                   const SetPresheaf& g, const SetPresheaf& f2,
                                   const SetPresheaf& g2, const Components& a,
                                   const Components& b) {
  SetColimit from = conv_compose_colimit(p, x, y, z, f, g);
  SetColimit to = conv_compose_colimit(p, x, y, z, f2, g2);
  return colimit_weight_map(from, to, external_product(a, b, g, g2));
}

/// I = J * I: the J-weighted colimit of the ground unit.
inline SetPresheaf conv_identity(const Probicategory<SetV>& p, int x) {
  const CatPtr& a = p.hom(x, x);
  const CatPtr& one = terminal();
  SetPresheaf unit = constant_presheaf(prod(op(one), one), 1);
  return weighted_colimit(p.J(x), unit, *a, *one, a).value;
}

inline VPresheaf conv_identity(const Probicategory<QuantaleV>& p, int x) {
  const VCatPtr& a = p.hom(x, x);
  const VCatPtr one = terminal(a->quantale_ptr());
  VPresheaf unit = constant_presheaf(prod(op(one), one), a->quantale().unit());
  return weighted_colimit_value(p.J(x), unit, *a, *one, a);
}

/// A residual together with the intermediate colimit, for induced maps.
struct SetResidual {
  SetColimit inner;
  SetLimit outer;
  const SetPresheaf& value() const { return outer.value; }
};

namespace detail {

inline Components swap_components(const Components& c, int n1, int n2) {
  Components out(c.size());
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) out[j * n1 + i] = c[i * n2 + j];
  return out;
}

}  // namespace detail

/// H / G for H on A_xz and G on A_xy, a presheaf on A_yz:
/// (H/G)(a) = ∫_{c} [∫^{a′} P(a, a′, c) × G(a′), H(c)].
inline SetResidual right_residual_data(const Probicategory<SetV>& p, int x,
                                       int y, int z, const SetPresheaf& h,
                                       const SetPresheaf& g) {
  const CatPtr &ayz = p.hom(y, z), &axy = p.hom(x, y), &axz = p.hom(x, z);
  SetPresheaf swapped = swap_first_two(p.P(x, y, z), *op(ayz), *op(axy), *axz,
                                       prod(prod(op(axy), op(ayz)), axz));
  SetResidual out;
  out.inner = weighted_colimit(g, swapped, *terminal(), *axy,
                               prod(op(ayz), axz));
  SetPresheaf w = swap_factors(out.inner.value, *op(ayz), *axz,
                               prod(axz, op(ayz)));
  SetPresheaf d = pullback_projection(h, prod(axz, ayz), ayz, 0);
  out.outer = weighted_limit(w, d, axz, ayz);
  return out;
}

/// F \ H for F on A_yz and H on A_xz, a presheaf on A_xy:
/// (F\H)(b) = ∫_{c} [∫^{a} F(a) × P(a, b, c), H(c)].
inline SetResidual left_residual_data(const Probicategory<SetV>& p, int x,
                                      int y, int z, const SetPresheaf& f,
                                      const SetPresheaf& h) {
  const CatPtr &ayz = p.hom(y, z), &axy = p.hom(x, y), &axz = p.hom(x, z);
  SetResidual out;
  out.inner = weighted_colimit(f, p.P(x, y, z), *terminal(), *ayz,
                               prod(op(axy), axz));
  SetPresheaf w = swap_factors(out.inner.value, *op(axy), *axz,
                               prod(axz, op(axy)));
  SetPresheaf d = pullback_projection(h, prod(axz, axy), axy, 0);
  out.outer = weighted_limit(w, d, axz, axy);
  return out;
}

inline SetPresheaf right_residual(const Probicategory<SetV>& p, int x, int y,
                                  int z, const SetPresheaf& h,
                                  const SetPresheaf& g) {
  return right_residual_data(p, x, y, z, h, g).outer.value;
}

inline SetPresheaf left_residual(const Probicategory<SetV>& p, int x, int y,
                                 int z, const SetPresheaf& f,
                                 const SetPresheaf& h) {
  return left_residual_data(p, x, y, z, f, h).outer.value;
}

/// (H/G)(a) = ⋀_{a′, c} [P(a, a′, c) ⊗ G(a′), H(c)].
inline VPresheaf right_residual(const Probicategory<QuantaleV>& p, int x, int y,
                                int z, const VPresheaf& h, const VPresheaf& g) {
  const VCategory &ayz = *p.hom(y, z), &axy = *p.hom(x, y), &axz = *p.hom(x, z);
  const Quantale& q = ayz.quantale();
  const int na = ayz.num_objects(), nb = axy.num_objects(),
            nc = axz.num_objects();
  std::vector<int> v(na, q.top());
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      for (int c = 0; c < nc; ++c)
        v[a] = q.meet(v[a], q.residual(q.tensor(p.P(x, y, z)[(a * nb + b) * nc + c],
                                                g[b]),
                                       h[c]));
  return VPresheaf(p.hom(y, z), std::move(v));
}

/// (F\H)(b) = ⋀_{a, c} [F(a) ⊗ P(a, b, c), H(c)].
inline VPresheaf left_residual(const Probicategory<QuantaleV>& p, int x, int y,
                               int z, const VPresheaf& f, const VPresheaf& h) {
  const VCategory &ayz = *p.hom(y, z), &axy = *p.hom(x, y), &axz = *p.hom(x, z);
  const Quantale& q = ayz.quantale();
  const int na = ayz.num_objects(), nb = axy.num_objects(),
            nc = axz.num_objects();
  std::vector<int> v(nb, q.top());
  for (int b = 0; b < nb; ++b)
    for (int a = 0; a < na; ++a)
      for (int c = 0; c < nc; ++c)
        v[b] = q.meet(v[b], q.residual(q.tensor(f[a],
                                                p.P(x, y, z)[(a * nb + b) * nc + c]),
                                       h[c]));
  return VPresheaf(p.hom(x, y), std::move(v));
}

/// The map H/G′ → H/G induced by β: G ⇒ G′.
inline Components right_residual_map(const SetResidual& from_g2,
                                     const SetResidual& to_g,
                                     const Components& beta, int n_yz,
                                     int n_xz) {
  Components inner = colimit_weight_map(to_g.inner, from_g2.inner, beta);
  Components w = detail::swap_components(inner, n_yz, n_xz);
  return limit_weight_map(from_g2.outer, to_g.outer, w, n_xz);
}

/// The map F′\H → F\H induced by α: F ⇒ F′.
inline Components left_residual_map(const SetResidual& from_f2,
                                    const SetResidual& to_f,
                                    const Components& alpha, int n_xy,
                                    int n_xz) {
  Components inner = colimit_weight_map(to_f.inner, from_f2.inner, alpha);
  Components w = detail::swap_components(inner, n_xy, n_xz);
  return limit_weight_map(from_f2.outer, to_f.outer, w, n_xz);
}

// ---------------------------------------------------------------------------
// Biclosed structures and their validation.

/// A biclosed bicategory whose hom categories are realised inside presheaf
/// categories: compose(x, y, z, F, G) = F ∘ G with F: y → z and G: x → y;
/// right_residual(x, y, z, H, G) = H / G; left_residual(x, y, z, F, H) = F \ H.
template <class V>
struct Structure {
  using Presheaf = PresheafOf<V>;
  int objects = 1;
  std::function<Presheaf(int, int, int, const Presheaf&, const Presheaf&)>
      compose;
  std::function<Presheaf(int)> identity;
  std::function<Presheaf(int, int, int, const Presheaf&, const Presheaf&)>
      right_residual;
  std::function<Presheaf(int, int, int, const Presheaf&, const Presheaf&)>
      left_residual;
};

template <class V>
Structure<V> convolution(const Probicategory<V>& p) {
  using Pr = PresheafOf<V>;
  Structure<V> s;
  s.objects = p.size();
  s.compose = [&p](int x, int y, int z, const Pr& f, const Pr& g) {
    return conv_compose(p, x, y, z, f, g);
  };
  s.identity = [&p](int x) { return conv_identity(p, x); };
  s.right_residual = [&p](int x, int y, int z, const Pr& h, const Pr& g) {
    return right_residual(p, x, y, z, h, g);
  };
  s.left_residual = [&p](int x, int y, int z, const Pr& f, const Pr& h) {
    return left_residual(p, x, y, z, f, h);
  };
  return s;
}

/// Finite families of 1-cells, one list per pair of objects (x, y).
template <class V>
struct Scope {
  int objects = 1;
  std::vector<std::vector<PresheafOf<V>>> cells;
  const std::vector<PresheafOf<V>>& at(int x, int y) const {
    return cells[x * objects + y];
  }
  std::vector<PresheafOf<V>>& at(int x, int y) { return cells[x * objects + y]; }
};

/// One representative per isomorphism class, keeping the first occurrence.
inline std::vector<SetPresheaf> iso_representatives(
    const std::vector<SetPresheaf>& all) {
  std::vector<SetPresheaf> reps;
  for (const auto& f : all) {
    bool seen = false;
    for (const auto& r : reps)
      if (r.sizes() == f.sizes() && find_natural_iso(r, f)) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(f);
  }
  return reps;
}
inline std::vector<VPresheaf> iso_representatives(
    const std::vector<VPresheaf>& all) {
  return all;
}

/// Default scope: all presheaves with at most `max_size` elements per object
/// (set backend) or the full carrier (quantale backend).
inline Scope<SetV> default_scope(const Probicategory<SetV>& p, int max_size = 2,
                                 bool up_to_iso = false) {
  Scope<SetV> s{p.size(), {}};
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y) {
      auto all = enumerate_presheaves(p.hom(x, y), max_size);
      s.cells.push_back(up_to_iso ? iso_representatives(all) : all);
    }
  return s;
}
inline Scope<QuantaleV> default_scope(const Probicategory<QuantaleV>& p,
                                      int = 0, bool = false) {
  Scope<QuantaleV> s{p.size(), {}};
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y)
      s.cells.push_back(enumerate_presheaves(p.hom(x, y)));
  return s;
}

inline VObject hom_object(const SetPresheaf& a, const SetPresheaf& b) {
  return presheaf_hom(a, b);
}
inline VObject hom_object(const VPresheaf& a, const VPresheaf& b) {
  return presheaf_hom(a, b);
}

inline bool pointwise_leq(const VPresheaf& a, const VPresheaf& b) {
  for (int x = 0; x < a.base().num_objects(); ++x)
    if (!a.quantale().leq(a[x], b[x])) return false;
  return true;
}

struct ValidateOptions {
  bool adjunction = true;
  bool associativity = true;
  bool units = true;
  bool monotonicity = true;
};

/// Biclosedness, associativity and unit laws of a structure on a scope.
template <class V>
Report biclosed_validate(const Structure<V>& s, const Scope<V>& scope,
                         ValidateOptions opt = {}) {
  using Pr = PresheafOf<V>;
  Report report;
  const int n = s.objects;
  std::map<std::array<int, 5>, Pr> composites;
  auto composite = [&](int x, int y, int z, int i, int j) -> const Pr& {
    std::array<int, 5> key{x, y, z, i, j};
    auto it = composites.find(key);
    if (it == composites.end())
      it = composites
               .emplace(key, s.compose(x, y, z, scope.at(y, z)[i],
                                       scope.at(x, y)[j]))
               .first;
    return it->second;
  };
  auto name3 = [](int x, int y, int z) {
    return "[" + std::to_string(x) + std::to_string(y) + std::to_string(z) + "]";
  };

  if (opt.adjunction) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          const auto& fs = scope.at(y, z);
          const auto& gs = scope.at(x, y);
          const auto& hs = scope.at(x, z);
          std::map<std::pair<int, int>, Pr> rres, lres;
          Validation v = Validation::pass();
          std::size_t count = 0;
          for (std::size_t i = 0; i < fs.size() && v.ok; ++i)
            for (std::size_t j = 0; j < gs.size() && v.ok; ++j)
              for (std::size_t k = 0; k < hs.size() && v.ok; ++k) {
                const Pr& fg = composite(x, y, z, i, j);
                auto rk = std::make_pair(int(k), int(j));
                if (!rres.count(rk))
                  rres.emplace(rk, s.right_residual(x, y, z, hs[k], gs[j]));
                auto lk = std::make_pair(int(i), int(k));
                if (!lres.count(lk))
                  lres.emplace(lk, s.left_residual(x, y, z, fs[i], hs[k]));
                const VObject h1 = hom_object(fg, hs[k]);
                const VObject h2 = hom_object(fs[i], rres.at(rk));
                const VObject h3 = hom_object(gs[j], lres.at(lk));
                ++count;
                if (!(h1 == h2) || !(h1 == h3))
                  v = Validation::fail(
                      "adjunction", "hom(F∘G,H), hom(F,H/G), hom(G,F\\H) differ",
                      {{"F", i}, {"G", j}, {"H", k},
                       {"hom(F∘G,H)", h1.to_json()},
                       {"hom(F,H/G)", h2.to_json()},
                       {"hom(G,F\\H)", h3.to_json()}});
              }
          if (v.ok) v.witness = {{"triples", count}};
          report.add("adjunction" + name3(x, y, z), v);
        }
  }

  if (opt.associativity) {
    for (int w = 0; w < n; ++w)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z) {
            const auto& fs = scope.at(y, z);
            const auto& gs = scope.at(x, y);
            const auto& hs = scope.at(w, x);
            Validation v = Validation::pass();
            std::size_t count = 0;
            for (std::size_t i = 0; i < fs.size() && v.ok; ++i)
              for (std::size_t j = 0; j < gs.size() && v.ok; ++j)
                for (std::size_t k = 0; k < hs.size() && v.ok; ++k) {
                  const Pr left = s.compose(w, x, z, composite(x, y, z, i, j), hs[k]);
                  const Pr right =
                      s.compose(w, y, z, fs[i], composite(w, x, y, j, k));
                  ++count;
                  if (!isomorphic(left, right))
                    v = Validation::fail("associativity",
                                         "(F∘G)∘H is not isomorphic to F∘(G∘H)",
                                         {{"F", i}, {"G", j}, {"H", k},
                                          {"(F∘G)∘H", left.to_json()},
                                          {"F∘(G∘H)", right.to_json()}});
                }
            if (v.ok) v.witness = {{"triples", count}};
            report.add("associativity[" + std::to_string(w) + std::to_string(x) +
                           std::to_string(y) + std::to_string(z) + "]",
                       v);
          }
  }

  if (opt.units) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const Pr iy = s.identity(y), ix = s.identity(x);
        Validation v = Validation::pass();
        for (std::size_t i = 0; i < scope.at(x, y).size() && v.ok; ++i) {
          const Pr& f = scope.at(x, y)[i];
          const Pr left = s.compose(x, y, y, iy, f);
          const Pr right = s.compose(x, x, y, f, ix);
          if (!isomorphic(left, f))
            v = Validation::fail("unit", "I∘F is not isomorphic to F",
                                 {{"F", i}, {"I∘F", left.to_json()}});
          else if (!isomorphic(right, f))
            v = Validation::fail("unit", "F∘I is not isomorphic to F",
                                 {{"F", i}, {"F∘I", right.to_json()}});
        }
        if (v.ok) v.witness = {{"cells", scope.at(x, y).size()}};
        report.add("unit[" + std::to_string(x) + std::to_string(y) + "]", v);
      }
  }

  if constexpr (std::is_same_v<V, QuantaleV>) {
    if (opt.monotonicity) {
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          for (int z = 0; z < n; ++z) {
            const auto& fs = scope.at(y, z);
            const auto& gs = scope.at(x, y);
            Validation v = Validation::pass();
            for (std::size_t i = 0; i < fs.size() && v.ok; ++i)
              for (std::size_t i2 = 0; i2 < fs.size() && v.ok; ++i2) {
                if (!pointwise_leq(fs[i], fs[i2])) continue;
                for (std::size_t j = 0; j < gs.size() && v.ok; ++j)
                  for (std::size_t j2 = 0; j2 < gs.size() && v.ok; ++j2) {
                    if (!pointwise_leq(gs[j], gs[j2])) continue;
                    if (!pointwise_leq(composite(x, y, z, i, j),
                                       composite(x, y, z, i2, j2)))
                      v = Validation::fail("monotonicity",
                                           "∘ is not monotone",
                                           {{"F", i}, {"F'", i2}, {"G", j},
                                            {"G'", j2}});
                  }
              }
            report.add("monotonicity" + name3(x, y, z), v);
          }
    }
  }
  return report;
}

template <class V>
Report biclosed_validate(const Probicategory<V>& p, const Scope<V>& scope,
                         ValidateOptions opt = {}) {
  return biclosed_validate(convolution(p), scope, opt);
}

/// Functoriality of the structure presheaves and identities, coherence data
/// when present, then the convolution laws on `scope`.
template <class V>
Report check_probicat(const Probicategory<V>& p, const Scope<V>& scope,
                      ValidateOptions opt = {}) {
  Report report;
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y)
      for (int z = 0; z < p.size(); ++z) {
        Validation v = check_presheaf(p.P(x, y, z));
        if constexpr (std::is_same_v<V, SetV>) {
          if (!v.ok && v.witness.contains("g")) {
            const FinCategory& b = p.P(x, y, z).base();
            v.witness["morphism"] = b.morphism_label(v.witness.at("g"));
          } else if (!v.ok && v.witness.contains("morphism")) {
            const FinCategory& b = p.P(x, y, z).base();
            v.witness["label"] = b.morphism_label(v.witness.at("morphism"));
          }
        }
        report.add("functorial:P_" + p.index_label(x, y, z), v);
      }
  for (int x = 0; x < p.size(); ++x)
    report.add("functorial:J_" + p.objects()[x], check_presheaf(p.J(x)));
  if constexpr (std::is_same_v<V, SetV>) {
    if (p.coherence())
      report.add("coherence", check_monoidal(*p.hom(0, 0), *p.coherence()));
  }
  if (report.passed()) report.merge(biclosed_validate(p, scope, opt));
  return report;
}

}  // namespace probicat
