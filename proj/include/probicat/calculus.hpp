#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "natural.hpp"
#include "presheaf.hpp"

namespace probicat {

// Conventions. Weighted colimits take a weight W on Param × K and a diagram D
// on K^op × B and return W * D on Param × B,
//
//     (W * D)(p, b) = ∫^k W(p, k) ⊗ D(k, b).
//
// Weighted limits take W on K × B^op and D on K × B and return {W, D} on B,
//
//     {W, D}(b) = ∫_k [W(k, b), D(k, b)].
//
// A single-variable weight is a weight with Param the terminal category,
// whose product ids coincide with those of K.

// ---------------------------------------------------------------------------
// Hom objects.

inline VObject presheaf_hom(const SetPresheaf& f, const SetPresheaf& g,
                            std::size_t cap = kDefaultSearchCap) {
  if (!(f.base() == g.base())) throw InputError("hom between different bases");
  NaturalSearch search(f, g, false, cap);
  return VObject::of_set(static_cast<int>(search.run([](const Components&) {
    return true;
  })));
}

inline VObject presheaf_hom(const VPresheaf& f, const VPresheaf& g) {
  if (f.base().num_objects() != g.base().num_objects())
    throw InputError("hom between different bases");
  const Quantale& q = f.quantale();
  int acc = q.top();
  for (int x = 0; x < f.base().num_objects(); ++x)
    acc = q.meet(acc, q.residual(f[x], g[x]));
  return VObject::of_element(acc);
}

// ---------------------------------------------------------------------------
// Reindexing helpers for iterated products.

/// Reindex a presheaf on (X × Y) × Z to one on (Y × X) × Z.
inline SetPresheaf swap_first_two(const SetPresheaf& f, const FinCategory& x,
                                  const FinCategory& y, const FinCategory& z,
                                  const CatPtr& target) {
  const int nx = x.num_objects(), ny = y.num_objects(), nz = z.num_objects();
  const int mx = x.num_morphisms(), my = y.num_morphisms(),
            mz = z.num_morphisms();
  std::vector<int> sizes(target->num_objects());
  std::vector<std::vector<int>> act(target->num_morphisms());
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k)
        sizes[(j * nx + i) * nz + k] = f.size((i * ny + j) * nz + k);
  for (int a = 0; a < mx; ++a)
    for (int b = 0; b < my; ++b)
      for (int c = 0; c < mz; ++c)
        act[(b * mx + a) * mz + c] = f.map((a * my + b) * mz + c);
  return SetPresheaf(target, std::move(sizes), std::move(act));
}

inline VPresheaf swap_first_two(const VPresheaf& f, const VCategory& x,
                                const VCategory& y, const VCategory& z,
                                const VCatPtr& target) {
  const int nx = x.num_objects(), ny = y.num_objects(), nz = z.num_objects();
  std::vector<int> v(target->num_objects());
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k)
        v[(j * nx + i) * nz + k] = f[(i * ny + j) * nz + k];
  return VPresheaf(target, std::move(v));
}

/// Slice of a presheaf on K × B at a fixed second coordinate, as a presheaf
/// on K.
inline SetPresheaf slice_second(const SetPresheaf& f, int b, const CatPtr& k) {
  const FinCategory& whole = f.base();
  const int nk = k->num_objects(), mk = k->num_morphisms();
  const int nb = whole.num_objects() / nk, mb = whole.num_morphisms() / mk;
  const int id_b = whole.identity(b) % mb;
  std::vector<int> sizes(nk);
  for (int i = 0; i < nk; ++i) sizes[i] = f.size(i * nb + b);
  std::vector<std::vector<int>> act(mk);
  for (int g = 0; g < mk; ++g) act[g] = f.map(g * mb + id_b);
  return SetPresheaf(k, std::move(sizes), std::move(act));
}

inline VPresheaf slice_second(const VPresheaf& f, int b, const VCatPtr& k) {
  const int nk = k->num_objects();
  const int nb = f.base().num_objects() / nk;
  std::vector<int> v(nk);
  for (int i = 0; i < nk; ++i) v[i] = f[i * nb + b];
  return VPresheaf(k, std::move(v));
}

/// Components of the external product α ⊠ β: F ⊠ G ⇒ F′ ⊠ G′.
inline Components external_product(const Components& a, const Components& b,
                                    const SetPresheaf& g, const SetPresheaf& g2) {
  Components out;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::vector<int> c;
      for (std::size_t u = 0; u < a[i].size(); ++u)
        for (int v = 0; v < g.size(static_cast<int>(j)); ++v)
          c.push_back(a[i][u] * g2.size(static_cast<int>(j)) + b[j][v]);
      out.push_back(std::move(c));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Weighted colimits.

/// W * D in the set backend, with its coprojections.
struct SetColimit {
  SetPresheaf value;
  int index_objects = 0;
  // For result object r: offset[r][k] is where the block W(p,k) × D(k,b)
  // starts in the disjoint union and stride[r][k] = |D(k,b)|; inj[r] maps a
  // disjoint-union position to its class.
  std::vector<std::vector<int>> offset, stride, inj;
  // Least representative (k, w, d) of each class.
  std::vector<std::vector<std::tuple<int, int, int>>> rep;

  int injection(int r, int k, int w, int d) const {
    return inj[r][offset[r][k] + w * stride[r][k] + d];
  }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller id always becomes the root.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/// W on param × index, D on index^op × B; the result lives on `result`, which
/// must be param × B (or B itself when param is terminal).
inline SetColimit weighted_colimit(const SetPresheaf& w, const SetPresheaf& d,
                                   const FinCategory& param,
                                   const FinCategory& index,
                                   const CatPtr& result) {
  const int np = param.num_objects(), mp = param.num_morphisms();
  const int nk = index.num_objects(), mk = index.num_morphisms();
  const int nb = d.base().num_objects() / nk;
  const int mb = d.base().num_morphisms() / mk;
  if (w.base().num_objects() != np * nk || d.base().num_objects() != nk * nb ||
      result->num_objects() != np * nb)
    throw InputError("weighted colimit: weight, diagram and result disagree");
  SetColimit out;
  out.index_objects = nk;
  const int nr = np * nb;
  out.offset.assign(nr, std::vector<int>(nk, 0));
  out.stride.assign(nr, std::vector<int>(nk, 0));
  out.inj.resize(nr);
  out.rep.resize(nr);
  std::vector<int> sizes(nr, 0);
  for (int p = 0; p < np; ++p) {
    const int id_p = param.identity(p);
    for (int b = 0; b < nb; ++b) {
      const int r = p * nb + b;
      const int id_b = d.base().identity(b) % mb;
      int total = 0;
      for (int k = 0; k < nk; ++k) {
        out.offset[r][k] = total;
        out.stride[r][k] = d.size(k * nb + b);
        total += w.size(p * nk + k) * d.size(k * nb + b);
      }
      detail::UnionFind uf(total);
      for (int f : index.generators()) {
        const int k = index.source(f), k2 = index.target(f);
        const auto& wf = w.map(id_p * mk + f);
        const auto& df = d.map(f * mb + id_b);  // D(k2, b) → D(k, b)
        const int s2 = out.stride[r][k2], s1 = out.stride[r][k];
        for (int e = 0; e < w.size(p * nk + k); ++e)
          for (int x = 0; x < s2; ++x)
            uf.unite(out.offset[r][k2] + wf[e] * s2 + x,
                     out.offset[r][k] + e * s1 + df[x]);
      }
      auto& inj = out.inj[r];
      inj.assign(total, -1);
      std::vector<int> class_of_root(total, -1);
      int classes = 0;
      for (int k = 0; k < nk; ++k)
        for (int e = 0; e < w.size(p * nk + k); ++e)
          for (int x = 0; x < out.stride[r][k]; ++x) {
            const int pos = out.offset[r][k] + e * out.stride[r][k] + x;
            const int root = uf.find(pos);
            if (class_of_root[root] < 0) {
              class_of_root[root] = classes++;
              out.rep[r].emplace_back(k, e, x);
            }
            inj[pos] = class_of_root[root];
          }
      sizes[r] = classes;
    }
  }
  std::vector<std::vector<int>> act(result->num_morphisms());
  for (int gp = 0; gp < mp; ++gp)
    for (int gb = 0; gb < mb; ++gb) {
      const int p = param.source(gp), p2 = param.target(gp);
      const int b = d.base().source(gb) % nb, b2 = d.base().target(gb) % nb;
      const int r = p * nb + b, r2 = p2 * nb + b2;
      std::vector<int> m(sizes[r]);
      for (int c = 0; c < sizes[r]; ++c) {
        const auto [k, e, x] = out.rep[r][c];
        const int id_k = index.identity(k);
        m[c] = out.injection(r2, k, w.apply(gp * mk + id_k, e),
                             d.apply(id_k * mb + gb, x));
      }
      act[gp * mb + gb] = std::move(m);
    }
  out.value = SetPresheaf(result, std::move(sizes), std::move(act));
  return out;
}

inline VPresheaf weighted_colimit_value(const VPresheaf& w, const VPresheaf& d,
                                        const VCategory& param,
                                        const VCategory& index,
                                        const VCatPtr& result) {
  const int np = param.num_objects(), nk = index.num_objects();
  const int nb = d.base().num_objects() / nk;
  if (w.base().num_objects() != np * nk || d.base().num_objects() != nk * nb ||
      result->num_objects() != np * nb)
    throw InputError("weighted colimit: weight, diagram and result disagree");
  const Quantale& q = w.quantale();
  std::vector<int> v(np * nb, q.bottom());
  for (int p = 0; p < np; ++p)
    for (int b = 0; b < nb; ++b)
      for (int k = 0; k < nk; ++k)
        v[p * nb + b] =
            q.join(v[p * nb + b], q.tensor(w[p * nk + k], d[k * nb + b]));
  return VPresheaf(result, std::move(v));
}

inline SetPresheaf weighted_colimit_value(const SetPresheaf& w,
                                          const SetPresheaf& d,
                                          const FinCategory& param,
                                          const FinCategory& index,
                                          const CatPtr& result) {
  return weighted_colimit(w, d, param, index, result).value;
}

/// The map W * D → W′ * D induced by β: W ⇒ W′.
inline Components colimit_weight_map(const SetColimit& from,
                                     const SetColimit& to,
                                     const Components& beta) {
  const int nk = from.index_objects;
  const int nr = static_cast<int>(from.rep.size());
  const int nb = nr == 0 ? 0 : nr / (static_cast<int>(beta.size()) / nk);
  Components out(nr);
  for (int r = 0; r < nr; ++r) {
    const int p = r / nb;
    for (const auto& [k, e, x] : from.rep[r])
      out[r].push_back(to.injection(r, k, beta[p * nk + k][e], x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weighted limits.

/// {W, D} in the set backend. Elements of the result at b are the natural
/// transformations W(−, b) ⇒ D(−, b), listed in lexicographic order.
struct SetLimit {
  SetPresheaf value;
  std::vector<std::vector<Components>> elements;
  std::vector<std::map<Components, int>> lookup;
};

/// W on index × B^op, D on index × B; the result lives on `result` = B.
inline SetLimit weighted_limit(const SetPresheaf& w, const SetPresheaf& d,
                               const CatPtr& index, const CatPtr& result,
                               std::size_t cap = kDefaultSearchCap) {
  const FinCategory& k = *index;
  const FinCategory& b = *result;
  const int nk = k.num_objects(), mk = k.num_morphisms();
  const int nb = b.num_objects(), mb = b.num_morphisms();
  if (w.base().num_objects() != nk * nb || d.base().num_objects() != nk * nb)
    throw InputError("weighted limit: weight, diagram and result disagree");
  SetLimit out;
  out.elements.resize(nb);
  out.lookup.resize(nb);
  std::vector<int> sizes(nb);
  for (int y = 0; y < nb; ++y) {
    SetPresheaf ws = slice_second(w, y, index);
    SetPresheaf ds = slice_second(d, y, index);
    out.elements[y] = NaturalSearch(ws, ds, false, cap).all();
    for (std::size_t i = 0; i < out.elements[y].size(); ++i)
      out.lookup[y].emplace(out.elements[y][i], static_cast<int>(i));
    sizes[y] = static_cast<int>(out.elements[y].size());
  }
  std::vector<std::vector<int>> act(mb);
  for (int g = 0; g < mb; ++g) {
    const int y = b.source(g), y2 = b.target(g);
    std::vector<int> m;
    for (const Components& phi : out.elements[y]) {
      Components moved(nk);
      for (int i = 0; i < nk; ++i) {
        const int id_i = k.identity(i);
        const auto& wg = w.map(id_i * mb + g);  // W(i, y2) → W(i, y)
        const auto& dg = d.map(id_i * mb + g);  // D(i, y) → D(i, y2)
        for (int e : wg) moved[i].push_back(dg[phi[i][e]]);
      }
      m.push_back(out.lookup[y2].at(moved));
    }
    act[g] = std::move(m);
  }
  (void)mk;
  out.value = SetPresheaf(result, std::move(sizes), std::move(act));
  return out;
}

inline VPresheaf weighted_limit_value(const VPresheaf& w, const VPresheaf& d,
                                      const VCatPtr& index,
                                      const VCatPtr& result) {
  const int nk = index->num_objects(), nb = result->num_objects();
  if (w.base().num_objects() != nk * nb || d.base().num_objects() != nk * nb)
    throw InputError("weighted limit: weight, diagram and result disagree");
  const Quantale& q = w.quantale();
  std::vector<int> v(nb, q.top());
  for (int y = 0; y < nb; ++y)
    for (int i = 0; i < nk; ++i)
      v[y] = q.meet(v[y], q.residual(w[i * nb + y], d[i * nb + y]));
  return VPresheaf(result, std::move(v));
}

inline SetPresheaf weighted_limit_value(const SetPresheaf& w,
                                        const SetPresheaf& d,
                                        const CatPtr& index,
                                        const CatPtr& result) {
  return weighted_limit(w, d, index, result).value;
}

/// The map {W′, D} → {W, D} induced by β: W ⇒ W′ (precomposition).
inline Components limit_weight_map(const SetLimit& from, const SetLimit& to,
                                   const Components& beta, int index_objects) {
  const int nb = static_cast<int>(from.elements.size());
  Components out(nb);
  for (int y = 0; y < nb; ++y)
    for (const Components& phi : from.elements[y]) {
      Components pre(index_objects);
      for (int i = 0; i < index_objects; ++i)
        for (int e : beta[i * nb + y]) pre[i].push_back(phi[i][e]);
      out[y].push_back(to.lookup[y].at(pre));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Yoneda and density.

/// The hom presheaf N(X, e) = A(X, e) on A^op × A.
inline SetPresheaf yoneda_embed(const CatPtr& a) {
  const FinCategory& c = *a;
  const CatPtr base = prod(op(a), a);
  const int n = c.num_objects(), m = c.num_morphisms();
  std::vector<int> sizes(n * n);
  for (int x = 0; x < n; ++x)
    for (int e = 0; e < n; ++e)
      sizes[x * n + e] = static_cast<int>(c.hom(x, e).size());
  std::vector<std::vector<int>> act(static_cast<std::size_t>(m) * m);
  for (int f = 0; f < m; ++f)
    for (int g = 0; g < m; ++g) {
      // (f, g): (t f, s g) → (s f, t g), h ↦ g∘h∘f.
      const auto& src = c.hom(c.target(f), c.source(g));
      const auto& tgt = c.hom(c.source(f), c.target(g));
      std::vector<int> mp;
      for (int h : src) {
        const int v = c.compose(g, c.compose(h, f));
        mp.push_back(static_cast<int>(
            std::lower_bound(tgt.begin(), tgt.end(), v) - tgt.begin()));
      }
      act[f * m + g] = std::move(mp);
    }
  return SetPresheaf(base, std::move(sizes), std::move(act));
}

inline VPresheaf yoneda_embed(const VCatPtr& a) {
  return VPresheaf(prod(op(a), a), a->hom_matrix());
}

/// The row N(X, −) of a two-variable presheaf on A^op × E, as a presheaf on E.
inline SetPresheaf row(const SetPresheaf& n, int x, const CatPtr& e) {
  return slice_first(n, x, e);
}
inline VPresheaf row(const VPresheaf& n, int x, const VCatPtr& e) {
  return slice_first(n, x, e);
}

/// X ↦ hom(N(X, −), C) for N on A^op × E and C on E, as a presheaf on A,
/// computed as the weighted limit {N, C} over E.
inline SetLimit hom_presheaf(const SetPresheaf& n, const SetPresheaf& c,
                             const CatPtr& a, const CatPtr& e) {
  const CatPtr w_base = prod(e, op(a));
  SetPresheaf w = swap_factors(n, *op(a), *e, w_base);
  SetPresheaf d = pullback_projection(c, prod(e, a), a, 0);
  return weighted_limit(w, d, e, a);
}

inline VPresheaf hom_presheaf(const VPresheaf& n, const VPresheaf& c,
                              const VCatPtr& a, const VCatPtr& e) {
  VPresheaf w = swap_factors(n, *op(a), *e, prod(e, op(a)));
  VPresheaf d = pullback_projection(c, prod(e, a), a, 0);
  return weighted_limit_value(w, d, e, a);
}

inline SetPresheaf hom_presheaf_value(const SetPresheaf& n,
                                      const SetPresheaf& c, const CatPtr& a,
                                      const CatPtr& e) {
  return hom_presheaf(n, c, a, e).value;
}
inline VPresheaf hom_presheaf_value(const VPresheaf& n, const VPresheaf& c,
                                    const VCatPtr& a, const VCatPtr& e) {
  return hom_presheaf(n, c, a, e);
}

/// Canonical comparison hom(N−, C) * N → C for one C, in the set backend.
/// Returns the colimit together with the comparison components.
inline std::pair<SetColimit, Components> density_comparison(
    const SetPresheaf& n, const SetPresheaf& c, const CatPtr& a,
    const CatPtr& e) {
  SetLimit homs = hom_presheaf(n, c, a, e);
  SetColimit colim = weighted_colimit(homs.value, n, *terminal(), *a, e);
  Components cmp(e->num_objects());
  for (int y = 0; y < e->num_objects(); ++y)
    for (const auto& [x, phi, el] : colim.rep[y])
      cmp[y].push_back(homs.elements[x][phi][y][el]);
  return {std::move(colim), std::move(cmp)};
}

/// Density of N on the test objects `tests`: the comparison must be an
/// isomorphism for each.
inline Validation density_check(const SetPresheaf& n,
                                const std::vector<SetPresheaf>& tests,
                                const CatPtr& a, const CatPtr& e) {
  for (std::size_t i = 0; i < tests.size(); ++i) {
    auto [colim, cmp] = density_comparison(n, tests[i], a, e);
    if (!is_bijective(cmp, tests[i]))
      return Validation::fail("density", "canonical comparison is not invertible",
                              {{"test", i},
                               {"object", tests[i].to_json()},
                               {"colimit", colim.value.to_json()},
                               {"comparison", cmp}});
  }
  return Validation::pass();
}

inline Validation density_check(const VPresheaf& n,
                                const std::vector<VPresheaf>& tests,
                                const VCatPtr& a, const VCatPtr& e) {
  const VCatPtr one = terminal(a->quantale_ptr());
  for (std::size_t i = 0; i < tests.size(); ++i) {
    VPresheaf homs = hom_presheaf(n, tests[i], a, e);
    VPresheaf colim = weighted_colimit_value(homs, n, *one, *a, e);
    if (!(colim == tests[i]))
      return Validation::fail("density", "canonical comparison is not invertible",
                              {{"test", i},
                               {"object", tests[i].to_json()},
                               {"colimit", colim.to_json()}});
  }
  return Validation::pass();
}

}  // namespace probicat
