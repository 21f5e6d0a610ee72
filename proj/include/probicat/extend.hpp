#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "localise.hpp"

namespace probicat {

// Extension of a probicategory A along a family N_xy: A_xy^op → C_xy.
//
// Each C_xy is realised as a reflective full subcategory of [E_xy, V]: the
// reflector ψ decides membership and computes colimits in C as ψ of the
// presheaf colimit. Limits in C are presheaf limits. N_xy is stored as one
// presheaf on A_xy^op × E_xy whose row at X is N X.

template <class V>
struct ExtensionSetup {
  using CatP = typename V::CatP;
  using Presheaf = PresheafOf<V>;

  const Probicategory<V>* a = nullptr;
  std::vector<CatP> targets;  // E_xy, indexed x·n + y
  Reflector<V> psi;
  std::vector<Presheaf> n;    // N_xy on A_xy^op × E_xy
  Scope<V> scope;             // test objects of each C_xy
  Report density;
  // Localisation setups remember Σ and the scope of B for the oracle.
  std::optional<SigmaSet> sigma;
  Scope<V> base_scope;

  int size() const { return a->size(); }
  const CatP& target(int x, int y) const { return targets[x * size() + y]; }
  const Presheaf& N(int x, int y) const { return n[x * size() + y]; }
  Presheaf N_at(int x, int y, int obj) const {
    return slice_first(N(x, y), obj, target(x, y));
  }
};

namespace detail {

inline const CatPtr& unit_category(const CatPtr&) { return terminal(); }
inline VCatPtr unit_category(const VCatPtr& like) {
  return terminal(like->quantale_ptr());
}

/// A presheaf on Param × E reflected row by row, with the row reflections.
template <class V>
struct Rows {
  PresheafOf<V> value;
  std::vector<Reflection<V>> rows;
};

template <class V>
Rows<V> reflect_rows(const Reflector<V>& psi, int x, int y,
                     const PresheafOf<V>& f, const typename V::CatP& param,
                     const typename V::CatP& e) {
  using Pr = PresheafOf<V>;
  const int np = param->num_objects();
  Rows<V> out{f, {}};
  bool all_local = true;
  std::vector<Pr> raw;
  for (int p = 0; p < np; ++p) {
    raw.push_back(slice_first(f, p, e));
    all_local = all_local && psi.contains(x, y, raw.back());
  }
  if (all_local) {
    for (auto& r : raw) {
      Reflection<V> id{r, {}, 0};
      if constexpr (std::is_same_v<V, SetV>) id.unit = identity_components(r);
      out.rows.push_back(std::move(id));
    }
    return out;
  }
  for (const auto& r : raw) out.rows.push_back(psi.reflect(x, y, r));
  const int ne = e->num_objects();
  if constexpr (std::is_same_v<V, SetV>) {
    const FinCategory& pc = *param;
    const FinCategory& ec = *e;
    const int mp = pc.num_morphisms(), me = ec.num_morphisms();
    std::vector<int> sizes(np * ne);
    for (int p = 0; p < np; ++p)
      for (int j = 0; j < ne; ++j) sizes[p * ne + j] = out.rows[p].value.size(j);
    std::vector<std::vector<int>> act(static_cast<std::size_t>(mp) * me);
    for (int u = 0; u < mp; ++u) {
      const int su = pc.source(u), tu = pc.target(u);
      Components beta(ne);
      for (int j = 0; j < ne; ++j) beta[j] = f.map(u * me + ec.identity(j));
      const Components moved = psi_map(out.rows[su], out.rows[tu], beta);
      for (int g = 0; g < me; ++g) {
        const auto& after = out.rows[tu].value.map(g);
        std::vector<int> m;
        for (int el : moved[ec.source(g)]) m.push_back(after[el]);
        act[u * me + g] = std::move(m);
      }
    }
    out.value = SetPresheaf(f.base_ptr(), std::move(sizes), std::move(act));
  } else {
    std::vector<int> v(np * ne);
    for (int p = 0; p < np; ++p)
      for (int j = 0; j < ne; ++j) v[p * ne + j] = out.rows[p].value[j];
    out.value = VPresheaf(f.base_ptr(), std::move(v));
  }
  return out;
}

/// X ↦ C_xy(N X, C) as a presheaf on A_xy.
template <class V>
PresheafOf<V> hom_weight(const ExtensionSetup<V>& s, int x, int y,
                         const PresheafOf<V>& c) {
  return hom_presheaf_value(s.N(x, y), c, s.a->hom(x, y), s.target(x, y));
}

inline std::string pair_name(int x, int y) {
  return "[" + std::to_string(x) + std::to_string(y) + "]";
}

}  // namespace detail

/// Q_xyz on (A_yz × A_xy)^op × E_xz: Q(A, A′) = P(A, A′, X) * N_xz X,
/// reflected into C_xz.
template <class V>
detail::Rows<V> ext_Q_all(const ExtensionSetup<V>& s, int x, int y, int z) {
  const Probicategory<V>& p = *s.a;
  const auto param = prod(op(p.hom(y, z)), op(p.hom(x, y)));
  const auto base = prod(param, s.target(x, z));
  PresheafOf<V> raw = weighted_colimit_value(p.P(x, y, z), s.N(x, z), *param,
                                             *p.hom(x, z), base);
  return detail::reflect_rows(s.psi, x, z, raw, param, s.target(x, z));
}

/// Q_xyz(A, A′) for A in A_yz and A′ in A_xy, an object of C_xz.
template <class V>
PresheafOf<V> ext_Q(const ExtensionSetup<V>& s, int x, int y, int z, int a,
                    int a2) {
  const int n_xy = s.a->hom(x, y)->num_objects();
  return ext_Q_all(s, x, y, z).rows[a * n_xy + a2].value;
}

/// I_x = J_x X * N_xx X.
template <class V>
PresheafOf<V> ext_identity(const ExtensionSetup<V>& s, int x) {
  const auto& axx = s.a->hom(x, x);
  const auto one = detail::unit_category(axx);
  PresheafOf<V> raw = weighted_colimit_value(s.a->J(x), s.N(x, x), *one, *axx,
                                             s.target(x, x));
  return s.psi.reflect(x, x, raw).value;
}

/// C ∘ C′ = (C_yz(N X, C) ⊗ C_xy(N X′, C′)) * Q(X, X′), for C in C_yz and C′
/// in C_xy.
template <class V>
PresheafOf<V> ext_compose(const ExtensionSetup<V>& s, int x, int y, int z,
                          const PresheafOf<V>& c, const PresheafOf<V>& c2) {
  const Probicategory<V>& p = *s.a;
  const auto k = p.pair_base(x, y, z);
  const auto w = external_product(detail::hom_weight(s, y, z, c),
                                  detail::hom_weight(s, x, y, c2), k);
  const auto q = ext_Q_all(s, x, y, z);
  const auto one = detail::unit_category(k);
  PresheafOf<V> raw =
      weighted_colimit_value(w, q.value, *one, *k, s.target(x, z));
  return s.psi.reflect(x, z, raw).value;
}

enum class HK { H, K };

/// The weight of H or K for C in C_xz, as a presheaf on Param × Index:
/// for H, (A, X) ↦ C_xz(Q(X, A), C) on A_xy × A_yz; for K,
/// (A, X) ↦ C_xz(Q(A, X), C) on A_yz × A_xy.
template <class V>
PresheafOf<V> ext_HK_weight(const ExtensionSetup<V>& s, HK which, int x, int y,
                            int z, const PresheafOf<V>& c) {
  const Probicategory<V>& p = *s.a;
  const auto &ayz = p.hom(y, z), &axy = p.hom(x, y);
  const auto& exz = s.target(x, z);
  const auto q = ext_Q_all(s, x, y, z).value;
  if (which == HK::K)
    return hom_presheaf_value(q, c, prod(ayz, axy), exz);
  const auto swapped =
      swap_first_two(q, *op(ayz), *op(axy), *exz, prod(prod(op(axy), op(ayz)), exz));
  return hom_presheaf_value(swapped, c, prod(axy, ayz), exz);
}

/// H_yz(−, C) on A_xy × E_yz or K_xy(−, C) on A_yz × E_xy, row by row in C.
template <class V>
detail::Rows<V> ext_HK_all(const ExtensionSetup<V>& s, HK which, int x, int y,
                           int z, const PresheafOf<V>& c) {
  const Probicategory<V>& p = *s.a;
  const bool h = which == HK::H;
  const auto& param = h ? p.hom(x, y) : p.hom(y, z);
  const auto& index = h ? p.hom(y, z) : p.hom(x, y);
  const int u = h ? y : x, v = h ? z : y;
  const auto w = ext_HK_weight(s, which, x, y, z, c);
  PresheafOf<V> raw = weighted_colimit_value(w, s.N(u, v), *param, *index,
                                             prod(param, s.target(u, v)));
  return detail::reflect_rows(s.psi, u, v, raw, param, s.target(u, v));
}

/// H_yz(A, C) for A in A_xy, or K_xy(A, C) for A in A_yz; C in C_xz.
template <class V>
PresheafOf<V> ext_HK(const ExtensionSetup<V>& s, HK which, int x, int y, int z,
                     int a, const PresheafOf<V>& c) {
  return ext_HK_all(s, which, x, y, z, c).rows[a].value;
}

enum class ResidualSide { left, right };

/// C / C′ = {C_xy(N X, C′), H_yz(X, C)} for C in C_xz and C′ in C_xy, an
/// object of C_yz; C \ C′ = {C_yz(N X, C), K_xy(X, C′)} for C in C_yz and C′
/// in C_xz, an object of C_xy.
template <class V>
PresheafOf<V> ext_residual(const ExtensionSetup<V>& s, ResidualSide side, int x,
                           int y, int z, const PresheafOf<V>& c,
                           const PresheafOf<V>& c2) {
  const Probicategory<V>& p = *s.a;
  if (side == ResidualSide::right) {
    const auto& axy = p.hom(x, y);
    const auto& eyz = s.target(y, z);
    const auto d = ext_HK_all(s, HK::H, x, y, z, c).value;
    const auto w = pullback_projection(detail::hom_weight(s, x, y, c2),
                                       prod(axy, op(eyz)), op(eyz), 0);
    return weighted_limit_value(w, d, axy, eyz);
  }
  const auto& ayz = p.hom(y, z);
  const auto& exy = s.target(x, y);
  const auto d = ext_HK_all(s, HK::K, x, y, z, c2).value;
  const auto w = pullback_projection(detail::hom_weight(s, y, z, c),
                                     prod(ayz, op(exy)), op(exy), 0);
  return weighted_limit_value(w, d, ayz, exy);
}

// ---------------------------------------------------------------------------
// Density and the isomorphism hypotheses.

/// Density of N_xy inside C_xy on the scope: the comparison
/// ψ(C(N−, C) * N) → C must be invertible.
template <class V>
Report ext_density(const ExtensionSetup<V>& s) {
  Report report;
  const int n = s.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const auto& a = s.a->hom(x, y);
      const auto& e = s.target(x, y);
      Validation v = Validation::pass(json{{"tested", s.scope.at(x, y).size()}});
      for (std::size_t i = 0; i < s.scope.at(x, y).size(); ++i) {
        const auto& c = s.scope.at(x, y)[i];
        if constexpr (std::is_same_v<V, SetV>) {
          auto [colim, cmp] = density_comparison(s.N(x, y), c, a, e);
          const Reflection<SetV>& r = s.psi.reflect(x, y, colim.value);
          const Reflection<SetV> self{c, identity_components(c), 0};
          const Components induced = psi_map(r, self, cmp);
          if (!is_bijective(induced, c)) {
            v = Validation::fail("density", "canonical comparison is not invertible",
                                 {{"test", i},
                                  {"object", c.to_json()},
                                  {"colimit", r.value.to_json()},
                                  {"comparison", induced}});
            break;
          }
        } else {
          const VPresheaf homs = hom_presheaf(s.N(x, y), c, a, e);
          const VPresheaf colim = weighted_colimit_value(
              homs, s.N(x, y), *detail::unit_category(a), *a, e);
          const VPresheaf reflected = s.psi.reflect(x, y, colim).value;
          if (!(reflected == c)) {
            v = Validation::fail("density", "canonical comparison is not invertible",
                                 {{"test", i},
                                  {"object", c.to_json()},
                                  {"colimit", reflected.to_json()}});
            break;
          }
        }
      }
      report.add("density" + detail::pair_name(x, y), v);
    }
  return report;
}

/// Builds a setup and records density on its scope.
template <class V>
ExtensionSetup<V> make_extension(const Probicategory<V>& p,
                                 std::vector<typename V::CatP> targets,
                                 Reflector<V> psi, std::vector<PresheafOf<V>> n,
                                 Scope<V> scope) {
  const std::size_t pairs = static_cast<std::size_t>(p.size()) * p.size();
  if (targets.size() != pairs || n.size() != pairs)
    throw InputError("extension family does not cover every pair of objects");
  ExtensionSetup<V> s{&p, std::move(targets), std::move(psi), std::move(n),
                      std::move(scope), {}, std::nullopt, {}};
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y) {
      const auto expected = prod(op(p.hom(x, y)), s.target(x, y));
      if (s.N(x, y).base().num_objects() != expected->num_objects())
        throw InputError("N" + detail::pair_name(x, y) + " has the wrong domain");
      for (const auto& c : s.scope.at(x, y))
        if (!s.psi.contains(x, y, c))
          throw InputError("scope object outside C" + detail::pair_name(x, y));
    }
  s.density = ext_density(s);
  return s;
}

/// N = Yoneda, C = B.
template <class V>
ExtensionSetup<V> yoneda_extension(const Probicategory<V>& p, Scope<V> scope) {
  std::vector<typename V::CatP> targets;
  std::vector<PresheafOf<V>> n;
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y) {
      targets.push_back(p.hom(x, y));
      n.push_back(yoneda_embed(p.hom(x, y)));
    }
  return make_extension(p, std::move(targets), identity_reflector<V>(),
                        std::move(n), std::move(scope));
}

/// N = Yoneda followed by the Σ-reflection; C the Σ-local presheaves. The
/// scope of C is the local part of `base_scope`.
template <class V>
ExtensionSetup<V> localisation_extension(const Probicategory<V>& p,
                                         const SigmaSet& sigma,
                                         Scope<V> base_scope,
                                         int max_iter = kDefaultMaxIter) {
  Reflector<V> psi = sigma_reflector<V>(sigma, max_iter);
  std::vector<typename V::CatP> targets;
  std::vector<PresheafOf<V>> n;
  Scope<V> local{p.size(), {}};
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y) {
      const auto& a = p.hom(x, y);
      targets.push_back(a);
      n.push_back(detail::reflect_rows(psi, x, y, yoneda_embed(a), op(a), a).value);
      std::vector<PresheafOf<V>> cells;
      for (const auto& f : base_scope.at(x, y))
        if (psi.contains(x, y, f)) cells.push_back(f);
      local.cells.push_back(std::move(cells));
    }
  ExtensionSetup<V> s = make_extension(p, std::move(targets), std::move(psi),
                                       std::move(n), std::move(local));
  s.sigma = sigma;
  s.base_scope = std::move(base_scope);
  return s;
}

namespace detail {

/// hom(Q, C) → hom(N A′, H(A, C)) (or K) in the set backend: every φ is
/// sent to the coprojection at A′ followed by the unit of ψ. The comparison
/// is invertible iff it is injective and both sides have the same size.
inline Validation hk_comparison(const ExtensionSetup<SetV>& s, HK which, int x,
                                int y, int z, const SetPresheaf& c,
                                std::size_t& count) {
  const Probicategory<SetV>& p = *s.a;
  const bool h = which == HK::H;
  const CatPtr& param = h ? p.hom(x, y) : p.hom(y, z);
  const CatPtr& index = h ? p.hom(y, z) : p.hom(x, y);
  const int u = h ? y : x, v = h ? z : y;
  const CatPtr& e = s.target(u, v);
  const SetPresheaf w = ext_HK_weight(s, which, x, y, z, c);
  const SetColimit colim = weighted_colimit(w, s.N(u, v), *param, *index,
                                            prod(param, e));
  const Rows<SetV> rows = reflect_rows(s.psi, u, v, colim.value, param, e);
  const int ne = e->num_objects(), ni = index->num_objects();
  for (int a = 0; a < param->num_objects(); ++a)
    for (int a2 = 0; a2 < ni; ++a2) {
      ++count;
      const SetPresheaf na2 = s.N_at(u, v, a2);
      const Reflection<SetV>& row = rows.rows[a];
      const int homs = w.size(a * ni + a2);
      std::map<Components, int> seen;
      for (int phi = 0; phi < homs; ++phi) {
        Components comp(ne);
        for (int j = 0; j < ne; ++j)
          for (int d = 0; d < na2.size(j); ++d)
            comp[j].push_back(row.unit[j][colim.injection(a * ne + j, a2, phi, d)]);
        seen.emplace(std::move(comp), phi);
      }
      const std::size_t target = natural_transformations(na2, row.value).size();
      if (seen.size() != static_cast<std::size_t>(homs) ||
          target != static_cast<std::size_t>(homs))
        return Validation::fail(
            h ? "H" : "K",
            std::string("comparison C(Q, C) → C(N, ") + (h ? "H" : "K") +
                ") is not invertible",
            {{"A", a}, {"A'", a2}, {"hom(Q,C)", homs},
             {"image", seen.size()}, {"target", target}});
    }
  return Validation::pass();
}

inline Validation hk_comparison(const ExtensionSetup<QuantaleV>& s, HK which,
                                int x, int y, int z, const VPresheaf& c,
                                std::size_t& count) {
  const Probicategory<QuantaleV>& p = *s.a;
  const bool h = which == HK::H;
  const int np = (h ? p.hom(x, y) : p.hom(y, z))->num_objects();
  const int ni = (h ? p.hom(y, z) : p.hom(x, y))->num_objects();
  const int u = h ? y : x, v = h ? z : y;
  const VPresheaf w = ext_HK_weight(s, which, x, y, z, c);
  const Rows<QuantaleV> rows = ext_HK_all(s, which, x, y, z, c);
  for (int a = 0; a < np; ++a)
    for (int a2 = 0; a2 < ni; ++a2) {
      ++count;
      const VObject lhs = VObject::of_element(w[a * ni + a2]);
      const VObject rhs = presheaf_hom(s.N_at(u, v, a2), rows.rows[a].value);
      if (!(lhs == rhs))
        return Validation::fail(
            h ? "H" : "K",
            std::string("comparison C(Q, C) → C(N, ") + (h ? "H" : "K") +
                ") is not invertible",
            {{"A", a}, {"A'", a2}, {"hom(Q,C)", lhs.to_json()},
             {"target", rhs.to_json()}});
    }
  return Validation::pass();
}

}  // namespace detail

/// The two induced comparisons C_xz(Q(A′, A), C) → C_yz(N A′, H(A, C)) and
/// C_xz(Q(A, A′), C) → C_xy(N A′, K(A, C)) for all 1-cells A, A′ and all C
/// of the scope of C_xz.
template <class V>
Report ext_iso_check(const ExtensionSetup<V>& s) {
  Report report;
  const int n = s.size();
  for (HK which : {HK::H, HK::K})
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          Validation v = Validation::pass();
          std::size_t count = 0;
          const auto& cells = s.scope.at(x, z);
          for (std::size_t i = 0; i < cells.size() && v.ok; ++i) {
            v = detail::hk_comparison(s, which, x, y, z, cells[i], count);
            if (!v.ok) v.witness["C"] = i, v.witness["object"] = cells[i].to_json();
          }
          if (v.ok) v.witness = {{"instances", count}};
          report.add(std::string(which == HK::H ? "iso_H" : "iso_K") +
                         detail::triple_name(x, y, z),
                     v);
        }
  return report;
}

// ---------------------------------------------------------------------------
// The extended structure.

/// (∘, I, /, \) on C assembled from the formulas; the setup must outlive it.
template <class V>
Structure<V> extension_structure(const ExtensionSetup<V>& s) {
  using Pr = PresheafOf<V>;
  const ExtensionSetup<V>* sp = &s;
  Structure<V> t;
  t.objects = s.size();
  t.compose = [sp](int x, int y, int z, const Pr& f, const Pr& g) {
    return ext_compose(*sp, x, y, z, f, g);
  };
  t.identity = [sp](int x) { return ext_identity(*sp, x); };
  t.right_residual = [sp](int x, int y, int z, const Pr& h, const Pr& g) {
    return ext_residual(*sp, ResidualSide::right, x, y, z, h, g);
  };
  t.left_residual = [sp](int x, int y, int z, const Pr& f, const Pr& h) {
    return ext_residual(*sp, ResidualSide::left, x, y, z, f, h);
  };
  return t;
}

template <class V>
struct Extension {
  Report report;
  std::optional<Structure<V>> structure;
};

/// Density, the isomorphism hypotheses, biclosedness on the scope and the
/// restriction N A ∘ N A′ ≅ Q(A, A′). Nothing is emitted unless the
/// hypotheses hold.
template <class V>
Extension<V> extend_structure(const ExtensionSetup<V>& s,
                              bool require_density = true) {
  Extension<V> out;
  if (require_density) {
    out.report.merge(s.density);
    if (!s.density.passed()) return out;
  }
  out.report.merge(ext_iso_check(s));
  if (!out.report.passed()) return out;
  Structure<V> t = extension_structure(s);
  out.report.merge(biclosed_validate(t, s.scope));
  const Probicategory<V>& p = *s.a;
  const int n = s.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        Validation v = Validation::pass();
        const auto q = ext_Q_all(s, x, y, z);
        const int n_yz = p.hom(y, z)->num_objects();
        const int n_xy = p.hom(x, y)->num_objects();
        for (int a = 0; a < n_yz && v.ok; ++a)
          for (int a2 = 0; a2 < n_xy && v.ok; ++a2) {
            const auto lhs = t.compose(x, y, z, s.N_at(y, z, a), s.N_at(x, y, a2));
            const auto& rhs = q.rows[a * n_xy + a2].value;
            if (!isomorphic(lhs, rhs))
              v = Validation::fail("restriction", "N A ∘ N A′ is not Q(A, A′)",
                                   {{"A", a},
                                    {"A'", a2},
                                    {"composite", lhs.to_json()},
                                    {"Q", rhs.to_json()}});
          }
        if (v.ok) v.witness = {{"pairs", n_yz * n_xy}};
        out.report.add("restriction" + detail::triple_name(x, y, z), v);
      }
  if (out.report.passed()) out.structure = std::move(t);
  return out;
}

enum class OracleMode { yoneda, localisation };

namespace detail {

template <class V>
Validation compare_cells(const PresheafOf<V>& ours, const PresheafOf<V>& theirs,
                         const json& where) {
  if (auto w = isomorphic(ours, theirs)) return Validation::pass(w->to_json());
  json detail = where;
  detail["extension"] = ours.to_json();
  detail["oracle"] = theirs.to_json();
  return Validation::fail("oracle", "extension and oracle disagree", detail);
}

}  // namespace detail

/// Natural isomorphisms between the extended structure and convolution
/// (yoneda) or the localised structure (localisation), componentwise over the
/// scope: ∘, I, / and \.
template <class V>
Report compare_with_oracle(const ExtensionSetup<V>& s, OracleMode mode) {
  using Pr = PresheafOf<V>;
  Report report;
  const Probicategory<V>& p = *s.a;
  std::optional<Localisation<V>> loc;
  Structure<V> oracle;
  if (mode == OracleMode::yoneda) {
    oracle = convolution(p);
  } else {
    if (!s.sigma) throw InputError("localisation oracle needs a Σ-setup");
    loc = localise_probicat(p, *s.sigma, s.base_scope);
    if (!loc->structure) {
      report.add("oracle", Validation::fail("oracle", "localisation has no structure",
                                            loc->report.to_json()));
      return report;
    }
    oracle = *loc->structure;
  }
  const Structure<V> ours = extension_structure(s);
  const int n = s.size();
  auto run = [&](const std::string& name, const std::vector<Pr>& first,
                 const std::vector<Pr>& second, auto&& ext, auto&& orc) {
    Validation v = Validation::pass();
    std::size_t count = 0;
    json witnesses = json::array();
    for (std::size_t i = 0; i < first.size() && v.ok; ++i)
      for (std::size_t j = 0; j < second.size() && v.ok; ++j) {
        ++count;
        v = detail::compare_cells<V>(ext(first[i], second[j]),
                                     orc(first[i], second[j]),
                                     {{"first", i}, {"second", j}});
        if (v.ok) witnesses.push_back(v.witness);
      }
    if (v.ok) v.witness = {{"pairs", count}, {"witnesses", witnesses}};
    report.add(name, v);
  };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const std::string t = detail::triple_name(x, y, z);
        run("compose" + t, s.scope.at(y, z), s.scope.at(x, y),
            [&](const Pr& f, const Pr& g) { return ours.compose(x, y, z, f, g); },
            [&](const Pr& f, const Pr& g) { return oracle.compose(x, y, z, f, g); });
        run("right_residual" + t, s.scope.at(x, z), s.scope.at(x, y),
            [&](const Pr& h, const Pr& g) { return ours.right_residual(x, y, z, h, g); },
            [&](const Pr& h, const Pr& g) { return oracle.right_residual(x, y, z, h, g); });
        run("left_residual" + t, s.scope.at(y, z), s.scope.at(x, z),
            [&](const Pr& f, const Pr& h) { return ours.left_residual(x, y, z, f, h); },
            [&](const Pr& f, const Pr& h) { return oracle.left_residual(x, y, z, f, h); });
      }
  for (int x = 0; x < n; ++x)
    report.add("identity[" + std::to_string(x) + "]",
               detail::compare_cells<V>(ours.identity(x), oracle.identity(x),
                                        {{"object", x}}));
  return report;
}

}  // namespace probicat
