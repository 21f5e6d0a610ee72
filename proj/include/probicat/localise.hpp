#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "calculus.hpp"
#include "natural.hpp"
#include "probicat.hpp"
#include "reflect.hpp"

namespace probicat {

/// A 2-cell of a probicategory: a morphism source → target of A_xy. In the
/// quantale backend a 2-cell is a pair with unit ≤ hom(source, target).
struct Sigma {
  int x = 0, y = 0;
  int source = 0, target = 0;
  int morphism = -1;

  json to_json() const {
    json j{{"x", x}, {"y", y}, {"source", source}, {"target", target}};
    if (morphism >= 0) j["morphism"] = morphism;
    return j;
  }
};
using SigmaSet = std::vector<Sigma>;

inline Sigma make_sigma(const Probicategory<SetV>& p, int x, int y,
                        int morphism) {
  const FinCategory& a = *p.hom(x, y);
  if (morphism < 0 || morphism >= a.num_morphisms())
    throw InputError("2-cell is not a morphism of A_" + p.objects()[x] +
                     p.objects()[y]);
  return {x, y, a.source(morphism), a.target(morphism), morphism};
}

inline Sigma make_sigma(const Probicategory<QuantaleV>& p, int x, int y,
                        int source, int target) {
  const VCategory& a = *p.hom(x, y);
  if (source < 0 || target < 0 || source >= a.num_objects() ||
      target >= a.num_objects() || !a.has_arrow(source, target))
    throw InputError("2-cell is not an arrow of A_" + p.objects()[x] +
                     p.objects()[y]);
  return {x, y, source, target, -1};
}

/// F(σ) invertible for every σ of Σ on the hom family (x, y).
inline Validation is_local(const SigmaSet& sigma, int x, int y,
                           const SetPresheaf& f) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Sigma& s = sigma[i];
    if (s.x != x || s.y != y) continue;
    const auto& m = f.map(s.morphism);
    std::vector<char> hit(f.size(s.target), 0);
    bool bijective = f.size(s.source) == f.size(s.target);
    for (int v : m) {
      if (hit[v]) bijective = false;
      hit[v] = 1;
    }
    if (!bijective)
      return Validation::fail("local", "F(σ) is not a bijection",
                              {{"sigma", i}, {"morphism", s.morphism}});
  }
  return Validation::pass();
}

inline Validation is_local(const SigmaSet& sigma, int x, int y,
                           const VPresheaf& f) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Sigma& s = sigma[i];
    if (s.x != x || s.y != y) continue;
    if (f[s.source] != f[s.target])
      return Validation::fail("local", "F(σ) is a strict inequality",
                              {{"sigma", i},
                               {"source", s.source},
                               {"target", s.target}});
  }
  return Validation::pass();
}

namespace detail {

// Mutable presheaf used by the fixed-point iteration.
struct Work {
  CatPtr base;
  std::vector<int> sizes;
  std::vector<std::vector<int>> act;
  int total() const {
    int t = 0;
    for (int s : sizes) t += s;
    return t;
  }
};

// Quotient by the least congruence identifying the fibres of F(σ).
inline Components quotient_step(Work& w, int sigma) {
  const FinCategory& c = *w.base;
  const int n = c.num_objects();
  std::vector<int> offset(n + 1, 0);
  for (int x = 0; x < n; ++x) offset[x + 1] = offset[x] + w.sizes[x];
  UnionFind uf(offset[n]);
  const int a = c.source(sigma);
  {
    std::vector<int> first(w.sizes[c.target(sigma)], -1);
    for (int e = 0; e < w.sizes[a]; ++e) {
      const int t = w.act[sigma][e];
      if (first[t] < 0)
        first[t] = e;
      else
        uf.unite(offset[a] + first[t], offset[a] + e);
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int f : c.generators()) {
      const int s = c.source(f), t = c.target(f);
      std::vector<int> image(offset[n], -1);
      for (int e = 0; e < w.sizes[s]; ++e) {
        const int root = uf.find(offset[s] + e);
        const int img = offset[t] + w.act[f][e];
        if (image[root] < 0) {
          image[root] = img;
        } else if (uf.find(image[root]) != uf.find(img)) {
          uf.unite(image[root], img);
          changed = true;
        }
      }
    }
  }
  Components eta(n);
  std::vector<int> sizes(n, 0);
  std::vector<std::vector<int>> reps(n);
  for (int x = 0; x < n; ++x) {
    std::vector<int> class_of(w.sizes[x], -1);
    for (int e = 0; e < w.sizes[x]; ++e) {
      const int root = uf.find(offset[x] + e) - offset[x];
      if (class_of[root] < 0) {
        class_of[root] = sizes[x]++;
        reps[x].push_back(e);
      }
      eta[x].push_back(class_of[root]);
    }
  }
  std::vector<std::vector<int>> act(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    const int s = c.source(f), t = c.target(f);
    for (int e : reps[s]) act[f].push_back(eta[t][w.act[f][e]]);
  }
  w.sizes = std::move(sizes);
  w.act = std::move(act);
  return eta;
}

// Pushout of F along copies of C(σ, −): C(b, −) → C(a, −), one for each
// element of F(b) missing from the image of F(σ).
inline Components adjoin_step(Work& w, int sigma) {
  const FinCategory& c = *w.base;
  const int n = c.num_objects(), m = c.num_morphisms();
  const int a = c.source(sigma), b = c.target(sigma);
  std::vector<char> hit(w.sizes[b], 0);
  for (int v : w.act[sigma]) hit[v] = 1;
  std::vector<int> missing;
  for (int t = 0; t < w.sizes[b]; ++t)
    if (!hit[t]) missing.push_back(t);
  const int k = static_cast<int>(missing.size());
  // Per object z: F(z) first, then k blocks of C(a, z).
  Components eta(n);
  std::vector<std::vector<int>> cls(n);  // position → class
  std::vector<std::vector<std::pair<int, int>>> rep(n);  // class → (block, item)
  std::vector<int> sizes(n, 0);
  for (int z = 0; z < n; ++z) {
    const auto& haz = c.hom(a, z);
    const int fz = w.sizes[z];
    const int width = static_cast<int>(haz.size());
    UnionFind uf(fz + k * width);
    for (int i = 0; i < k; ++i)
      for (int h : c.hom(b, z)) {
        const int hs = c.compose(h, sigma);
        const int pos = fz + i * width + detail::hom_index(c, a, z, hs);
        uf.unite(w.act[h][missing[i]], pos);
      }
    cls[z].assign(fz + k * width, -1);
    std::vector<int> class_of_root(fz + k * width, -1);
    for (int pos = 0; pos < fz + k * width; ++pos) {
      const int root = uf.find(pos);
      if (class_of_root[root] < 0) {
        class_of_root[root] = sizes[z]++;
        if (pos < fz)
          rep[z].emplace_back(-1, pos);
        else
          rep[z].emplace_back((pos - fz) / width, haz[(pos - fz) % width]);
      }
      cls[z][pos] = class_of_root[root];
    }
    for (int e = 0; e < fz; ++e) eta[z].push_back(cls[z][e]);
  }
  std::vector<std::vector<int>> act(m);
  for (int f = 0; f < m; ++f) {
    const int s = c.source(f), t = c.target(f);
    const int ft = w.sizes[t];
    const int width_t = static_cast<int>(c.hom(a, t).size());
    for (const auto& [block, item] : rep[s]) {
      if (block < 0) {
        act[f].push_back(cls[t][w.act[f][item]]);
      } else {
        const int moved = c.compose(f, item);
        act[f].push_back(
            cls[t][ft + block * width_t + detail::hom_index(c, a, t, moved)]);
      }
    }
  }
  w.sizes = std::move(sizes);
  w.act = std::move(act);
  return eta;
}

inline bool injective_at(const Work& w, int sigma, int target_size) {
  std::vector<char> hit(target_size, 0);
  for (int v : w.act[sigma]) {
    if (hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

inline bool surjective_at(const Work& w, int sigma, int target_size) {
  std::vector<char> hit(target_size, 0);
  for (int v : w.act[sigma]) hit[v] = 1;
  return std::find(hit.begin(), hit.end(), 0) == hit.end();
}

}  // namespace detail

inline constexpr int kDefaultMaxIter = 64;

/// The reflection of F onto Σ-local presheaves by the small-object iteration:
/// each sweep visits Σ in id order, first quotienting by the congruence that
/// makes F(σ) injective, then freely adjoining preimages. Exceeding
/// `max_iter` sweeps raises DivergenceError.
inline Reflection<SetV> localise_reflect(const SigmaSet& sigma, int x, int y,
                                         const SetPresheaf& f,
                                         int max_iter = kDefaultMaxIter,
                                         int max_elements = 100000) {
  detail::Work w{f.base_ptr(), f.sizes(), f.action()};
  Components eta = identity_components(f);
  std::vector<int> cells;
  for (const Sigma& s : sigma)
    if (s.x == x && s.y == y) cells.push_back(s.morphism);
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  const FinCategory& c = *w.base;
  auto local = [&] {
    for (int s : cells) {
      if (w.sizes[c.source(s)] != w.sizes[c.target(s)]) return false;
      if (!detail::injective_at(w, s, w.sizes[c.target(s)])) return false;
    }
    return true;
  };
  int sweeps = 0;
  while (!local()) {
    if (sweeps >= max_iter)
      throw DivergenceError(sweeps, "Σ-reflection did not converge; current "
                                    "sizes " + json(w.sizes).dump());
    ++sweeps;
    for (int s : cells) {
      if (!detail::injective_at(w, s, w.sizes[c.target(s)]))
        eta = compose_components(detail::quotient_step(w, s), eta);
      if (!detail::surjective_at(w, s, w.sizes[c.target(s)]))
        eta = compose_components(detail::adjoin_step(w, s), eta);
      if (w.total() > max_elements)
        throw DivergenceError(sweeps, "Σ-reflection exceeded " +
                                          std::to_string(max_elements) +
                                          " elements");
    }
  }
  return {SetPresheaf(w.base, std::move(w.sizes), std::move(w.act)),
          std::move(eta), sweeps};
}

/// Quantale backend: the least Σ-local presheaf above F, by iterating
/// "equalise across σ, then close under the hom action" to a fixed point.
inline Reflection<QuantaleV> localise_reflect(const SigmaSet& sigma, int x,
                                              int y, const VPresheaf& f,
                                              int max_iter = kDefaultMaxIter) {
  const VCategory& c = f.base();
  const Quantale& q = f.quantale();
  const int n = c.num_objects();
  std::vector<int> v = f.values();
  // A strictly increasing chain in the product lattice has length at most
  // height × objects, which bounds the rounds independently of max_iter.
  (void)max_iter;
  int rounds = 0;
  for (bool changed = true; changed;) {
    changed = false;
    ++rounds;
    for (const Sigma& s : sigma) {
      if (s.x != x || s.y != y) continue;
      const int j = q.join(v[s.source], v[s.target]);
      if (v[s.source] != j || v[s.target] != j) changed = true;
      v[s.source] = v[s.target] = j;
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const int u = q.join(v[b], q.tensor(c.hom(a, b), v[a]));
        if (u != v[b]) {
          v[b] = u;
          changed = true;
        }
      }
  }
  return {VPresheaf(f.base_ptr(), std::move(v)), {}, rounds};
}

/// The reflector onto Σ-local presheaves.
template <class V>
Reflector<V> sigma_reflector(const SigmaSet& sigma, int max_iter = kDefaultMaxIter) {
  using P = typename V::Presheaf;
  return Reflector<V>(
      [sigma](int x, int y, const P& f) { return is_local(sigma, x, y, f).ok; },
      [sigma, max_iter](int x, int y, const P& f) {
        return localise_reflect(sigma, x, y, f, max_iter);
      });
}

/// Outcome of localising a probicategory: the reflection setup, which of the
/// six conditions held, and the transferred structure when one did.
template <class V>
struct Localisation {
  ReflectionSetup<V> setup;
  Report conditions;
  Report report;
  int condition = 0;  // first verified condition, 0 if none
  std::optional<Structure<V>> structure;
};

/// Builds the Σ-local reflection setup over `scope`, checks all six
/// conditions, and on the first verified one transfers the structure and
/// certifies strength and biclosedness on the local cells of the scope.
template <class V>
Localisation<V> localise_probicat(const Probicategory<V>& p,
                                  const SigmaSet& sigma, Scope<V> scope,
                                  int max_iter = kDefaultMaxIter) {
  for (const Sigma& s : sigma)
    if (s.x < 0 || s.y < 0 || s.x >= p.size() || s.y >= p.size())
      throw InputError("2-cell indexed outside the probicategory");
  Localisation<V> out{make_setup(p, sigma_reflector<V>(sigma, max_iter),
                                 std::move(scope)),
                      {}, {}, 0, std::nullopt};
  out.report.merge(check_reflector(out.setup));
  for (int k = 1; k <= 6; ++k) {
    const Report r = reflection_condition(out.setup, k);
    out.conditions.merge(r);
    if (r.passed() && out.condition == 0) out.condition = k;
  }
  if (out.condition == 0) {
    out.report.add("compatible",
                   Validation::fail("compatible",
                                    "localisation not compatible: no condition "
                                    "pair verified in scope",
                                    out.conditions.first_failure()->result.witness));
    return out;
  }
  out.report.add("compatible",
                 Validation::pass(json{{"condition", out.condition}}));
  Structure<V> t = transfer_structure(out.setup);
  out.report.merge(verify_strong(out.setup, t));
  try {
    out.report.merge(biclosed_validate(t, out.setup.local), "transferred:");
  } catch (const Error& e) {
    out.report.add("transferred", Validation::fail("transfer", e.what()));
  }
  out.structure = std::move(t);
  return out;
}

}  // namespace probicat
