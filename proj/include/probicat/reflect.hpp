#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "calculus.hpp"
#include "natural.hpp"
#include "probicat.hpp"

namespace probicat {

/// A reflection ψF with its unit η: F → ψF (empty in the quantale backend,
/// where η is the inequality F ≤ ψF).
template <class V>
struct Reflection {
  PresheafOf<V> value;
  Components unit;
  int sweeps = 0;
};

/// ψβ: ψF → ψG, the unique map with ψβ ∘ η_F = η_G ∘ β.
inline Components psi_map(const Reflection<SetV>& rf, const Reflection<SetV>& rg,
                          const Components& beta) {
  const int n = static_cast<int>(rf.unit.size());
  Components partial(n);
  for (int x = 0; x < n; ++x) partial[x].assign(rf.value.size(x), -1);
  for (int x = 0; x < n; ++x)
    for (std::size_t e = 0; e < beta[x].size(); ++e)
      partial[x][rf.unit[x][e]] = rg.unit[x][beta[x][e]];
  auto done = complete_natural(rf.value, rg.value, partial);
  if (!done) throw Error("ψ on a map: no extension along the unit");
  return *done;
}

/// A family of full reflective subcategories C_xy ⊂ [A_xy, V]: membership
/// and the reflection with its unit. Reflections are memoised.
template <class V>
class Reflector {
 public:
  using Pr = PresheafOf<V>;
  using Contains = std::function<bool(int, int, const Pr&)>;
  using Reflect = std::function<Reflection<V>(int, int, const Pr&)>;

  Reflector(Contains contains, Reflect reflect)
      : contains_(std::move(contains)),
        reflect_(std::move(reflect)),
        cache_(std::make_shared<Cache>()) {}

  bool contains(int x, int y, const Pr& f) const { return contains_(x, y, f); }

  const Reflection<V>& reflect(int x, int y, const Pr& f) const {
    auto key = std::make_pair(std::make_pair(x, y), f);
    auto it = cache_->find(key);
    if (it == cache_->end()) it = cache_->emplace(key, reflect_(x, y, f)).first;
    return it->second;
  }

 private:
  using Cache = std::map<std::pair<std::pair<int, int>, Pr>, Reflection<V>>;
  Contains contains_;
  Reflect reflect_;
  std::shared_ptr<Cache> cache_;
};

/// C = B, ψ = 1, η = 1.
template <class V>
Reflector<V> identity_reflector() {
  using Pr = PresheafOf<V>;
  return Reflector<V>([](int, int, const Pr&) { return true; },
                      [](int, int, const Pr& f) {
                        Reflection<V> r{f, {}, 0};
                        if constexpr (std::is_same_v<V, SetV>)
                          r.unit = identity_components(f);
                        return r;
                      });
}

/// A quantale reflector from a closure operator on value vectors; the local
/// presheaves are its fixed points. The operator is trusted to be a closure
/// and check_reflector verifies it on the scope.
inline Reflector<QuantaleV> closure_reflector(
    std::function<std::vector<int>(int, int, const VPresheaf&)> close) {
  return Reflector<QuantaleV>(
      [close](int x, int y, const VPresheaf& f) {
        return close(x, y, f) == f.values();
      },
      [close](int x, int y, const VPresheaf& f) {
        return Reflection<QuantaleV>{VPresheaf(f.base_ptr(), close(x, y, f)),
                                     {},
                                     1};
      });
}

/// B with a reflective family C, the scope of 1-cells of B and the classes
/// A (generators, in B) and D (cogenerators, in C).
template <class V>
struct ReflectionSetup {
  const Probicategory<V>* b = nullptr;
  Reflector<V> psi;
  Scope<V> scope;
  Scope<V> local;
  Scope<V> gens;
  Scope<V> cogens;
};

/// Representable presheaves A_xy(a, −) for every a, per pair (x, y).
template <class V>
Scope<V> representables(const Probicategory<V>& p) {
  Scope<V> s{p.size(), {}};
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y) {
      std::vector<PresheafOf<V>> cells;
      for (int a = 0; a < p.hom(x, y)->num_objects(); ++a)
        cells.push_back(representable(p.hom(x, y), a));
      s.cells.push_back(std::move(cells));
    }
  return s;
}

/// The setup with C's scope the local members of `scope`, generators the
/// representables and cogenerators all local members of the scope.
template <class V>
ReflectionSetup<V> make_setup(const Probicategory<V>& p, Reflector<V> psi,
                              Scope<V> scope) {
  ReflectionSetup<V> s{&p, std::move(psi), std::move(scope), {}, {}, {}};
  s.local = Scope<V>{p.size(), {}};
  for (int x = 0; x < p.size(); ++x)
    for (int y = 0; y < p.size(); ++y) {
      std::vector<PresheafOf<V>> cells;
      for (const auto& f : s.scope.at(x, y))
        if (s.psi.contains(x, y, f)) cells.push_back(f);
      s.local.cells.push_back(std::move(cells));
    }
  s.gens = representables(p);
  s.cogens = s.local;
  return s;
}

// ---------------------------------------------------------------------------
// Maps in B.

namespace detail {

template <class V>
Map<V> unit_map(const ReflectionSetup<V>& s, int x, int y,
                const PresheafOf<V>& f) {
  const Reflection<V>& r = s.psi.reflect(x, y, f);
  return Map<V>{f, r.value, r.unit};
}

/// ψ applied to a map β: S → T of B_xy.
template <class V>
Map<V> psi_of(const ReflectionSetup<V>& s, int x, int y, const Map<V>& beta) {
  const Reflection<V>& rs = s.psi.reflect(x, y, beta.source);
  const Reflection<V>& rt = s.psi.reflect(x, y, beta.target);
  if constexpr (std::is_same_v<V, SetV>) {
    const Components done = psi_map(rs, rt, beta.components);
    return Map<V>{rs.value, rt.value, done};
  } else {
    return Map<V>{rs.value, rt.value, {}};
  }
}

/// α ∘ β: F ∘ G → F′ ∘ G′.
template <class V>
Map<V> compose_map(const Probicategory<V>& p, int x, int y, int z,
                   const Map<V>& a, const Map<V>& b) {
  if constexpr (std::is_same_v<V, SetV>) {
    return Map<V>{conv_compose(p, x, y, z, a.source, b.source),
                  conv_compose(p, x, y, z, a.target, b.target),
                  conv_compose_map(p, x, y, z, a.source, b.source, a.target,
                                   b.target, a.components, b.components)};
  } else {
    return Map<V>{conv_compose(p, x, y, z, a.source, b.source),
                  conv_compose(p, x, y, z, a.target, b.target),
                  {}};
  }
}

template <class V>
Map<V> identity_map(const PresheafOf<V>& f) {
  if constexpr (std::is_same_v<V, SetV>)
    return Map<V>{f, f, identity_components(f)};
  else
    return Map<V>{f, f, {}};
}

/// 1/β: C/G′ → C/G for β: G → G′ (C on A_xz, G on A_xy).
template <class V>
Map<V> right_residual_pre(const Probicategory<V>& p, int x, int y, int z,
                          const PresheafOf<V>& c, const Map<V>& beta) {
  if constexpr (std::is_same_v<V, SetV>) {
    const SetResidual from = right_residual_data(p, x, y, z, c, beta.target);
    const SetResidual to = right_residual_data(p, x, y, z, c, beta.source);
    return Map<V>{from.value(), to.value(),
                  right_residual_map(from, to, beta.components,
                                     p.hom(y, z)->num_objects(),
                                     p.hom(x, z)->num_objects())};
  } else {
    return Map<V>{right_residual(p, x, y, z, c, beta.target),
                  right_residual(p, x, y, z, c, beta.source),
                  {}};
  }
}

/// α\1: F′\C → F\C for α: F → F′ (F on A_yz, C on A_xz).
template <class V>
Map<V> left_residual_pre(const Probicategory<V>& p, int x, int y, int z,
                         const Map<V>& alpha, const PresheafOf<V>& c) {
  if constexpr (std::is_same_v<V, SetV>) {
    const SetResidual from = left_residual_data(p, x, y, z, alpha.target, c);
    const SetResidual to = left_residual_data(p, x, y, z, alpha.source, c);
    return Map<V>{from.value(), to.value(),
                  left_residual_map(from, to, alpha.components,
                                    p.hom(x, y)->num_objects(),
                                    p.hom(x, z)->num_objects())};
  } else {
    return Map<V>{left_residual(p, x, y, z, alpha.target, c),
                  left_residual(p, x, y, z, alpha.source, c),
                  {}};
  }
}

inline std::string triple_name(int x, int y, int z) {
  return "[" + std::to_string(x) + std::to_string(y) + std::to_string(z) + "]";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Reflector sanity: membership, unit naturality, idempotence, adjunction.

template <class V>
Report check_reflector(const ReflectionSetup<V>& s) {
  Report report;
  const int n = s.b->size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const std::string tag = "[" + std::to_string(x) + std::to_string(y) + "]";
      Validation v = Validation::pass();
      for (std::size_t i = 0; i < s.scope.at(x, y).size() && v.ok; ++i) {
        const auto& f = s.scope.at(x, y)[i];
        const Reflection<V>& r = s.psi.reflect(x, y, f);
        if (!s.psi.contains(x, y, r.value)) {
          v = Validation::fail("reflector", "ψB is not in C", {{"B", i}});
          break;
        }
        if constexpr (std::is_same_v<V, SetV>) {
          const Validation nat = check_natural(f, r.value, r.unit);
          if (!nat.ok) {
            v = Validation::fail("reflector", "η is not natural",
                                 {{"B", i}, {"detail", nat.detail}});
            break;
          }
        } else {
          if (!pointwise_leq(f, r.value)) {
            v = Validation::fail("reflector", "B ≰ ψB", {{"B", i}});
            break;
          }
        }
        for (std::size_t j = 0; j < s.local.at(x, y).size() && v.ok; ++j) {
          const auto& c = s.local.at(x, y)[j];
          if constexpr (std::is_same_v<V, SetV>) {
            // Precomposition with η is a bijection hom(ψB, C) → hom(B, C).
            const auto from = natural_transformations(r.value, c);
            const auto to = natural_transformations(f, c);
            std::map<Components, int> seen;
            for (const auto& phi : from)
              seen[compose_components(phi, r.unit)]++;
            bool bijective = seen.size() == from.size() && from.size() == to.size();
            for (const auto& t : to) bijective = bijective && seen.count(t);
            if (!bijective)
              v = Validation::fail("adjunction",
                                   "precomposition with η is not a bijection "
                                   "hom(ψB, C) → hom(B, C)",
                                   {{"B", i},
                                    {"C", j},
                                    {"hom(ψB,C)", from.size()},
                                    {"hom(B,C)", to.size()}});
          } else {
            if (!(presheaf_hom(r.value, c) == presheaf_hom(f, c)))
              v = Validation::fail("adjunction", "hom(ψB, C) != hom(B, C)",
                                   {{"B", i}, {"C", j}});
          }
        }
      }
      report.add("reflector" + tag, v);
      Validation idem = Validation::pass();
      for (std::size_t j = 0; j < s.local.at(x, y).size(); ++j) {
        const auto& c = s.local.at(x, y)[j];
        if (!is_iso(detail::unit_map(s, x, y, c))) {
          idem = Validation::fail("idempotence", "η_C is not invertible",
                                  {{"C", j}});
          break;
        }
      }
      report.add("idempotence" + tag, idem);
    }
  return report;
}

// ---------------------------------------------------------------------------
// Generators.

enum class GeneratorMode { generating, cogenerating };

/// Jointly iso-reflecting test: every map f of the scope (of B for
/// generators, of C for cogenerators) such that hom(A, f) (resp. hom(f, D))
/// is invertible for all A (resp. D) in the class is itself invertible.
template <class V>
Report check_generators(const ReflectionSetup<V>& s, GeneratorMode mode) {
  Report report;
  const int n = s.b->size();
  const bool gen = mode == GeneratorMode::generating;
  const Scope<V>& cells = gen ? s.scope : s.local;
  const Scope<V>& cls = gen ? s.gens : s.cogens;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Validation v = Validation::pass();
      const auto& list = cells.at(x, y);
      for (std::size_t i = 0; i < list.size() && v.ok; ++i)
        for (std::size_t j = 0; j < list.size() && v.ok; ++j) {
          const auto& f = list[i];
          const auto& g = list[j];
          if constexpr (std::is_same_v<V, SetV>) {
            for (const Components& phi : natural_transformations(f, g)) {
              if (is_bijective(phi, g)) continue;
              bool seen_by_all = true;
              for (const auto& a : cls.at(x, y)) {
                // hom(A, φ) or hom(φ, D) as a map of finite sets.
                const auto src = gen ? natural_transformations(a, f)
                                     : natural_transformations(g, a);
                const auto tgt = gen ? natural_transformations(a, g)
                                     : natural_transformations(f, a);
                std::map<Components, int> image;
                for (const auto& u : src)
                  image[gen ? compose_components(phi, u)
                            : compose_components(u, phi)]++;
                if (image.size() != src.size() || src.size() != tgt.size()) {
                  seen_by_all = false;
                  break;
                }
              }
              if (seen_by_all) {
                v = Validation::fail(
                    gen ? "generating" : "cogenerating",
                    "a non-invertible map is invisible to the class",
                    {{"source", i}, {"target", j}, {"components", phi}});
                break;
              }
            }
          } else {
            if (!pointwise_leq(f, g) || f == g) continue;
            bool seen_by_all = true;
            for (const auto& a : cls.at(x, y)) {
              const VObject u = gen ? presheaf_hom(a, f) : presheaf_hom(g, a);
              const VObject w = gen ? presheaf_hom(a, g) : presheaf_hom(f, a);
              if (!(u == w)) {
                seen_by_all = false;
                break;
              }
            }
            if (seen_by_all)
              v = Validation::fail(gen ? "generating" : "cogenerating",
                                   "a strict inequality is invisible to the "
                                   "class",
                                   {{"source", i}, {"target", j}});
          }
        }
      report.add(std::string(gen ? "generating" : "cogenerating") + "[" +
                     std::to_string(x) + std::to_string(y) + "]",
                 v);
    }
  return report;
}

// ---------------------------------------------------------------------------
// The six conditions.

enum class Side { a, b, both };

namespace detail {

template <class V, class Body>
Validation over_pairs(const std::vector<PresheafOf<V>>& first,
                      const std::vector<PresheafOf<V>>& second,
                      const char* n1, const char* n2, Body body,
                      std::size_t& count) {
  for (std::size_t i = 0; i < first.size(); ++i)
    for (std::size_t j = 0; j < second.size(); ++j) {
      ++count;
      const Map<V> m = body(first[i], second[j]);
      if (!is_iso(m))
        return Validation::fail("condition", "morphism is not invertible",
                                {{n1, i}, {n2, j}, {"map", to_json(m)}});
    }
  return Validation::pass();
}

template <class V>
Validation condition_part(const ReflectionSetup<V>& s, int k, char side,
                          int x, int y, int z) {
  const Probicategory<V>& p = *s.b;
  using Pr = PresheafOf<V>;
  std::size_t count = 0;
  Validation v = Validation::pass();
  auto eta = [&](int a, int b, const Pr& f) { return unit_map(s, a, b, f); };
  auto psi_eta_compose = [&](const Map<V>& left, const Map<V>& right) {
    return psi_of(s, x, z, compose_map(p, x, y, z, left, right));
  };
  switch (k * 2 + (side == 'b')) {
    case 2:  // 1a  η: C/B → ψ(C/B)
      v = over_pairs<V>(s.local.at(x, z), s.scope.at(x, y), "C", "B",
                        [&](const Pr& c, const Pr& b) {
                          return eta(y, z, right_residual(p, x, y, z, c, b));
                        },
                        count);
      break;
    case 3:  // 1b  η: B\C → ψ(B\C)
      v = over_pairs<V>(s.scope.at(y, z), s.local.at(x, z), "B", "C",
                        [&](const Pr& b, const Pr& c) {
                          return eta(x, y, left_residual(p, x, y, z, b, c));
                        },
                        count);
      break;
    case 4:  // 2a  η: D/A → ψ(D/A)
      v = over_pairs<V>(s.cogens.at(x, z), s.gens.at(x, y), "D", "A",
                        [&](const Pr& d, const Pr& a) {
                          return eta(y, z, right_residual(p, x, y, z, d, a));
                        },
                        count);
      break;
    case 5:  // 2b  η: A\D → ψ(A\D)
      v = over_pairs<V>(s.gens.at(y, z), s.cogens.at(x, z), "A", "D",
                        [&](const Pr& a, const Pr& d) {
                          return eta(x, y, left_residual(p, x, y, z, a, d));
                        },
                        count);
      break;
    case 6:  // 3a  η\1: ψB\C → B\C
      v = over_pairs<V>(s.scope.at(y, z), s.local.at(x, z), "B", "C",
                        [&](const Pr& b, const Pr& c) {
                          return left_residual_pre(p, x, y, z, eta(y, z, b), c);
                        },
                        count);
      break;
    case 7:  // 3b  1/η: C/ψB → C/B
      v = over_pairs<V>(s.local.at(x, z), s.scope.at(x, y), "C", "B",
                        [&](const Pr& c, const Pr& b) {
                          return right_residual_pre(p, x, y, z, c, eta(x, y, b));
                        },
                        count);
      break;
    case 8:  // 4a  ψ(η∘1): ψ(B∘B′) → ψ(ψB∘B′)
      v = over_pairs<V>(s.scope.at(y, z), s.scope.at(x, y), "B", "B'",
                        [&](const Pr& b, const Pr& b2) {
                          return psi_eta_compose(eta(y, z, b), identity_map<V>(b2));
                        },
                        count);
      break;
    case 9:  // 4b  ψ(1∘η): ψ(B′∘B) → ψ(B′∘ψB)
      v = over_pairs<V>(s.scope.at(y, z), s.scope.at(x, y), "B'", "B",
                        [&](const Pr& b2, const Pr& b) {
                          return psi_eta_compose(identity_map<V>(b2), eta(x, y, b));
                        },
                        count);
      break;
    case 10:  // 5a  ψ(η∘1): ψ(B∘A) → ψ(ψB∘A)
      v = over_pairs<V>(s.scope.at(y, z), s.gens.at(x, y), "B", "A",
                        [&](const Pr& b, const Pr& a) {
                          return psi_eta_compose(eta(y, z, b), identity_map<V>(a));
                        },
                        count);
      break;
    case 11:  // 5b  ψ(1∘η): ψ(A∘B) → ψ(A∘ψB)
      v = over_pairs<V>(s.gens.at(y, z), s.scope.at(x, y), "A", "B",
                        [&](const Pr& a, const Pr& b) {
                          return psi_eta_compose(identity_map<V>(a), eta(x, y, b));
                        },
                        count);
      break;
    case 12:  // 6  ψ(η∘η): ψ(B∘B′) → ψ(ψB∘ψB′)
      v = over_pairs<V>(s.scope.at(y, z), s.scope.at(x, y), "B", "B'",
                        [&](const Pr& b, const Pr& b2) {
                          return psi_eta_compose(eta(y, z, b), eta(x, y, b2));
                        },
                        count);
      break;
    default:
      throw InputError("reflection condition index out of range");
  }
  if (v.ok) v.witness = {{"instances", count}};
  return v;
}

}  // namespace detail

inline std::string condition_name(int k, char side) {
  return k == 6 ? "6" : std::to_string(k) + side;
}

/// Checks condition k (1..6) on one or both sides over every index triple.
/// Entry names are "<k><side>[xyz]".
template <class V>
Report reflection_condition(const ReflectionSetup<V>& s, int k,
                            Side side = Side::both) {
  if (k < 1 || k > 6) throw InputError("reflection condition must be 1..6");
  if ((k == 2 || k == 5) && s.gens.cells.empty())
    throw InputError("condition needs a generating class");
  if (k == 2 && s.cogens.cells.empty())
    throw InputError("condition needs a cogenerating class");
  std::vector<char> sides;
  if (k == 6)
    sides = {'a'};
  else if (side == Side::a)
    sides = {'a'};
  else if (side == Side::b)
    sides = {'b'};
  else
    sides = {'a', 'b'};
  Report report;
  const int n = s.b->size();
  for (char sd : sides)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z)
          report.add(condition_name(k, sd) + detail::triple_name(x, y, z),
                     detail::condition_part(s, k, sd, x, y, z));
  return report;
}

// ---------------------------------------------------------------------------
// Transfer and strength.

/// The structure on C: C ∘ C′ := ψ(C ∘ C′), I := ψI; residuals computed in B
/// and required to be local (an Error names the offending cells otherwise).
template <class V>
Structure<V> transfer_structure(const ReflectionSetup<V>& s) {
  using Pr = PresheafOf<V>;
  const Probicategory<V>* p = s.b;
  Reflector<V> psi = s.psi;
  Structure<V> t;
  t.objects = p->size();
  t.compose = [p, psi](int x, int y, int z, const Pr& f, const Pr& g) {
    return psi.reflect(x, z, conv_compose(*p, x, y, z, f, g)).value;
  };
  t.identity = [p, psi](int x) {
    return psi.reflect(x, x, conv_identity(*p, x)).value;
  };
  t.right_residual = [p, psi](int x, int y, int z, const Pr& h, const Pr& g) {
    Pr r = right_residual(*p, x, y, z, h, g);
    if (!psi.contains(y, z, r))
      throw Error("transferred right residual is not in C: " +
                  r.to_json().dump());
    return r;
  };
  t.left_residual = [p, psi](int x, int y, int z, const Pr& f, const Pr& h) {
    Pr r = left_residual(*p, x, y, z, f, h);
    if (!psi.contains(x, y, r))
      throw Error("transferred left residual is not in C: " + r.to_json().dump());
    return r;
  };
  return t;
}

/// ψ strong: for all B, B′ in scope the comparison ψ(η∘η) is invertible and
/// the structure's ψB ∘ ψB′ is isomorphic to ψ(ψB ∘ ψB′); likewise I ≅ ψI.
template <class V>
Report verify_strong(const ReflectionSetup<V>& s, const Structure<V>& t) {
  Report report;
  const Probicategory<V>& p = *s.b;
  const int n = p.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        Validation v = Validation::pass();
        std::size_t count = 0;
        for (std::size_t i = 0; i < s.scope.at(y, z).size() && v.ok; ++i)
          for (std::size_t j = 0; j < s.scope.at(x, y).size() && v.ok; ++j) {
            const auto& b = s.scope.at(y, z)[i];
            const auto& b2 = s.scope.at(x, y)[j];
            const Map<V> e1 = detail::unit_map(s, y, z, b);
            const Map<V> e2 = detail::unit_map(s, x, y, b2);
            const Map<V> cmp =
                detail::psi_of(s, x, z, detail::compose_map(p, x, y, z, e1, e2));
            ++count;
            if (!is_iso(cmp)) {
              v = Validation::fail("strong", "ψ(η∘η) is not invertible",
                                   {{"B", i}, {"B'", j}});
              break;
            }
            const auto composite = t.compose(x, y, z, e1.target, e2.target);
            if (!isomorphic(composite, cmp.target))
              v = Validation::fail("strong",
                                   "ψB ∘ ψB′ is not isomorphic to ψ(B ∘ B′)",
                                   {{"B", i},
                                    {"B'", j},
                                    {"ψB∘ψB'", composite.to_json()},
                                    {"ψ(B∘B')", cmp.source.to_json()}});
          }
        if (v.ok) v.witness = {{"pairs", count}};
        report.add("strong" + detail::triple_name(x, y, z), v);
      }
  for (int x = 0; x < n; ++x) {
    const auto psi_i = s.psi.reflect(x, x, conv_identity(p, x)).value;
    const auto ic = t.identity(x);
    auto w = isomorphic(ic, psi_i);
    report.add("strong_identity[" + std::to_string(x) + "]",
               w ? Validation::pass(w->to_json())
                 : Validation::fail("strong", "I_C is not isomorphic to ψI",
                                    {{"I_C", ic.to_json()},
                                     {"ψI", psi_i.to_json()}}));
  }
  return report;
}

/// The scope of C: for each (x, y), the local cells of the setup.
template <class V>
const Scope<V>& local_scope(const ReflectionSetup<V>& s) {
  return s.local;
}

}  // namespace probicat
