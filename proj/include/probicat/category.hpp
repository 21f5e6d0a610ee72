#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "quantale.hpp"

namespace probicat {

struct Morphism {
  int source;
  int target;
  friend bool operator==(const Morphism&, const Morphism&) = default;
};

/// A finite ordinary category with dense tables.
///
/// Morphism ids are 0..M-1; `compose(g, f)` is g∘f for f: x → y, g: y → z and
/// -1 on non-composable pairs. The constructor only checks table shapes;
/// check_category validates the axioms.
class FinCategory {
 public:
  FinCategory(std::vector<std::string> objects, std::vector<Morphism> morphisms,
              std::vector<std::string> morphism_labels,
              std::vector<int> identities, std::vector<int> composition)
      : objects_(std::move(objects)),
        morphisms_(std::move(morphisms)),
        morphism_labels_(std::move(morphism_labels)),
        identities_(std::move(identities)),
        composition_(std::move(composition)) {
    const std::size_t m = morphisms_.size();
    if (identities_.size() != objects_.size())
      throw InputError("identity table does not cover every object");
    if (composition_.size() != m * m)
      throw InputError("composition table is not M×M");
    if (morphism_labels_.empty()) {
      for (std::size_t i = 0; i < m; ++i)
        morphism_labels_.push_back("m" + std::to_string(i));
    } else if (morphism_labels_.size() != m) {
      throw InputError("morphism label count mismatch");
    }
    index_homs();
  }

  int num_objects() const { return static_cast<int>(objects_.size()); }
  int num_morphisms() const { return static_cast<int>(morphisms_.size()); }
  const std::string& object_label(int x) const { return objects_.at(x); }
  const std::vector<std::string>& object_labels() const { return objects_; }
  const std::string& morphism_label(int f) const {
    return morphism_labels_.at(f);
  }
  const std::vector<std::string>& morphism_labels() const {
    return morphism_labels_;
  }
  const Morphism& morphism(int f) const { return morphisms_.at(f); }
  int source(int f) const { return morphisms_[f].source; }
  int target(int f) const { return morphisms_[f].target; }
  int identity(int x) const { return identities_.at(x); }
  bool is_identity(int f) const { return identities_[source(f)] == f; }
  const std::vector<int>& identities() const { return identities_; }
  const std::vector<int>& composition() const { return composition_; }

  /// g∘f, or -1.
  int compose(int g, int f) const {
    return composition_[static_cast<std::size_t>(g) * morphisms_.size() + f];
  }

  /// Morphism ids from x to y in ascending order.
  const std::vector<int>& hom(int x, int y) const {
    return homs_[static_cast<std::size_t>(x) * objects_.size() + y];
  }

  /// Non-identity morphisms whose composites give every morphism: chosen
  /// greedily in id order, skipping those already generated. Cached.
  const std::vector<int>& generators() const {
    if (generators_) return *generators_;
    const std::size_t m = morphisms_.size();
    std::vector<char> closed(m, 0);
    for (int i : identities_)
      if (i >= 0 && static_cast<std::size_t>(i) < m) closed[i] = 1;
    std::vector<int> gens;
    for (std::size_t f = 0; f < m; ++f) {
      if (closed[f]) continue;
      gens.push_back(static_cast<int>(f));
      closed[f] = 1;
      for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t g = 0; g < m; ++g) {
          if (!closed[g]) continue;
          for (int h : gens) {
            const int a = composition_[g * m + h];
            const int b = composition_[h * m + g];
            if (a >= 0 && !closed[a]) closed[a] = 1, grew = true;
            if (b >= 0 && !closed[b]) closed[b] = 1, grew = true;
          }
        }
      }
    }
    generators_ = std::move(gens);
    return *generators_;
  }

  int find_morphism(const std::string& label) const {
    for (int f = 0; f < num_morphisms(); ++f)
      if (morphism_labels_[f] == label) return f;
    return -1;
  }
  int find_object(const std::string& label) const {
    for (int x = 0; x < num_objects(); ++x)
      if (objects_[x] == label) return x;
    return -1;
  }

  friend bool operator==(const FinCategory& a, const FinCategory& b) {
    return a.objects_.size() == b.objects_.size() &&
           a.morphisms_ == b.morphisms_ && a.identities_ == b.identities_ &&
           a.composition_ == b.composition_;
  }

 private:
  void index_homs() {
    const std::size_t n = objects_.size();
    homs_.assign(n * n, {});
    for (std::size_t f = 0; f < morphisms_.size(); ++f) {
      const auto [s, t] = morphisms_[f];
      if (s < 0 || t < 0 || static_cast<std::size_t>(s) >= n ||
          static_cast<std::size_t>(t) >= n)
        continue;  // dangling; reported by check_category
      homs_[s * n + t].push_back(static_cast<int>(f));
    }
  }

  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<std::string> morphism_labels_;
  std::vector<int> identities_;
  std::vector<int> composition_;
  std::vector<std::vector<int>> homs_;
  mutable std::optional<std::vector<int>> generators_;
};

using CatPtr = std::shared_ptr<const FinCategory>;

inline Validation check_category(const FinCategory& c) {
  const int n = c.num_objects();
  const int m = c.num_morphisms();
  for (int f = 0; f < m; ++f) {
    const auto [s, t] = c.morphism(f);
    if (s < 0 || s >= n || t < 0 || t >= n)
      return Validation::fail("dangling", "morphism endpoint is not an object",
                              {{"morphism", f}});
  }
  for (int x = 0; x < n; ++x) {
    const int i = c.identity(x);
    if (i < 0 || i >= m || c.source(i) != x || c.target(i) != x)
      return Validation::fail("dangling", "identity is not an endomorphism",
                              {{"object", x}, {"identity", i}});
  }
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      const int h = c.compose(g, f);
      const bool composable = c.target(f) == c.source(g);
      if (!composable) {
        if (h != -1)
          return Validation::fail("composition",
                                  "non-composable pair has a composite",
                                  {{"g", g}, {"f", f}});
        continue;
      }
      if (h < 0 || h >= m)
        return Validation::fail("dangling", "composite is not a morphism id",
                                {{"g", g}, {"f", f}, {"composite", h}});
      if (c.source(h) != c.source(f) || c.target(h) != c.target(g))
        return Validation::fail("composition", "composite has wrong endpoints",
                                {{"g", g}, {"f", f}, {"composite", h}});
    }
  for (int f = 0; f < m; ++f) {
    if (c.compose(f, c.identity(c.source(f))) != f ||
        c.compose(c.identity(c.target(f)), f) != f)
      return Validation::fail("unit", "identity is not neutral",
                              {{"morphism", f}});
  }
  for (int h = 0; h < m; ++h)
    for (int g = 0; g < m; ++g) {
      if (c.target(g) != c.source(h)) continue;
      const int hg = c.compose(h, g);
      for (int f = 0; f < m; ++f) {
        if (c.target(f) != c.source(g)) continue;
        if (c.compose(hg, f) != c.compose(h, c.compose(g, f)))
          return Validation::fail("associativity", "(h∘g)∘f != h∘(g∘f)",
                                  {{"h", h}, {"g", g}, {"f", f}});
      }
    }
  return Validation::pass();
}

namespace detail {

inline std::vector<std::string> numbered(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace detail

/// Thin poset category on {0..n-1}; `leq` is an n×n reflexive, transitive
/// relation table.
inline FinCategory poset_category(int n, const std::vector<char>& leq,
                                  std::vector<std::string> labels = {}) {
  if (labels.empty()) labels = detail::numbered(n);
  std::vector<Morphism> mor;
  std::vector<std::string> mlabels;
  std::vector<int> id_of(n * n, -1);
  std::vector<int> identities(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (leq[x * n + y]) {
        id_of[x * n + y] = static_cast<int>(mor.size());
        mor.push_back({x, y});
        mlabels.push_back(x == y ? "id_" + labels[x]
                                 : labels[x] + "<=" + labels[y]);
      }
  for (int x = 0; x < n; ++x) identities[x] = id_of[x * n + x];
  const std::size_t m = mor.size();
  std::vector<int> comp(m * m, -1);
  for (std::size_t g = 0; g < m; ++g)
    for (std::size_t f = 0; f < m; ++f)
      if (mor[f].target == mor[g].source)
        comp[g * m + f] = id_of[mor[f].source * n + mor[g].target];
  return FinCategory(std::move(labels), std::move(mor), std::move(mlabels),
                     std::move(identities), std::move(comp));
}

inline FinCategory discrete_category(int n) {
  std::vector<char> leq(n * n, 0);
  for (int x = 0; x < n; ++x) leq[x * n + x] = 1;
  return poset_category(n, leq);
}

inline FinCategory terminal_category() { return discrete_category(1); }

/// The n-chain 0 → 1 → ... → n-1 as a poset.
inline FinCategory chain_category(int n) {
  std::vector<char> leq(n * n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) leq[x * n + y] = 1;
  return poset_category(n, leq);
}

/// The walking arrow 2 = {0 → 1}; the non-identity is labelled "s".
inline FinCategory walking_arrow() {
  return FinCategory({"0", "1"}, {{0, 0}, {0, 1}, {1, 1}},
                     {"id_0", "s", "id_1"}, {0, 2},
                     {0, -1, -1,    // id_0 ∘ -
                      1, -1, -1,    // s ∘ -
                      -1, 1, 2});   // id_1 ∘ -
}

/// Two parallel arrows f, g: 0 → 1.
inline FinCategory parallel_pair() {
  return FinCategory({"0", "1"}, {{0, 0}, {0, 1}, {0, 1}, {1, 1}},
                     {"id_0", "f", "g", "id_1"}, {0, 3},
                     {0, -1, -1, -1,   // id_0 ∘ -
                      1, -1, -1, -1,   // f ∘ -
                      2, -1, -1, -1,   // g ∘ -
                      -1, 1, 2, 3});   // id_1 ∘ -
}

/// One-object category of a finite monoid with multiplication table
/// `table[a * n + b] = a·b`; composition g∘f is g·f.
inline FinCategory delooping(int n, const std::vector<int>& table, int unit,
                             std::vector<std::string> labels = {}) {
  if (table.size() != static_cast<std::size_t>(n * n))
    throw InputError("monoid table is not n×n");
  if (labels.empty()) labels = detail::numbered(n);
  std::vector<Morphism> mor(n, Morphism{0, 0});
  return FinCategory({"*"}, std::move(mor), std::move(labels), {unit}, table);
}

inline FinCategory opposite(const FinCategory& c) {
  const int m = c.num_morphisms();
  std::vector<Morphism> mor;
  for (int f = 0; f < m; ++f) mor.push_back({c.target(f), c.source(f)});
  std::vector<int> comp(static_cast<std::size_t>(m) * m, -1);
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) comp[g * m + f] = c.compose(f, g);
  return FinCategory(c.object_labels(), std::move(mor), c.morphism_labels(),
                     c.identities(), std::move(comp));
}

/// Product category. Object (i, j) has id i·n₂ + j and morphism (f, g) has id
/// f·m₂ + g, so products associate on ids and op(A × B) = op A × op B.
inline FinCategory product(const FinCategory& a, const FinCategory& b) {
  const int n2 = b.num_objects();
  const int m1 = a.num_morphisms(), m2 = b.num_morphisms();
  std::vector<std::string> objects;
  for (int i = 0; i < a.num_objects(); ++i)
    for (int j = 0; j < n2; ++j)
      objects.push_back("(" + a.object_label(i) + "," + b.object_label(j) +
                        ")");
  std::vector<Morphism> mor;
  std::vector<std::string> labels;
  for (int f = 0; f < m1; ++f)
    for (int g = 0; g < m2; ++g) {
      mor.push_back({a.source(f) * n2 + b.source(g),
                     a.target(f) * n2 + b.target(g)});
      labels.push_back("(" + a.morphism_label(f) + "," + b.morphism_label(g) +
                       ")");
    }
  std::vector<int> identities;
  for (int i = 0; i < a.num_objects(); ++i)
    for (int j = 0; j < n2; ++j)
      identities.push_back(a.identity(i) * m2 + b.identity(j));
  const std::size_t m = mor.size();
  std::vector<int> comp(m * m, -1);
  for (int g1 = 0; g1 < m1; ++g1)
    for (int g2 = 0; g2 < m2; ++g2)
      for (int f1 = 0; f1 < m1; ++f1)
        for (int f2 = 0; f2 < m2; ++f2) {
          const int c1 = a.compose(g1, f1), c2 = b.compose(g2, f2);
          if (c1 < 0 || c2 < 0) continue;
          comp[static_cast<std::size_t>(g1 * m2 + g2) * m + (f1 * m2 + f2)] =
              c1 * m2 + c2;
        }
  return FinCategory(std::move(objects), std::move(mor), std::move(labels),
                     std::move(identities), std::move(comp));
}

enum class DerivedKind { opposite, product };

inline FinCategory build_derived(const FinCategory& c, DerivedKind kind,
                                 const FinCategory* other = nullptr) {
  if (kind == DerivedKind::opposite) return opposite(c);
  if (other == nullptr) throw InputError("product needs a second category");
  return product(c, *other);
}

/// A category enriched in a finite quantale: an n×n matrix of hom values.
class VCategory {
 public:
  VCategory(QuantalePtr q, std::vector<std::string> objects,
            std::vector<int> hom)
      : q_(std::move(q)), objects_(std::move(objects)), hom_(std::move(hom)) {
    const std::size_t n = objects_.size();
    if (hom_.size() != n * n) throw InputError("hom matrix is not n×n");
    for (int h : hom_)
      if (!q_->contains(h)) throw InputError("hom value outside the carrier");
  }

  const Quantale& quantale() const { return *q_; }
  const QuantalePtr& quantale_ptr() const { return q_; }
  int num_objects() const { return static_cast<int>(objects_.size()); }
  const std::string& object_label(int x) const { return objects_.at(x); }
  const std::vector<std::string>& object_labels() const { return objects_; }
  int hom(int x, int y) const {
    return hom_[static_cast<std::size_t>(x) * objects_.size() + y];
  }
  const std::vector<int>& hom_matrix() const { return hom_; }

  /// The element "σ: x → y" exists in the underlying category iff
  /// unit ≤ hom(x, y).
  bool has_arrow(int x, int y) const { return q_->leq(q_->unit(), hom(x, y)); }

  int find_object(const std::string& label) const {
    for (int x = 0; x < num_objects(); ++x)
      if (objects_[x] == label) return x;
    return -1;
  }

  friend bool operator==(const VCategory& a, const VCategory& b) {
    return a.objects_.size() == b.objects_.size() && a.hom_ == b.hom_ &&
           *a.q_ == *b.q_;
  }

 private:
  QuantalePtr q_;
  std::vector<std::string> objects_;
  std::vector<int> hom_;
};

using VCatPtr = std::shared_ptr<const VCategory>;

inline Validation check_category(const VCategory& c) {
  const Quantale& q = c.quantale();
  const int n = c.num_objects();
  for (int x = 0; x < n; ++x)
    if (!q.leq(q.unit(), c.hom(x, x)))
      return Validation::fail("unit", "unit is not below hom(x,x)",
                              {{"object", x}});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (!q.leq(q.tensor(c.hom(y, z), c.hom(x, y)), c.hom(x, z)))
          return Validation::fail("composition",
                                  "hom(y,z)⊗hom(x,y) is not below hom(x,z)",
                                  {{"x", x}, {"y", y}, {"z", z}});
  return Validation::pass();
}

/// Underlying-order category of a preorder, enriched in q with hom values in
/// {bottom, unit}.
inline VCategory enriched_poset(QuantalePtr q, int n,
                                const std::vector<char>& leq) {
  std::vector<int> hom(n * n);
  for (int i = 0; i < n * n; ++i) hom[i] = leq[i] ? q->unit() : q->bottom();
  return VCategory(std::move(q), detail::numbered(n), std::move(hom));
}

inline VCategory enriched_discrete(QuantalePtr q, int n) {
  std::vector<char> leq(n * n, 0);
  for (int x = 0; x < n; ++x) leq[x * n + x] = 1;
  return enriched_poset(std::move(q), n, leq);
}

inline VCategory enriched_chain(QuantalePtr q, int n) {
  std::vector<char> leq(n * n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) leq[x * n + y] = 1;
  return enriched_poset(std::move(q), n, leq);
}

inline VCategory opposite(const VCategory& c) {
  const int n = c.num_objects();
  std::vector<int> hom(n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) hom[x * n + y] = c.hom(y, x);
  return VCategory(c.quantale_ptr(), c.object_labels(), std::move(hom));
}

inline VCategory product(const VCategory& a, const VCategory& b) {
  if (!(a.quantale() == b.quantale()))
    throw InputError("product of categories over different quantales");
  const int n1 = a.num_objects(), n2 = b.num_objects(), n = n1 * n2;
  const Quantale& q = a.quantale();
  std::vector<std::string> objects;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      objects.push_back("(" + a.object_label(i) + "," + b.object_label(j) +
                        ")");
  std::vector<int> hom(n * n);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n1; ++k)
        for (int l = 0; l < n2; ++l)
          hom[(i * n2 + j) * n + (k * n2 + l)] =
              q.tensor(a.hom(i, k), b.hom(j, l));
  return VCategory(a.quantale_ptr(), std::move(objects), std::move(hom));
}

inline VCategory build_derived(const VCategory& c, DerivedKind kind,
                               const VCategory* other = nullptr) {
  if (kind == DerivedKind::opposite) return opposite(c);
  if (other == nullptr) throw InputError("product needs a second category");
  return product(c, *other);
}

/// Functor between finite categories given by object and morphism maps.
struct FinFunctor {
  CatPtr domain;
  CatPtr codomain;
  std::vector<int> on_objects;
  std::vector<int> on_morphisms;
};

inline FinFunctor identity_functor(const CatPtr& c) {
  FinFunctor f{c, c, {}, {}};
  for (int x = 0; x < c->num_objects(); ++x) f.on_objects.push_back(x);
  for (int m = 0; m < c->num_morphisms(); ++m) f.on_morphisms.push_back(m);
  return f;
}

inline FinFunctor constant_functor(const CatPtr& dom, const CatPtr& cod,
                                   int object) {
  return {dom, cod, std::vector<int>(dom->num_objects(), object),
          std::vector<int>(dom->num_morphisms(), cod->identity(object))};
}

/// Projection of a product onto its first (which = 0) or second factor.
inline FinFunctor projection(const CatPtr& prod, const CatPtr& a,
                             const CatPtr& b, int which) {
  FinFunctor f{prod, which == 0 ? a : b, {}, {}};
  const int n2 = b->num_objects(), m2 = b->num_morphisms();
  for (int x = 0; x < prod->num_objects(); ++x)
    f.on_objects.push_back(which == 0 ? x / n2 : x % n2);
  for (int m = 0; m < prod->num_morphisms(); ++m)
    f.on_morphisms.push_back(which == 0 ? m / m2 : m % m2);
  return f;
}

inline Validation check_functor(const FinFunctor& f) {
  const FinCategory& c = *f.domain;
  const FinCategory& d = *f.codomain;
  if (f.on_objects.size() != static_cast<std::size_t>(c.num_objects()))
    return Validation::fail("unmapped", "object map is not total");
  if (f.on_morphisms.size() != static_cast<std::size_t>(c.num_morphisms()))
    return Validation::fail("unmapped", "morphism map is not total");
  for (int x = 0; x < c.num_objects(); ++x)
    if (f.on_objects[x] < 0 || f.on_objects[x] >= d.num_objects())
      return Validation::fail("unmapped", "object is unmapped",
                              {{"object", x}});
  for (int m = 0; m < c.num_morphisms(); ++m) {
    const int fm = f.on_morphisms[m];
    if (fm < 0 || fm >= d.num_morphisms())
      return Validation::fail("unmapped", "morphism is unmapped",
                              {{"morphism", m}});
    if (d.source(fm) != f.on_objects[c.source(m)] ||
        d.target(fm) != f.on_objects[c.target(m)])
      return Validation::fail("endpoints", "morphism image has wrong endpoints",
                              {{"morphism", m}});
  }
  for (int x = 0; x < c.num_objects(); ++x)
    if (f.on_morphisms[c.identity(x)] != d.identity(f.on_objects[x]))
      return Validation::fail("identity", "identity not preserved",
                              {{"object", x}});
  for (int g = 0; g < c.num_morphisms(); ++g)
    for (int h = 0; h < c.num_morphisms(); ++h) {
      const int gh = c.compose(g, h);
      if (gh < 0) continue;
      if (f.on_morphisms[gh] !=
          d.compose(f.on_morphisms[g], f.on_morphisms[h]))
        return Validation::fail("composition", "composite not preserved",
                                {{"g", g}, {"f", h}});
    }
  return Validation::pass();
}

/// Natural transformation between functors with the same domain and codomain;
/// one component morphism per object of the domain.
struct FinNat {
  FinFunctor source;
  FinFunctor target;
  std::vector<int> components;
};

inline Validation check_nat(const FinNat& a) {
  const FinCategory& c = *a.source.domain;
  const FinCategory& d = *a.source.codomain;
  if (!(*a.target.domain == c) || !(*a.target.codomain == d))
    return Validation::fail("shape", "functors have different (co)domains");
  if (a.components.size() != static_cast<std::size_t>(c.num_objects()))
    return Validation::fail("unmapped", "component family is not total");
  for (int x = 0; x < c.num_objects(); ++x) {
    const int ax = a.components[x];
    if (ax < 0 || ax >= d.num_morphisms() ||
        d.source(ax) != a.source.on_objects[x] ||
        d.target(ax) != a.target.on_objects[x])
      return Validation::fail("component", "component has wrong endpoints",
                              {{"object", x}});
  }
  for (int m = 0; m < c.num_morphisms(); ++m) {
    const int x = c.source(m), y = c.target(m);
    const int lhs = d.compose(a.target.on_morphisms[m], a.components[x]);
    const int rhs = d.compose(a.components[y], a.source.on_morphisms[m]);
    if (lhs != rhs)
      return Validation::fail(
          "naturality", "naturality square does not commute",
          {{"morphism", m}, {"source", x}, {"target", y},
           {"G(f)∘α_x", lhs}, {"α_y∘F(f)", rhs}});
  }
  return Validation::pass();
}

/// Enriched functor given by its object map; valid iff monotone on homs.
struct VFunctor {
  VCatPtr domain;
  VCatPtr codomain;
  std::vector<int> on_objects;
};

inline Validation check_functor(const VFunctor& f) {
  const VCategory& c = *f.domain;
  const VCategory& d = *f.codomain;
  if (f.on_objects.size() != static_cast<std::size_t>(c.num_objects()))
    return Validation::fail("unmapped", "object map is not total");
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = 0; y < c.num_objects(); ++y)
      if (!c.quantale().leq(c.hom(x, y),
                            d.hom(f.on_objects[x], f.on_objects[y])))
        return Validation::fail("monotone", "hom(x,y) not below hom(Fx,Fy)",
                                {{"x", x}, {"y", y}});
  return Validation::pass();
}

}  // namespace probicat
