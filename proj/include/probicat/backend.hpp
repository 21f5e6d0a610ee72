#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "category.hpp"
#include "natural.hpp"
#include "presheaf.hpp"

namespace probicat {

// Derived categories are built once per input pair and shared, so that
// presheaves produced by different operations on the same indices agree on
// their base pointer and the product tables are not rebuilt in inner loops.
namespace detail {

template <class Cat>
class DerivedCache {
 public:
  using Ptr = std::shared_ptr<const Cat>;

  Ptr opposite_of(const Ptr& c) {
    std::lock_guard lock(mu_);
    auto it = ops_.find(c.get());
    if (it != ops_.end()) return it->second.second;
    Ptr out = std::make_shared<const Cat>(opposite(*c));
    ops_.emplace(c.get(), std::make_pair(c, out));
    return out;
  }

  Ptr product_of(const Ptr& a, const Ptr& b) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(a.get(), b.get());
    auto it = products_.find(key);
    if (it != products_.end()) return it->second.out;
    Ptr out = std::make_shared<const Cat>(product(*a, *b));
    products_.emplace(key, Entry{a, b, out});
    return out;
  }

 private:
  struct Entry {
    Ptr a, b, out;  // inputs are retained so their addresses stay unique
  };
  std::mutex mu_;
  std::map<const Cat*, std::pair<Ptr, Ptr>> ops_;
  std::map<std::pair<const Cat*, const Cat*>, Entry> products_;
};

template <class Cat>
DerivedCache<Cat>& derived_cache() {
  static DerivedCache<Cat> cache;
  return cache;
}

}  // namespace detail

inline CatPtr op(const CatPtr& c) {
  return detail::derived_cache<FinCategory>().opposite_of(c);
}
inline VCatPtr op(const VCatPtr& c) {
  return detail::derived_cache<VCategory>().opposite_of(c);
}
inline CatPtr prod(const CatPtr& a, const CatPtr& b) {
  return detail::derived_cache<FinCategory>().product_of(a, b);
}
inline VCatPtr prod(const VCatPtr& a, const VCatPtr& b) {
  return detail::derived_cache<VCategory>().product_of(a, b);
}

inline CatPtr share(FinCategory c) {
  return std::make_shared<const FinCategory>(std::move(c));
}
inline VCatPtr share(VCategory c) {
  return std::make_shared<const VCategory>(std::move(c));
}

/// The terminal category, shared.
inline const CatPtr& terminal() {
  static const CatPtr one = share(terminal_category());
  return one;
}

/// The terminal V-category over q (one object, hom = unit).
inline VCatPtr terminal(const QuantalePtr& q) {
  static std::mutex mu;
  static std::map<const Quantale*, std::pair<QuantalePtr, VCatPtr>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(q.get());
  if (it != cache.end()) return it->second.second;
  VCatPtr one = share(VCategory(q, {"*"}, {q->unit()}));
  cache.emplace(q.get(), std::make_pair(q, one));
  return one;
}

/// Finite sets as the ground category.
struct SetV {
  using Cat = FinCategory;
  using CatP = CatPtr;
  using Presheaf = SetPresheaf;
  static constexpr Backend tag = Backend::finset;
};

/// A finite commutative quantale as the ground category.
struct QuantaleV {
  using Cat = VCategory;
  using CatP = VCatPtr;
  using Presheaf = VPresheaf;
  static constexpr Backend tag = Backend::quantale;
};

template <class V>
using PresheafOf = typename V::Presheaf;

/// A morphism of presheaves. In the quantale backend hom objects are truth
/// values of an order, so a morphism carries no data beyond its endpoints.
template <class V>
struct Map {
  PresheafOf<V> source;
  PresheafOf<V> target;
  Components components;  // set backend only
};

inline bool is_iso(const Map<SetV>& f) {
  return is_bijective(f.components, f.target);
}
inline bool is_iso(const Map<QuantaleV>& f) { return f.source == f.target; }

inline json to_json(const Map<SetV>& f) {
  return {{"source", f.source.to_json()},
          {"target", f.target.to_json()},
          {"components", f.components}};
}
inline json to_json(const Map<QuantaleV>& f) {
  return {{"source", f.source.to_json()}, {"target", f.target.to_json()}};
}

inline std::optional<Witness> isomorphic(const SetPresheaf& a,
                                         const SetPresheaf& b) {
  return find_natural_iso(a, b);
}
inline std::optional<Witness> isomorphic(const VPresheaf& a,
                                         const VPresheaf& b) {
  return find_natural_iso(a, b);
}

}  // namespace probicat
