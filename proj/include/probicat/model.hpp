#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "extend.hpp"

namespace probicat {

// Model files: JSON documents with a `schema: 1` field and named-object maps
// for quantales, categories, presheaves, probicategories, sigma_sets,
// reflections and extensions. Elements, objects and morphisms are referenced
// by label (string) or by id (integer).

inline constexpr int kModelSchema = 1;

class ModelError : public InputError {
 public:
  enum class Kind { parse, reference, schema };
  ModelError(Kind kind, std::string path, const std::string& what)
      : InputError(prefix(kind) + (path.empty() ? "" : " at " + path) + ": " + what),
        kind_(kind),
        path_(std::move(path)) {}
  Kind kind() const { return kind_; }
  const std::string& path() const { return path_; }

 private:
  static std::string prefix(Kind k) {
    switch (k) {
      case Kind::parse: return "parse error";
      case Kind::reference: return "unresolved reference";
      case Kind::schema: return "schema violation";
    }
    return "model error";
  }
  Kind kind_;
  std::string path_;
};

struct CategoryEntry {
  std::string quantale;  // empty for ordinary categories
  std::variant<CatPtr, VCatPtr> cat;
  bool enriched() const { return cat.index() == 1; }
};

struct PresheafEntry {
  std::variant<SetPresheaf, VPresheaf> value;
};

struct ProbicatEntry {
  std::string quantale;  // empty for the finite-set backend
  std::variant<Probicategory<SetV>, Probicategory<QuantaleV>> p;
  bool enriched() const { return p.index() == 1; }
  std::string backend() const {
    return enriched() ? "quantale:" + quantale : "finset";
  }
};

struct SigmaEntry {
  std::string probicategory;
  SigmaSet sigma;
};

struct ReflectionEntry {
  enum class Kind { localise, local_family };
  std::string probicategory;
  Kind kind = Kind::localise;
  std::string sigma;
  // Quantale backend only: the listed local presheaves (closure under meets
  // gives ψ) and optional generating and cogenerating classes.
  std::optional<Scope<QuantaleV>> local, gens, cogens;
};

struct ExtensionEntry {
  enum class Kind { yoneda, localisation, explicit_n };
  std::string probicategory;
  Kind kind = Kind::yoneda;
  std::string sigma;
  std::string reflection;  // explicit N: optional target subcategory
  std::vector<VCatPtr> targets;
  std::vector<VPresheaf> n;
};

struct Model {
  int schema = kModelSchema;
  std::map<std::string, QuantalePtr> quantales;
  std::map<std::string, CategoryEntry> categories;
  std::map<std::string, PresheafEntry> presheaves;
  std::map<std::string, ProbicatEntry> probicategories;
  std::map<std::string, SigmaEntry> sigma_sets;
  std::map<std::string, ReflectionEntry> reflections;
  std::map<std::string, ExtensionEntry> extensions;

  Model() = default;
  // Setups keep pointers into the probicategory map.
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
  Model(Model&&) = default;
  Model& operator=(Model&&) = default;

  json summary() const {
    return {{"schema", schema},
            {"quantales", quantales.size()},
            {"categories", categories.size()},
            {"presheaves", presheaves.size()},
            {"probicategories", probicategories.size()},
            {"sigma_sets", sigma_sets.size()},
            {"reflections", reflections.size()},
            {"extensions", extensions.size()}};
  }
};

namespace detail {

using MK = ModelError::Kind;

[[noreturn]] inline void schema_error(const std::string& path, const std::string& what) {
  throw ModelError(MK::schema, path, what);
}
[[noreturn]] inline void reference_error(const std::string& path,
                                         const std::string& section,
                                         const std::string& name) {
  throw ModelError(MK::reference, path, section + " '" + name + "' is not defined");
}

/// A JSON node together with its field path, for error messages.
struct Node {
  const json& j;
  std::string path;

  Node at(const std::string& key) const {
    if (!j.is_object()) schema_error(path, "expected an object");
    if (!j.contains(key)) schema_error(path + "." + key, "missing field");
    return {j.at(key), path + "." + key};
  }
  Node at(std::size_t i) const { return {j.at(i), path + "[" + std::to_string(i) + "]"}; }
  bool has(const std::string& key) const { return j.is_object() && j.contains(key); }
  std::size_t size() const { return j.size(); }

  const json& array() const {
    if (!j.is_array()) schema_error(path, "expected an array");
    return j;
  }
  const json& object() const {
    if (!j.is_object()) schema_error(path, "expected an object");
    return j;
  }
  std::string str() const {
    if (!j.is_string()) schema_error(path, "expected a string");
    return j.get<std::string>();
  }
  int integer() const {
    if (!j.is_number_integer()) schema_error(path, "expected an integer");
    return j.get<int>();
  }
  int natural() const {
    const int v = integer();
    if (v < 0) schema_error(path, "expected a non-negative integer");
    return v;
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < array().size(); ++i) out.push_back(at(i).str());
    return out;
  }
  std::string str_or(const std::string& key, std::string fallback) const {
    return has(key) ? at(key).str() : std::move(fallback);
  }
};

inline const json& empty_array() {
  static const json a = json::array();
  return a;
}

/// Label or id lookup against a list of labels.
inline int resolve_label(const Node& n, const std::vector<std::string>& labels,
                         const std::string& what) {
  if (n.j.is_number_integer()) {
    const int v = n.j.get<int>();
    if (v < 0 || v >= static_cast<int>(labels.size()))
      schema_error(n.path, what + " id " + std::to_string(v) + " out of range");
    return v;
  }
  if (!n.j.is_string()) schema_error(n.path, "expected a " + what + " label or id");
  const std::string s = n.j.get<std::string>();
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == s) return static_cast<int>(i);
  schema_error(n.path, "unknown " + what + " '" + s + "'");
}

inline int element(const Node& n, const Quantale& q) {
  return resolve_label(n, q.labels(), "element");
}
inline int object(const Node& n, const FinCategory& c) {
  return resolve_label(n, c.object_labels(), "object");
}
inline int object(const Node& n, const VCategory& c) {
  return resolve_label(n, c.object_labels(), "object");
}
inline int morphism(const Node& n, const FinCategory& c) {
  return resolve_label(n, c.morphism_labels(), "morphism");
}

template <class T>
const T& lookup(const std::map<std::string, T>& m, const Node& n,
                const std::string& section) {
  const std::string name = n.str();
  auto it = m.find(name);
  if (it == m.end()) reference_error(n.path, section, name);
  return it->second;
}

inline void require(const Validation& v, const std::string& path,
                    const std::string& what) {
  if (!v.ok)
    schema_error(path, what + " (" + v.law + ": " + v.detail + ", witness " +
                           v.witness.dump() + ")");
}

// ---------------------------------------------------------------------------
// Quantales.

inline QuantalePtr parse_quantale(const Node& n) {
  n.object();
  try {
    if (n.has("builtin")) {
      const std::string kind = n.at("builtin").str();
      if (kind == "boolean") return std::make_shared<const Quantale>(Quantale::boolean());
      const int k = n.at("parameter").natural();
      if (kind == "chain") return std::make_shared<const Quantale>(Quantale::chain(k));
      if (kind == "tropical")
        return std::make_shared<const Quantale>(Quantale::tropical(k));
      schema_error(n.at("builtin").path, "unknown builtin quantale '" + kind + "'");
    }
    const auto labels = n.at("carrier").strings();
    if (labels.empty()) schema_error(n.at("carrier").path, "empty carrier");
    const int size = static_cast<int>(labels.size());
    auto idx = [&](const Node& e) { return resolve_label(e, labels, "element"); };
    std::vector<std::pair<int, int>> leq;
    if (n.has("leq")) {
      const Node l = n.at("leq");
      for (std::size_t i = 0; i < l.array().size(); ++i) {
        const Node pr = l.at(i);
        if (pr.array().size() != 2) schema_error(pr.path, "expected a pair");
        leq.emplace_back(idx(pr.at(0)), idx(pr.at(1)));
      }
    }
    std::vector<int> tensor(size * size, -1);
    const Node t = n.at("tensor");
    for (std::size_t i = 0; i < t.array().size(); ++i) {
      const Node tr = t.at(i);
      if (tr.array().size() != 3) schema_error(tr.path, "expected a triple");
      int& slot = tensor[idx(tr.at(0)) * size + idx(tr.at(1))];
      const int v = idx(tr.at(2));
      if (slot >= 0 && slot != v) schema_error(tr.path, "conflicting tensor entry");
      slot = v;
    }
    for (int a = 0; a < size; ++a)
      for (int b = 0; b < size; ++b)
        if (tensor[a * size + b] < 0)
          schema_error(t.path, "tensor missing " + labels[a] + "⊗" + labels[b]);
    auto q = std::make_shared<const Quantale>(labels, leq, tensor, idx(n.at("unit")));
    require(check_quantale(*q), n.path, "not a commutative quantale");
    return q;
  } catch (const ModelError&) {
    throw;
  } catch (const InputError& e) {
    schema_error(n.path, e.what());
  }
}

// ---------------------------------------------------------------------------
// Categories.

inline std::vector<int> monoid_table(const Node& table, const std::vector<std::string>& labels) {
  const std::size_t k = labels.size();
  if (table.array().size() != k) schema_error(table.path, "table is not n×n");
  std::vector<int> out;
  for (std::size_t i = 0; i < k; ++i) {
    const Node row = table.at(i);
    if (row.array().size() != k) schema_error(row.path, "table is not n×n");
    for (std::size_t j = 0; j < k; ++j) out.push_back(resolve_label(row.at(j), labels, "element"));
  }
  return out;
}

inline std::vector<std::string> element_labels(const Node& n) {
  if (n.j.is_number_integer()) return numbered(n.natural());
  return n.strings();
}

inline FinCategory parse_explicit_category(const Node& n) {
  const auto objects = n.at("objects").strings();
  const int nobj = static_cast<int>(objects.size());
  std::vector<Morphism> mor;
  std::vector<std::string> labels;
  std::vector<int> ids;
  for (int x = 0; x < nobj; ++x) {
    ids.push_back(x);
    mor.push_back({x, x});
    labels.push_back("id_" + objects[x]);
  }
  if (n.has("morphisms")) {
    const Node ms = n.at("morphisms");
    for (std::size_t i = 0; i < ms.array().size(); ++i) {
      const Node m = ms.at(i);
      labels.push_back(m.at("name").str());
      mor.push_back({resolve_label(m.at("source"), objects, "object"),
                     resolve_label(m.at("target"), objects, "object")});
    }
  }
  const std::size_t k = mor.size();
  std::vector<int> comp(k * k, -1);
  for (std::size_t g = 0; g < k; ++g)
    for (std::size_t f = 0; f < k; ++f) {
      if (mor[f].target != mor[g].source) continue;
      if (static_cast<int>(f) < nobj) comp[g * k + f] = static_cast<int>(g);
      else if (static_cast<int>(g) < nobj) comp[g * k + f] = static_cast<int>(f);
    }
  if (n.has("compose")) {
    const Node cs = n.at("compose");
    for (std::size_t i = 0; i < cs.array().size(); ++i) {
      const Node c = cs.at(i);
      if (c.array().size() != 3) schema_error(c.path, "expected [g, f, g∘f]");
      const int g = resolve_label(c.at(0), labels, "morphism");
      const int f = resolve_label(c.at(1), labels, "morphism");
      if (mor[f].target != mor[g].source) schema_error(c.path, "morphisms are not composable");
      comp[g * k + f] = resolve_label(c.at(2), labels, "morphism");
    }
  }
  for (std::size_t g = 0; g < k; ++g)
    for (std::size_t f = 0; f < k; ++f)
      if (mor[f].target == mor[g].source && comp[g * k + f] < 0)
        schema_error(n.path + ".compose", "missing composite " + labels[g] + "∘" + labels[f]);
  return FinCategory(objects, mor, labels, ids, comp);
}

inline CategoryEntry parse_category(const Node& n, const Model& m) {
  n.object();
  try {
    if (n.has("quantale")) {
      QuantalePtr q = lookup(m.quantales, n.at("quantale"), "quantale");
      const std::string qname = n.at("quantale").str();
      VCategory c = [&] {
        if (n.has("builtin")) {
          const std::string kind = n.at("builtin").str();
          const int k = n.at("n").natural();
          if (kind == "chain") return enriched_chain(q, k);
          if (kind == "discrete") return enriched_discrete(q, k);
          schema_error(n.at("builtin").path, "unknown enriched builtin '" + kind + "'");
        }
        const auto objects = n.at("objects").strings();
        const int k = static_cast<int>(objects.size());
        std::vector<int> hom(k * k, q->bottom());
        for (int x = 0; x < k; ++x) hom[x * k + x] = q->unit();
        if (n.has("hom")) {
          const Node hs = n.at("hom");
          for (std::size_t i = 0; i < hs.array().size(); ++i) {
            const Node h = hs.at(i);
            if (h.array().size() != 3) schema_error(h.path, "expected [x, y, value]");
            hom[resolve_label(h.at(0), objects, "object") * k +
                resolve_label(h.at(1), objects, "object")] = element(h.at(2), *q);
          }
        }
        return VCategory(q, objects, hom);
      }();
      require(check_category(c), n.path, "not a V-category");
      return {qname, share(std::move(c))};
    }
    FinCategory c = [&] {
      if (n.has("builtin")) {
        const std::string kind = n.at("builtin").str();
        if (kind == "walking_arrow") return walking_arrow();
        if (kind == "parallel_pair") return parallel_pair();
        if (kind == "terminal") return terminal_category();
        const int k = n.at("n").natural();
        if (kind == "chain") return chain_category(k);
        if (kind == "discrete") return discrete_category(k);
        schema_error(n.at("builtin").path, "unknown builtin category '" + kind + "'");
      }
      if (n.has("monoid")) {
        const Node mo = n.at("monoid");
        const auto labels = element_labels(mo.at("elements"));
        return delooping(static_cast<int>(labels.size()), monoid_table(mo.at("table"), labels),
                         resolve_label(mo.at("unit"), labels, "element"), labels);
      }
      return parse_explicit_category(n);
    }();
    require(check_category(c), n.path, "not a category");
    return {"", share(std::move(c))};
  } catch (const ModelError&) {
    throw;
  } catch (const InputError& e) {
    schema_error(n.path, e.what());
  }
}

// ---------------------------------------------------------------------------
// Presheaves, given by per-object sizes (values) and non-identity actions.

/// `sizes`: list or {object: n}; `action`: {morphism: [..]}, identities
/// default to identity maps.
inline SetPresheaf parse_set_presheaf(const Node& n, const CatPtr& c) {
  const int k = c->num_objects();
  std::vector<int> sizes(k, 0);
  const Node s = n.at("sizes");
  if (s.j.is_array()) {
    if (s.size() != static_cast<std::size_t>(k)) schema_error(s.path, "one size per object");
    for (int x = 0; x < k; ++x) sizes[x] = s.at(x).natural();
  } else {
    for (const auto& [key, val] : s.object().items())
      sizes[object(Node{json(key), s.path + "." + key}, *c)] =
          Node{val, s.path + "." + key}.natural();
  }
  std::vector<std::vector<int>> act(c->num_morphisms());
  std::vector<char> given(c->num_morphisms(), 0);
  if (n.has("action"))
    for (const auto& [key, val] : n.at("action").object().items()) {
      const Node mv{val, n.path + ".action." + key};
      const int f = morphism(Node{json(key), mv.path}, *c);
      for (std::size_t i = 0; i < mv.array().size(); ++i) act[f].push_back(mv.at(i).natural());
      given[f] = 1;
    }
  for (int f = 0; f < c->num_morphisms(); ++f) {
    if (given[f]) continue;
    if (c->is_identity(f)) {
      for (int e = 0; e < sizes[c->source(f)]; ++e) act[f].push_back(e);
    } else if (sizes[c->target(f)] > 0) {
      schema_error(n.path + ".action", "missing action of " + c->morphism_label(f));
    }
  }
  SetPresheaf p(c, std::move(sizes), std::move(act));
  require(check_presheaf(p), n.path, "not a presheaf");
  return p;
}

/// `values`: list or sparse {object: element}, unlisted entries are bottom.
inline VPresheaf parse_v_presheaf(const Node& n, const VCatPtr& c) {
  const Quantale& q = c->quantale();
  const int k = c->num_objects();
  std::vector<int> v(k, q.bottom());
  const Node s = n.at("values");
  if (s.j.is_array()) {
    if (s.size() != static_cast<std::size_t>(k)) schema_error(s.path, "one value per object");
    for (int x = 0; x < k; ++x) v[x] = element(s.at(x), q);
  } else {
    for (const auto& [key, val] : s.object().items())
      v[object(Node{json(key), s.path + "." + key}, *c)] =
          element(Node{val, s.path + "." + key}, q);
  }
  VPresheaf p(c, std::move(v));
  require(check_presheaf(p), n.path, "not a V-presheaf");
  return p;
}

// ---------------------------------------------------------------------------
// Probicategories.

template <class V>
int pair_of(const Probicategory<V>& p, const Node& x, const Node& y) {
  return resolve_label(x, p.objects(), "object") * p.size() +
         resolve_label(y, p.objects(), "object");
}

template <class CatP>
CatP hom_category(const CategoryEntry& e, const Node& n) {
  if (!std::holds_alternative<CatP>(e.cat))
    schema_error(n.path, "category is on the wrong backend for this probicategory");
  return std::get<CatP>(e.cat);
}

inline int object_of(const CatPtr& c, const Node& n) { return object(n, *c); }
inline int object_of(const VCatPtr& c, const Node& n) { return object(n, *c); }

/// Sparse entries: quantale {"at", "value"}, set {"at", "size"} plus
/// "action" [{"morphism", "map"}], where at/morphism list one item per factor
/// of the base.
template <class V>
PresheafOf<V> sparse_presheaf(const Node& n, const std::vector<typename V::CatP>& factors,
                              const typename V::CatP& base) {
  auto offset = [&](const Node& given, bool morphisms) {
    json wrapped;
    const Node at{given.j.is_array() ? given.j : (wrapped = json::array({given.j})),
                  given.path};
    int idx = 0;
    if (at.array().size() != factors.size())
      schema_error(at.path, "expected " + std::to_string(factors.size()) + " coordinates");
    for (std::size_t i = 0; i < factors.size(); ++i) {
      int count = 0, coord = 0;
      if constexpr (std::is_same_v<V, SetV>) {
        count = morphisms ? factors[i]->num_morphisms() : factors[i]->num_objects();
        coord = morphisms ? morphism(at.at(i), *factors[i]) : object(at.at(i), *factors[i]);
      } else {
        count = factors[i]->num_objects();
        coord = object(at.at(i), *factors[i]);
      }
      idx = idx * count + coord;
    }
    return idx;
  };
  // A single coordinate may be written bare rather than as a one-item list.
  const Node es = n.has("entries") ? n.at("entries") : Node{empty_array(), n.path + ".entries"};
  if constexpr (std::is_same_v<V, SetV>) {
    std::vector<int> sizes(base->num_objects(), 0);
    for (std::size_t i = 0; i < es.array().size(); ++i) {
      const Node e = es.at(i);
      sizes[offset(e.at("at"), false)] = e.at("size").natural();
    }
    std::vector<std::vector<int>> act(base->num_morphisms());
    std::vector<char> given(base->num_morphisms(), 0);
    if (n.has("action")) {
      const Node as = n.at("action");
      for (std::size_t i = 0; i < as.array().size(); ++i) {
        const Node a = as.at(i);
        const int f = offset(a.at("morphism"), true);
        const Node mp = a.at("map");
        for (std::size_t j = 0; j < mp.array().size(); ++j) act[f].push_back(mp.at(j).natural());
        given[f] = 1;
      }
    }
    for (int f = 0; f < base->num_morphisms(); ++f) {
      if (given[f]) continue;
      if (base->is_identity(f)) {
        for (int e = 0; e < sizes[base->source(f)]; ++e) act[f].push_back(e);
      } else if (sizes[base->target(f)] > 0) {
        schema_error(n.path + ".action", "missing action of " + base->morphism_label(f));
      }
    }
    SetPresheaf p(base, std::move(sizes), std::move(act));
    require(check_presheaf(p), n.path, "not a presheaf");
    return p;
  } else {
    const Quantale& q = base->quantale();
    std::vector<int> v(base->num_objects(), q.bottom());
    for (std::size_t i = 0; i < es.array().size(); ++i) {
      const Node e = es.at(i);
      v[offset(e.at("at"), false)] = element(e.at("value"), q);
    }
    VPresheaf p(base, std::move(v));
    require(check_presheaf(p), n.path, "not a V-presheaf");
    return p;
  }
}

template <class V>
Probicategory<V> parse_explicit_probicat(const Node& n, const Model& m,
                                         const std::string& qname) {
  using CatP = typename V::CatP;
  const auto objects = n.at("ob").strings();
  const int k = static_cast<int>(objects.size());
  if (k == 0) schema_error(n.at("ob").path, "no objects");
  std::vector<CatP> homs(k * k);
  const Node hs = n.at("hom");
  for (std::size_t i = 0; i < hs.array().size(); ++i) {
    const Node h = hs.at(i);
    const int x = resolve_label(h.at("x"), objects, "object");
    const int y = resolve_label(h.at("y"), objects, "object");
    const CategoryEntry& e = lookup(m.categories, h.at("category"), "category");
    if (e.quantale != qname)
      schema_error(h.at("category").path, "category is not over the probicategory's base");
    homs[x * k + y] = hom_category<CatP>(e, h.at("category"));
  }
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (!homs[x * k + y])
        schema_error(hs.path, "no hom category for (" + objects[x] + ", " + objects[y] + ")");
  auto hom = [&](int x, int y) { return homs[x * k + y]; };
  std::vector<PresheafOf<V>> structure;
  std::map<int, Node> p_nodes;
  const Node ps = n.has("P") ? n.at("P") : Node{empty_array(), n.path + ".P"};
  for (std::size_t i = 0; i < ps.array().size(); ++i) {
    const Node e = ps.at(i);
    const int x = resolve_label(e.at("x"), objects, "object");
    const int y = resolve_label(e.at("y"), objects, "object");
    const int z = resolve_label(e.at("z"), objects, "object");
    if (!p_nodes.emplace((x * k + y) * k + z, e).second)
      schema_error(e.path, "duplicate P entry");
  }
  const json empty = json::object();
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      for (int z = 0; z < k; ++z) {
        const CatP base = prod(prod(op(hom(y, z)), op(hom(x, y))), hom(x, z));
        auto it = p_nodes.find((x * k + y) * k + z);
        const Node e = it != p_nodes.end() ? it->second : Node{empty, ps.path};
        structure.push_back(sparse_presheaf<V>(e, {op(hom(y, z)), op(hom(x, y)), hom(x, z)}, base));
      }
  std::vector<PresheafOf<V>> ids;
  std::map<int, Node> j_nodes;
  const Node js = n.has("J") ? n.at("J") : Node{empty_array(), n.path + ".J"};
  for (std::size_t i = 0; i < js.array().size(); ++i) {
    const Node e = js.at(i);
    if (!j_nodes.emplace(resolve_label(e.at("x"), objects, "object"), e).second)
      schema_error(e.path, "duplicate J entry");
  }
  for (int x = 0; x < k; ++x) {
    auto it = j_nodes.find(x);
    const Node e = it != j_nodes.end() ? it->second : Node{empty, js.path};
    ids.push_back(sparse_presheaf<V>(e, {hom(x, x)}, hom(x, x)));
  }
  return Probicategory<V>(objects, std::move(homs), std::move(structure), std::move(ids));
}

inline ProbicatEntry parse_probicat(const Node& n, const Model& m) {
  n.object();
  try {
    const std::string construction = n.str_or("construction", "explicit");
    if (construction == "delooped_monoid") {
      const Node mo = n.at("monoid");
      const auto labels = element_labels(mo.at("elements"));
      const int k = static_cast<int>(labels.size());
      const auto table = monoid_table(mo.at("table"), labels);
      const int unit = resolve_label(mo.at("unit"), labels, "element");
      if (n.has("quantale")) {
        QuantalePtr q = lookup(m.quantales, n.at("quantale"), "quantale");
        return {n.at("quantale").str(), delooped_monoid(q, k, table, unit, labels)};
      }
      return {"", delooped_monoid(k, table, unit, labels)};
    }
    if (construction == "monoidal") {
      const CategoryEntry& e = lookup(m.categories, n.at("category"), "category");
      auto tensor_table = [&](int nobj, auto&& obj) {
        const Node t = n.at("tensor");
        if (t.array().size() != static_cast<std::size_t>(nobj))
          schema_error(t.path, "tensor is not n×n");
        std::vector<int> out;
        for (int i = 0; i < nobj; ++i) {
          const Node row = t.at(i);
          if (row.array().size() != static_cast<std::size_t>(nobj))
            schema_error(row.path, "tensor is not n×n");
          for (int j = 0; j < nobj; ++j) out.push_back(obj(row.at(j)));
        }
        return out;
      };
      if (e.enriched()) {
        const VCatPtr& c = std::get<VCatPtr>(e.cat);
        auto obj = [&](const Node& o) { return object(o, *c); };
        return {e.quantale, from_monoidal(c, tensor_table(c->num_objects(), obj),
                                          obj(n.at("unit")))};
      }
      const CatPtr& c = std::get<CatPtr>(e.cat);
      auto obj = [&](const Node& o) { return object(o, *c); };
      return {"", from_monoidal(c, thin_monoidal(*c, tensor_table(c->num_objects(), obj),
                                                 obj(n.at("unit"))))};
    }
    if (construction == "manifold") {
      const Node fam = n.at("family");
      std::vector<CatPtr> sets;
      std::vector<VCatPtr> enriched;
      std::string qname;
      for (std::size_t i = 0; i < fam.array().size(); ++i) {
        const CategoryEntry& e = lookup(m.categories, fam.at(i), "category");
        if (i > 0 && e.quantale != qname)
          schema_error(fam.at(i).path, "family mixes bases");
        qname = e.quantale;
        if (e.enriched()) enriched.push_back(std::get<VCatPtr>(e.cat));
        else sets.push_back(std::get<CatPtr>(e.cat));
      }
      std::vector<std::string> labels;
      if (n.has("ob")) labels = n.at("ob").strings();
      if (!enriched.empty()) return {qname, manifold(enriched, labels)};
      return {"", manifold(sets, labels)};
    }
    if (construction != "explicit")
      schema_error(n.at("construction").path, "unknown construction '" + construction + "'");
    if (n.has("quantale")) {
      lookup(m.quantales, n.at("quantale"), "quantale");
      const std::string qname = n.at("quantale").str();
      return {qname, parse_explicit_probicat<QuantaleV>(n, m, qname)};
    }
    return {"", parse_explicit_probicat<SetV>(n, m, "")};
  } catch (const ModelError&) {
    throw;
  } catch (const InputError& e) {
    schema_error(n.path, e.what());
  }
}

// ---------------------------------------------------------------------------
// Presheaves, Σ, reflections and extensions.

inline PresheafEntry parse_presheaf(const Node& n, const Model& m) {
  n.object();
  try {
    std::variant<CatPtr, VCatPtr> base;
    if (n.has("category")) {
      base = lookup(m.categories, n.at("category"), "category").cat;
    } else {
      const Node h = n.at("hom");
      const ProbicatEntry& e = lookup(m.probicategories, h.at("probicategory"), "probicategory");
      std::visit(
          [&](const auto& p) {
            const int xy = pair_of(p, h.at("x"), h.at("y"));
            base = p.hom(xy / p.size(), xy % p.size());
          },
          e.p);
    }
    if (std::holds_alternative<CatPtr>(base))
      return {parse_set_presheaf(n, std::get<CatPtr>(base))};
    return {parse_v_presheaf(n, std::get<VCatPtr>(base))};
  } catch (const ModelError&) {
    throw;
  } catch (const InputError& e) {
    schema_error(n.path, e.what());
  }
}

inline SigmaEntry parse_sigma(const Node& n, const Model& m) {
  n.object();
  SigmaEntry out;
  out.probicategory = n.at("probicategory").str();
  const ProbicatEntry& e = lookup(m.probicategories, n.at("probicategory"), "probicategory");
  const Node cells = n.at("cells");
  for (std::size_t i = 0; i < cells.array().size(); ++i) {
    const Node c = cells.at(i);
    try {
      if (const auto* p = std::get_if<Probicategory<SetV>>(&e.p)) {
        const int xy = pair_of(*p, c.at("x"), c.at("y"));
        const int x = xy / p->size(), y = xy % p->size();
        const Sigma s = make_sigma(*p, x, y, morphism(c.at("morphism"), *p->hom(x, y)));
        if (c.has("source") && object(c.at("source"), *p->hom(x, y)) != s.source)
          schema_error(c.at("source").path, "does not match the morphism");
        if (c.has("target") && object(c.at("target"), *p->hom(x, y)) != s.target)
          schema_error(c.at("target").path, "does not match the morphism");
        out.sigma.push_back(s);
      } else {
        const auto& q = std::get<Probicategory<QuantaleV>>(e.p);
        const int xy = pair_of(q, c.at("x"), c.at("y"));
        const int x = xy / q.size(), y = xy % q.size();
        out.sigma.push_back(make_sigma(q, x, y, object(c.at("source"), *q.hom(x, y)),
                                       object(c.at("target"), *q.hom(x, y))));
      }
    } catch (const ModelError&) {
      throw;
    } catch (const InputError& err) {
      schema_error(c.path, err.what());
    }
  }
  return out;
}

/// Cells [{"x", "y", "presheaves": [names]}] into a quantale scope.
inline Scope<QuantaleV> parse_cells(const Node& n, const Model& m,
                                    const Probicategory<QuantaleV>& p) {
  Scope<QuantaleV> s{p.size(), std::vector<std::vector<VPresheaf>>(p.size() * p.size())};
  for (std::size_t i = 0; i < n.array().size(); ++i) {
    const Node c = n.at(i);
    const int xy = pair_of(p, c.at("x"), c.at("y"));
    const Node names = c.at("presheaves");
    for (std::size_t j = 0; j < names.array().size(); ++j) {
      const PresheafEntry& e = lookup(m.presheaves, names.at(j), "presheaf");
      const auto* f = std::get_if<VPresheaf>(&e.value);
      if (!f || !(f->base() == *p.hom(xy / p.size(), xy % p.size())))
        schema_error(names.at(j).path, "presheaf is not on the hom category");
      s.cells[xy].push_back(*f);
    }
  }
  return s;
}

inline ReflectionEntry parse_reflection(const Node& n, const Model& m) {
  n.object();
  ReflectionEntry out;
  out.probicategory = n.at("probicategory").str();
  const ProbicatEntry& e = lookup(m.probicategories, n.at("probicategory"), "probicategory");
  if (n.has("derive")) {
    if (n.at("derive").str() != "localise")
      schema_error(n.at("derive").path, "only 'localise' can be derived");
    out.kind = ReflectionEntry::Kind::localise;
    out.sigma = n.at("sigma").str();
    const SigmaEntry& s = lookup(m.sigma_sets, n.at("sigma"), "sigma_set");
    if (s.probicategory != out.probicategory)
      schema_error(n.at("sigma").path, "Σ belongs to another probicategory");
    return out;
  }
  const auto* p = std::get_if<Probicategory<QuantaleV>>(&e.p);
  if (!p) schema_error(n.path, "explicit local families need the quantale backend");
  out.kind = ReflectionEntry::Kind::local_family;
  out.local = parse_cells(n.at("local"), m, *p);
  if (n.has("gens")) out.gens = parse_cells(n.at("gens"), m, *p);
  if (n.has("cogens")) out.cogens = parse_cells(n.at("cogens"), m, *p);
  return out;
}

inline ExtensionEntry parse_extension(const Node& n, const Model& m) {
  n.object();
  ExtensionEntry out;
  out.probicategory = n.at("probicategory").str();
  const ProbicatEntry& e = lookup(m.probicategories, n.at("probicategory"), "probicategory");
  const Node nn = n.at("n");
  if (nn.j.is_string()) {
    const std::string kind = nn.str();
    if (kind == "yoneda") {
      out.kind = ExtensionEntry::Kind::yoneda;
    } else if (kind == "localisation") {
      out.kind = ExtensionEntry::Kind::localisation;
      out.sigma = n.at("sigma").str();
      if (lookup(m.sigma_sets, n.at("sigma"), "sigma_set").probicategory != out.probicategory)
        schema_error(n.at("sigma").path, "Σ belongs to another probicategory");
    } else {
      schema_error(nn.path, "expected 'yoneda', 'localisation' or a table");
    }
    return out;
  }
  const auto* p = std::get_if<Probicategory<QuantaleV>>(&e.p);
  if (!p) schema_error(nn.path, "explicit N tables need the quantale backend");
  out.kind = ExtensionEntry::Kind::explicit_n;
  const int k = p->size();
  out.targets.resize(k * k);
  out.n.resize(k * k);
  for (int i = 0; i < k * k; ++i) out.targets[i] = p->hom(i / k, i % k);
  if (n.has("targets")) {
    const Node ts = n.at("targets");
    for (std::size_t i = 0; i < ts.array().size(); ++i) {
      const Node t = ts.at(i);
      const CategoryEntry& c = lookup(m.categories, t.at("category"), "category");
      out.targets[pair_of(*p, t.at("x"), t.at("y"))] = hom_category<VCatPtr>(c, t.at("category"));
    }
  }
  if (n.has("reflection")) {
    out.reflection = n.at("reflection").str();
    lookup(m.reflections, n.at("reflection"), "reflection");
  }
  std::vector<char> seen(k * k, 0);
  for (std::size_t i = 0; i < nn.array().size(); ++i) {
    const Node r = nn.at(i);
    const int xy = pair_of(*p, r.at("x"), r.at("y"));
    const VCatPtr& a = p->hom(xy / k, xy % k);
    const VCatPtr& target = out.targets[xy];
    const Node rows = r.at("rows");
    if (rows.array().size() != static_cast<std::size_t>(a->num_objects()))
      schema_error(rows.path, "one row per object of the hom category");
    std::vector<int> v;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const PresheafEntry& pe = lookup(m.presheaves, rows.at(j), "presheaf");
      const auto* f = std::get_if<VPresheaf>(&pe.value);
      if (!f || !(f->base() == *target))
        schema_error(rows.at(j).path, "row is not a presheaf on the target category");
      v.insert(v.end(), f->values().begin(), f->values().end());
    }
    try {
      out.n[xy] = VPresheaf(prod(op(a), target), v);
    } catch (const InputError& err) {
      schema_error(rows.path, err.what());
    }
    require(check_presheaf(out.n[xy]), rows.path, "N is not functorial in A");
    seen[xy] = 1;
  }
  for (int i = 0; i < k * k; ++i)
    if (!seen[i])
      schema_error(nn.path, "no N for (" + p->objects()[i / k] + ", " + p->objects()[i % k] + ")");
  return out;
}

/// Rejects duplicate keys, which the JSON reader would otherwise collapse.
inline json parse_json_strict(const std::string& text) {
  std::vector<std::set<std::string>> keys;
  std::string duplicate;
  json::parser_callback_t cb = [&](int, json::parse_event_t ev, json& parsed) {
    switch (ev) {
      case json::parse_event_t::object_start: keys.emplace_back(); break;
      case json::parse_event_t::object_end: keys.pop_back(); break;
      case json::parse_event_t::key:
        if (!keys.back().insert(parsed.get<std::string>()).second && duplicate.empty())
          duplicate = parsed.get<std::string>();
        break;
      default: break;
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw ModelError(MK::parse, "", e.what());
  }
  if (!duplicate.empty())
    throw ModelError(MK::schema, "", "duplicate id '" + duplicate + "'");
  return j;
}

}  // namespace detail

/// Builds a validated model from a parsed document. Sections are resolved in
/// dependency order, so a reference to a later section is unresolved.
inline Model parse_model(const json& doc) {
  using detail::Node;
  Model m;
  const Node root{doc, "$"};
  root.object();
  static const std::set<std::string> known{"schema",     "quantales",  "categories",
                                           "presheaves", "probicategories", "sigma_sets",
                                           "reflections", "extensions", "description"};
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) detail::schema_error("$." + key, "unknown section");
  if (root.has("schema") && root.at("schema").integer() != kModelSchema)
    detail::schema_error("$.schema", "unsupported schema version");
  auto each = [&](const std::string& section, auto&& fn) {
    if (!root.has(section)) return;
    const Node s = root.at(section);
    for (const auto& [name, val] : s.object().items()) fn(name, Node{val, s.path + "." + name});
  };
  each("quantales", [&](const std::string& k, const Node& n) {
    m.quantales.emplace(k, detail::parse_quantale(n));
  });
  each("categories", [&](const std::string& k, const Node& n) {
    m.categories.emplace(k, detail::parse_category(n, m));
  });
  each("probicategories", [&](const std::string& k, const Node& n) {
    m.probicategories.emplace(k, detail::parse_probicat(n, m));
  });
  each("presheaves", [&](const std::string& k, const Node& n) {
    m.presheaves.emplace(k, detail::parse_presheaf(n, m));
  });
  each("sigma_sets", [&](const std::string& k, const Node& n) {
    m.sigma_sets.emplace(k, detail::parse_sigma(n, m));
  });
  each("reflections", [&](const std::string& k, const Node& n) {
    m.reflections.emplace(k, detail::parse_reflection(n, m));
  });
  each("extensions", [&](const std::string& k, const Node& n) {
    m.extensions.emplace(k, detail::parse_extension(n, m));
  });
  return m;
}

inline Model parse_model_text(const std::string& text) {
  return parse_model(detail::parse_json_strict(text));
}

inline Model parse_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(ModelError::Kind::parse, path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model_text(buf.str());
  } catch (const ModelError& e) {
    throw InputError(path.filename().string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Setups built from model entries. They point into the model.

/// ψ for an explicit quantale local family: the meet of the listed local
/// presheaves above F (the top presheaf is always local).
inline Reflector<QuantaleV> family_reflector(const Scope<QuantaleV>& local) {
  return closure_reflector([local](int x, int y, const VPresheaf& f) {
    const Quantale& q = f.quantale();
    std::vector<int> c(f.values().size(), q.top());
    for (const auto& g : local.at(x, y))
      if (pointwise_leq(f, g))
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = q.meet(c[i], g[static_cast<int>(i)]);
    return c;
  });
}

template <class V>
Reflector<V> model_reflector(const Model& m, const ReflectionEntry& r) {
  if (r.kind == ReflectionEntry::Kind::localise)
    return sigma_reflector<V>(m.sigma_sets.at(r.sigma).sigma);
  if constexpr (std::is_same_v<V, QuantaleV>) {
    return family_reflector(*r.local);
  } else {
    throw InputError("explicit local families need the quantale backend");
  }
}

template <class V>
ExtensionSetup<V> model_extension(const Model& m, const ExtensionEntry& e,
                                  const Probicategory<V>& p, Scope<V> base_scope,
                                  int max_iter = kDefaultMaxIter) {
  switch (e.kind) {
    case ExtensionEntry::Kind::yoneda:
      return yoneda_extension(p, std::move(base_scope));
    case ExtensionEntry::Kind::localisation:
      return localisation_extension(p, m.sigma_sets.at(e.sigma).sigma,
                                    std::move(base_scope), max_iter);
    case ExtensionEntry::Kind::explicit_n:
      break;
  }
  if constexpr (std::is_same_v<V, QuantaleV>) {
    Reflector<QuantaleV> psi = identity_reflector<QuantaleV>();
    if (!e.reflection.empty()) psi = model_reflector<QuantaleV>(m, m.reflections.at(e.reflection));
    Scope<QuantaleV> scope{p.size(), {}};
    for (int i = 0; i < p.size() * p.size(); ++i) {
      std::vector<VPresheaf> cells;
      for (const auto& c : enumerate_presheaves(e.targets[i]))
        if (psi.contains(i / p.size(), i % p.size(), c)) cells.push_back(c);
      scope.cells.push_back(std::move(cells));
    }
    return make_extension(p, e.targets, std::move(psi), e.n, std::move(scope));
  } else {
    throw InputError("explicit N tables need the quantale backend");
  }
}

}  // namespace probicat
