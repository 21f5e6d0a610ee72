// Acceptance run: one line per criterion with verdict, runtime and limit.
//
//   acceptance [--expect-fail N ...]
//
// Exit status is 0 when every criterion passes or fails only where listed
// with --expect-fail; the verdict lines are printed unchanged either way.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <probicat/model.hpp>

using namespace probicat;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Verdict()> run;
};

QuantalePtr quantale(const Quantale& q) { return std::make_shared<const Quantale>(q); }

const std::vector<int> z2_table{0, 1, 1, 0};

Probicategory<QuantaleV> z2_over(const QuantalePtr& q) {
  return delooped_monoid(q, 2, z2_table, 0);
}

Probicategory<SetV> walking_arrow_meet() {
  auto a = share(walking_arrow());
  return from_monoidal(a, thin_monoidal(*a, {0, 0, 0, 1}, 1));
}

Scope<QuantaleV> every_presheaf(const Probicategory<QuantaleV>& p) {
  return Scope<QuantaleV>{1, {enumerate_presheaves(p.hom(0, 0))}};
}

std::string str(const json& j) { return j.dump(); }

// ---------------------------------------------------------------------------
// Independent oracles.

// (F∘G)(c) = ⋁_{a·b = c} F(a) ⊗ G(b) on the Z/2 table.
std::vector<int> table_compose(const Quantale& q, const std::vector<int>& f,
                               const std::vector<int>& g) {
  std::vector<int> out(2, q.bottom());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int c = z2_table[a * 2 + b];
      out[c] = q.join(out[c], q.tensor(f[a], g[b]));
    }
  return out;
}

// (H/G)(a) = ⋀_b [G(b), H(a·b)] and (F\H)(b) = ⋀_a [F(a), H(a·b)].
std::vector<int> table_right(const Quantale& q, const std::vector<int>& h,
                             const std::vector<int>& g) {
  std::vector<int> out(2, q.top());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out[a] = q.meet(out[a], q.residual(g[b], h[z2_table[a * 2 + b]]));
  return out;
}
std::vector<int> table_left(const Quantale& q, const std::vector<int>& f,
                            const std::vector<int>& h) {
  std::vector<int> out(2, q.top());
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a)
      out[b] = q.meet(out[b], q.residual(f[a], h[z2_table[a * 2 + b]]));
  return out;
}

// hom(F, G) = ⋀_x [F(x), G(x)] over a discrete base.
int table_hom(const Quantale& q, const std::vector<int>& f, const std::vector<int>& g) {
  int acc = q.top();
  for (std::size_t x = 0; x < f.size(); ++x) acc = q.meet(acc, q.residual(f[x], g[x]));
  return acc;
}

// F(m) maps F(s) to F(t) for m: s → t. Components α: F → G are natural iff
// α_t(F(m) e) = G(m)(α_s e), and invertible iff each component is a bijection.
bool verify_iso(const SetPresheaf& f, const SetPresheaf& g, const Components& a) {
  const FinCategory& c = f.base();
  if (static_cast<int>(a.size()) != c.num_objects()) return false;
  for (int x = 0; x < c.num_objects(); ++x) {
    if (static_cast<int>(a[x].size()) != f.size(x) || f.size(x) != g.size(x)) return false;
    std::vector<char> hit(g.size(x), 0);
    for (int v : a[x]) {
      if (v < 0 || v >= g.size(x) || hit[v]) return false;
      hit[v] = 1;
    }
  }
  for (int m = 0; m < c.num_morphisms(); ++m)
    for (int e = 0; e < f.size(c.source(m)); ++e)
      if (a[c.target(m)][f.apply(m, e)] != g.apply(m, a[c.source(m)][e])) return false;
  return true;
}
bool verify_iso(const VPresheaf& f, const VPresheaf& g, const Witness& w) {
  return w.kind == Witness::Kind::order_equality && f.values() == g.values();
}
bool verify_iso(const SetPresheaf& f, const SetPresheaf& g, const Witness& w) {
  if (w.kind == Witness::Kind::order_equality) return f == g;
  return verify_iso(f, g, w.components);
}

// Coend classes of ∐_k W(k) × D(k) from cocones into the two-element set:
// two positions are identified iff every cocone agrees on them.
std::vector<int> cocone_partition(const SetPresheaf& w, const SetPresheaf& d,
                                  const FinCategory& k) {
  std::vector<std::vector<std::vector<int>>> at(k.num_objects());
  int t = 0;
  for (int x = 0; x < k.num_objects(); ++x) {
    at[x].assign(w.size(x), std::vector<int>(d.size(x), -1));
    for (int e = 0; e < w.size(x); ++e)
      for (int y = 0; y < d.size(x); ++y) at[x][e][y] = t++;
  }
  std::vector<std::uint32_t> cocones;
  for (std::uint32_t c = 0; c < (1u << t); ++c) {
    bool ok = true;
    for (int f = 0; f < k.num_morphisms() && ok; ++f) {
      const int x = k.source(f), x2 = k.target(f);
      for (int e = 0; e < w.size(x) && ok; ++e)
        for (int y = 0; y < d.size(x2) && ok; ++y)
          if (((c >> at[x2][w.apply(f, e)][y]) & 1u) != ((c >> at[x][e][d.apply(f, y)]) & 1u))
            ok = false;
    }
    if (ok) cocones.push_back(c);
  }
  std::vector<int> cls(t, -1);
  int next = 0;
  for (int i = 0; i < t; ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = next;
    for (int j = i + 1; j < t; ++j) {
      bool same = true;
      for (auto c : cocones)
        if (((c >> i) & 1u) != ((c >> j) & 1u)) same = false;
      if (same) cls[j] = next;
    }
    ++next;
  }
  return cls;
}

// Every partial order on n points as an n×n table.
std::vector<std::vector<char>> partial_orders(int n) {
  std::vector<std::vector<char>> out;
  const int pairs = n * (n - 1);
  for (int mask = 0; mask < (1 << pairs); ++mask) {
    std::vector<char> leq(n * n, 0);
    int bit = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) leq[i * n + j] = 1;
        else leq[i * n + j] = (mask >> bit++) & 1;
      }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j) {
        if (i != j && leq[i * n + j] && leq[j * n + i]) ok = false;
        for (int k = 0; k < n && ok; ++k)
          if (leq[i * n + j] && leq[j * n + k] && !leq[i * n + k]) ok = false;
      }
    if (ok) out.push_back(leq);
  }
  return out;
}

// Natural transformations between presheaves on the walking arrow 0 → 1,
// by direct enumeration of both components.
std::set<Components> arrow_nats(const SetPresheaf& f, const SetPresheaf& g) {
  const int s = 1;  // the non-identity arrow
  std::set<Components> out;
  auto all_maps = [](int from, int to) {
    std::vector<std::vector<int>> maps;
    std::vector<int> m(from, 0);
    if (from > 0 && to == 0) return maps;
    for (;;) {
      maps.push_back(m);
      int i = 0;
      while (i < from && ++m[i] == to) m[i++] = 0;
      if (i == from) break;
    }
    return maps;
  };
  for (const auto& a0 : all_maps(f.size(0), g.size(0)))
    for (const auto& a1 : all_maps(f.size(1), g.size(1))) {
      bool ok = true;
      for (int e = 0; e < f.size(0) && ok; ++e)
        if (a1[f.apply(s, e)] != g.apply(s, a0[e])) ok = false;
      if (ok) out.insert({a0, a1});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Law suites shared by criteria 2, 3 and 10.

/// Criterion 2 on one Z/2 model: the three hom values agree on every triple.
/// With `formulas`, ∘, /, \ must also match the unmutated table formulas.
Verdict biclosed_triples(const Probicategory<QuantaleV>& p, int& triples,
                         bool formulas = true) {
  const Quantale& q = p.hom(0, 0)->quantale();
  const auto cells = enumerate_presheaves(p.hom(0, 0));
  for (const auto& f : cells)
    for (const auto& g : cells)
      for (const auto& h : cells) {
        ++triples;
        const VPresheaf fg = conv_compose(p, 0, 0, 0, f, g);
        const VPresheaf hg = right_residual(p, 0, 0, 0, h, g);
        const VPresheaf fh = left_residual(p, 0, 0, 0, f, h);
        const int h1 = presheaf_hom(fg, h).element;
        const int h2 = presheaf_hom(f, hg).element;
        const int h3 = presheaf_hom(g, fh).element;
        const bool match = !formulas || fg.values() == table_compose(q, f.values(), g.values()) &&
                              hg.values() == table_right(q, h.values(), g.values()) &&
                              fh.values() == table_left(q, f.values(), h.values()) &&
                              h1 == table_hom(q, fg.values(), h.values());
        if (h1 != h2 || h1 != h3 || !match)
          return {false, "F=" + str(f.values()) + " G=" + str(g.values()) +
                             " H=" + str(h.values()) + " homs " + std::to_string(h1) + "," +
                             std::to_string(h2) + "," + std::to_string(h3)};
      }
  return {};
}

/// Associativity and both unit laws; every isomorphism comes with a witness
/// that is checked here, independently of the search that produced it.
template <class V>
Verdict monoid_laws(const Probicategory<V>& p, const Scope<V>& scope, long& witnesses) {
  using Pr = PresheafOf<V>;
  const int n = p.size();
  auto iso = [&](const Pr& a, const Pr& b) {
    const auto w = isomorphic(a, b);
    if (!w || !verify_iso(a, b, *w)) return false;
    ++witnesses;
    return true;
  };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (std::size_t i = 0; i < scope.at(x, y).size(); ++i) {
        const Pr& f = scope.at(x, y)[i];
        if (!iso(conv_compose(p, x, y, y, conv_identity(p, y), f), f))
          return {false, "I∘F not isomorphic to F for cell " + std::to_string(i)};
        if (!iso(conv_compose(p, x, x, y, f, conv_identity(p, x)), f))
          return {false, "F∘I not isomorphic to F for cell " + std::to_string(i)};
      }
  for (int w = 0; w < n; ++w)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          const auto& fs = scope.at(y, z);
          const auto& gs = scope.at(x, y);
          const auto& hs = scope.at(w, x);
          std::vector<std::vector<Pr>> fg(fs.size()), gh(gs.size());
          for (std::size_t i = 0; i < fs.size(); ++i)
            for (const auto& g : gs) fg[i].push_back(conv_compose(p, x, y, z, fs[i], g));
          for (std::size_t j = 0; j < gs.size(); ++j)
            for (const auto& h : hs) gh[j].push_back(conv_compose(p, w, x, y, gs[j], h));
          for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = 0; j < gs.size(); ++j)
              for (std::size_t k = 0; k < hs.size(); ++k)
                if (!iso(conv_compose(p, w, x, z, fg[i][j], hs[k]),
                         conv_compose(p, w, y, z, fs[i], gh[j][k])))
                  return {false, "(F∘G)∘H vs F∘(G∘H) at cells " + std::to_string(i) + "," +
                                     std::to_string(j) + "," + std::to_string(k)};
        }
  return {};
}

// ---------------------------------------------------------------------------
// The criteria.

Verdict c1_quantales() {
  std::vector<std::pair<std::string, Quantale>> qs{{"boolean", Quantale::boolean()},
                                                   {"chain(3)", Quantale::chain(3)},
                                                   {"chain(5)", Quantale::chain(5)},
                                                   {"tropical(3)", Quantale::tropical(3)},
                                                   {"tropical(7)", Quantale::tropical(7)}};
  long triples = 0;
  for (const auto& [name, q] : qs) {
    const Validation v = check_quantale(q);
    if (!v.ok) return {false, name + ": " + v.law + " " + v.witness.dump()};
    const int n = q.size();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          ++triples;
          // a ⊗ b ≤ c iff b ≤ [a, c], with [a, c] taken as the largest such b.
          if (q.leq(q.tensor(a, b), c) != q.leq(b, q.residual(a, c)))
            return {false, name + ": residuation fails at " + std::to_string(a) + "," +
                               std::to_string(b) + "," + std::to_string(c)};
        }
  }
  return {true, "5 quantales, " + std::to_string(triples) + " residuation triples"};
}

Verdict c2_biclosed() {
  int tb = 0, tc = 0;
  Verdict v = biclosed_triples(z2_over(quantale(Quantale::boolean())), tb);
  if (!v.ok) return {false, "boolean: " + v.detail};
  v = biclosed_triples(z2_over(quantale(Quantale::chain(3))), tc);
  if (!v.ok) return {false, "chain(3): " + v.detail};
  if (tb != 64 || tc != 729)
    return {false, "triple counts " + std::to_string(tb) + ", " + std::to_string(tc)};
  return {true, "boolean 64/64, chain(3) 729/729 triples agree"};
}

Verdict c3_monoid() {
  long w1 = 0, w2 = 0, w3 = 0;
  auto pq = z2_over(quantale(Quantale::boolean()));
  Verdict v = monoid_laws(pq, default_scope(pq), w1);
  if (!v.ok) return {false, "Z/2 quantale: " + v.detail};
  auto ps = delooped_monoid(2, z2_table, 0);
  v = monoid_laws(ps, default_scope(ps, 2), w2);
  if (!v.ok) return {false, "Z/2 sets: " + v.detail};
  auto pm = manifold({share(walking_arrow())});
  // Convolution preserves isomorphism, so one presheaf per iso class covers
  // the whole size-2 scope.
  v = monoid_laws(pm, default_scope(pm, 2, true), w3);
  if (!v.ok) return {false, "manifold over 2: " + v.detail};
  return {true, "verified witnesses: Z/2 quantale " + std::to_string(w1) + ", Z/2 sets " +
                    std::to_string(w2) + ", manifold over 2 " + std::to_string(w3) +
                    " (iso classes)"};
}

Verdict c4_coend() {
  std::vector<CatPtr> bases{share(walking_arrow()), share(parallel_pair()),
                            share(delooping(2, z2_table, 0)), share(chain_category(3)),
                            share(discrete_category(2))};
  std::mt19937 rng(20261019);
  int tested = 0;
  while (tested < 50) {
    const CatPtr& k = bases[rng() % bases.size()];
    const auto ws = enumerate_presheaves(k, 2);
    const auto ds = enumerate_presheaves(op(k), 2);
    const SetPresheaf& w = ws[rng() % ws.size()];
    const SetPresheaf& d = ds[rng() % ds.size()];
    int total = 0;
    for (int x = 0; x < k->num_objects(); ++x) total += w.size(x) * d.size(x);
    if (total > 12) continue;
    ++tested;
    const SetPresheaf dd(prod(op(k), terminal()), d.sizes(), d.action());
    const SetColimit c = weighted_colimit(w, dd, *terminal(), *k, terminal());
    const std::vector<int> expect = cocone_partition(w, d, *k);
    std::vector<int> got;
    for (int x = 0; x < k->num_objects(); ++x)
      for (int e = 0; e < w.size(x); ++e)
        for (int y = 0; y < d.size(x); ++y) got.push_back(c.injection(0, x, e, y));
    const int classes = expect.empty() ? 0 : *std::max_element(expect.begin(), expect.end()) + 1;
    if (got != expect || c.value.size(0) != classes)
      return {false, "random instance " + std::to_string(tested) + " disagrees"};
  }
  auto q = quantale(Quantale::boolean());
  int posetal = 0;
  for (int n = 1; n <= 3; ++n)
    for (const auto& leq : partial_orders(n)) {
      auto k = share(poset_category(n, leq));
      auto vk = share(enriched_poset(q, n, leq));
      for (const auto& w : enumerate_presheaves(k, 1))
        for (const auto& d : enumerate_presheaves(op(k), 1)) {
          ++posetal;
          const SetPresheaf dd(prod(op(k), terminal()), d.sizes(), d.action());
          const int set_size = weighted_colimit(w, dd, *terminal(), *k, terminal()).value.size(0);
          const VPresheaf v = weighted_colimit_value(
              VPresheaf(vk, w.sizes()), VPresheaf(prod(op(vk), terminal(q)), d.sizes()),
              *terminal(q), *vk, terminal(q));
          if ((set_size > 0) != (v[0] == q->unit()))
            return {false, "posetal instance " + std::to_string(posetal) + " disagrees"};
        }
    }
  return {true, "50 random instances, " + std::to_string(posetal) + " posetal instances"};
}

Verdict c5_reflection() {
  auto p = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  const auto scope = default_scope(p, 2);
  const Localisation<SetV> l = localise_probicat(p, sigma, scope);
  if (l.condition == 0) return {false, "no condition among 1-6 verified"};
  // Local cells counted directly: F(s) a bijection.
  std::size_t local = 0;
  for (const auto& f : scope.at(0, 0)) {
    std::vector<int> m = f.map(1);
    std::sort(m.begin(), m.end());
    bool bij = f.size(0) == f.size(1);
    for (int i = 0; bij && i < static_cast<int>(m.size()); ++i) bij = m[i] == i;
    if (bij) ++local;
  }
  if (l.setup.local.at(0, 0).size() != local) return {false, "local family size mismatch"};
  if (!l.report.passed())
    return {false, l.report.first_failure()->name + " " +
                       l.report.first_failure()->result.detail};
  const Report strong = verify_strong(l.setup, *l.structure);
  const Report bic = biclosed_validate(*l.structure, l.setup.local);
  if (!strong.passed() || !bic.passed()) return {false, "strength or biclosedness failed"};
  std::string held;
  for (int k = 1; k <= 6; ++k)
    if (reflection_condition(l.setup, k).passed()) held += std::to_string(k);
  return {true, "conditions held: " + held + "; first " + std::to_string(l.condition) + ", " +
                    std::to_string(local) + " local cells"};
}

Verdict c6_localisation() {
  auto p = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  const auto scope = enumerate_presheaves(p.hom(0, 0), 2);
  std::vector<SetPresheaf> local;
  for (const auto& g : scope)
    if (is_local(sigma, 0, 0, g).ok) local.push_back(g);
  long pairs = 0;
  for (const auto& f : scope) {
    const Reflection<SetV> r = localise_reflect(sigma, 0, 0, f);
    const Reflection<SetV> rr = localise_reflect(sigma, 0, 0, r.value);
    if (!(rr.value == r.value)) return {false, "ψψF differs from ψF"};
    if (r.value.size(0) != f.size(1) || r.value.size(1) != f.size(1))
      return {false, "ψF is not F(1) at both objects"};
    for (const auto& g : local) {
      ++pairs;
      // φ ↦ φ∘η must be a bijection hom(ψF, G) → hom(F, G).
      const auto from = arrow_nats(r.value, g);
      const auto to = arrow_nats(f, g);
      std::set<Components> image;
      for (const auto& phi : from) {
        Components c(2);
        for (int x = 0; x < 2; ++x)
          for (int e : r.unit[x]) c[x].push_back(phi[x][e]);
        image.insert(c);
      }
      if (image.size() != from.size() || image != to)
        return {false, "universal property fails for a scope pair"};
    }
  }
  // Quantale height bound: sweeps ≤ |Q| · |objects|.
  auto q = quantale(Quantale::chain(3));
  auto c = share(enriched_chain(q, 3));
  auto p3 = from_monoidal(c, {0, 0, 0, 0, 1, 1, 0, 1, 2}, 2);
  const SigmaSet s3{make_sigma(p3, 0, 0, 0, 2)};
  int worst = 0;
  for (const auto& f : enumerate_presheaves(c)) {
    const auto r = localise_reflect(s3, 0, 0, f);
    worst = std::max(worst, r.sweeps);
    if (r.sweeps > q->size() * c->num_objects()) return {false, "height bound exceeded"};
    if (!(localise_reflect(s3, 0, 0, r.value).value == r.value))
      return {false, "quantale reflection not idempotent"};
  }
  // A free inverse on a parallel pair has no finite reflection.
  auto pp = share(parallel_pair());
  bool raised = false;
  try {
    localise_reflect({{0, 0, 0, 1, 1}, {0, 0, 0, 1, 2}}, 0, 0, representable(pp, 0), 16);
  } catch (const DivergenceError& e) {
    raised = e.sweeps() == 16;
  }
  if (!raised) return {false, "divergent case returned"};
  return {true, std::to_string(scope.size()) + " presheaves, " + std::to_string(pairs) +
                    " universal-property pairs, max sweeps " + std::to_string(worst) +
                    ", divergence raised"};
}

Verdict c7_yoneda() {
  long pairs = 0;
  for (const auto& q : {Quantale::boolean(), Quantale::chain(3)}) {
    auto qq = quantale(q);
    auto p = z2_over(qq);
    const auto s = yoneda_extension(p, every_presheaf(p));
    const Report r = compare_with_oracle(s, OracleMode::yoneda);
    if (!r.passed()) return {false, r.first_failure()->name};
    for (const char* op : {"compose[000]", "right_residual[000]", "left_residual[000]"})
      pairs += r.at(op).witness.at("pairs").get<long>();
    // The extended operations against the table formulas.
    const Structure<QuantaleV> t = extension_structure(s);
    if (t.identity(0).values() != std::vector<int>{qq->unit(), qq->bottom()})
      return {false, "identity differs from the table"};
    for (const auto& f : s.scope.at(0, 0))
      for (const auto& g : s.scope.at(0, 0))
        if (t.compose(0, 0, 0, f, g).values() != table_compose(q, f.values(), g.values()) ||
            t.right_residual(0, 0, 0, f, g).values() != table_right(q, f.values(), g.values()) ||
            t.left_residual(0, 0, 0, f, g).values() != table_left(q, f.values(), g.values()))
          return {false, "extension differs from the table formulas"};
  }
  return {true, "∘, I, /, \\ matched; " + std::to_string(pairs) + " operation pairs witnessed"};
}

Verdict c8_localisation_oracle() {
  auto p = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  const auto s = localisation_extension(p, sigma, default_scope(p, 2));
  const Report r = compare_with_oracle(s, OracleMode::localisation);
  if (!r.passed()) return {false, r.first_failure()->name};
  return {true, std::to_string(s.scope.at(0, 0).size()) + " local cells, " +
                    std::to_string(r.entries().size()) + " comparisons"};
}

Verdict c9_hypotheses() {
  auto pb = z2_over(quantale(Quantale::boolean()));
  if (!ext_iso_check(yoneda_extension(pb, every_presheaf(pb))).passed())
    return {false, "Yoneda setup fails"};
  auto pa = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(pa, 0, 0, 1)};
  if (!ext_iso_check(localisation_extension(pa, sigma, default_scope(pa, 2))).passed())
    return {false, "localisation setup fails"};
  // N 0 = (1, 0), N 1 = (0, 0): the second coordinate is never reached.
  const VCatPtr& a = pb.hom(0, 0);
  const VPresheaf n(prod(op(a), a), {1, 0, 0, 0});
  const auto s = make_extension(pb, {a}, identity_reflector<QuantaleV>(), {n}, every_presheaf(pb));
  const Report r = ext_iso_check(s);
  if (r.passed()) return {false, "non-dense N passed"};
  const json w = r.first_failure()->result.witness;
  if (!w.contains("C") || !w.contains("A")) return {false, "failure lacks a witness"};
  return {true, "both special cases pass; non-dense N fails at " + r.first_failure()->name +
                    " with C=" + w.at("object").dump()};
}

Verdict c10_mutations() {
  const Model m = parse_model_file(std::string(PROBICAT_MODEL_DIR) + "/z2_boolean.json");
  const auto& p = std::get<Probicategory<QuantaleV>>(m.probicategories.at("z2").p);
  const VPresheaf& base = p.P(0, 0, 0);
  const int entries = static_cast<int>(base.values().size());
  auto mutate = [&](int entry) {
    std::vector<int> v = base.values();
    v[entry] = 1 - v[entry];
    return p.with_structure(0, 0, 0, VPresheaf(base.base_ptr(), v));
  };
  auto detected = [&](const Probicategory<QuantaleV>& q) {
    int triples = 0;
    long witnesses = 0;
    // Laws only: a mutated table differs from the Z/2 formulas by design.
    return !biclosed_triples(q, triples, false).ok ||
           !monoid_laws(q, default_scope(q), witnesses).ok;
  };
  // The ten random draws, then every entry, since the claim is about any entry.
  std::mt19937 rng(20261019);
  int caught = 0;
  for (int trial = 0; trial < 10; ++trial)
    if (detected(mutate(static_cast<int>(rng() % entries)))) ++caught;
  std::vector<std::string> missed;
  for (int entry = 0; entry < entries; ++entry) {
    const auto q = mutate(entry);
    if (detected(q)) continue;
    // An undetected flip must really be lawful, not a blind spot of the suite.
    if (!check_probicat(q, default_scope(q)).passed())
      return {false, "suite misses an unlawful flip at entry " + std::to_string(entry)};
    const int a = entry / 4, b = (entry / 2) % 2, c = entry % 2;
    missed.push_back("P(" + std::to_string(a) + "," + std::to_string(b) + ";" +
                     std::to_string(c) + ")->" + std::to_string(1 - base.values()[entry]));
  }
  std::string detail = std::to_string(caught) + "/10 random flips detected, " +
                       std::to_string(entries - static_cast<int>(missed.size())) + "/" +
                       std::to_string(entries) + " entries detected";
  if (!missed.empty()) {
    detail += "; lawful after flipping";
    for (const auto& e : missed) detail += " " + e;
  }
  return {caught == 10 && missed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_failures;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc) {
      expected_failures.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: acceptance [--expect-fail N ...]\n");
      return 2;
    }
  }
  const std::vector<Criterion> criteria{
      {1, "quantale laws and residuation", 1, c1_quantales},
      {2, "convolution biclosedness on Z/2", 5, c2_biclosed},
      {3, "convolution monoid laws", 30, c3_monoid},
      {4, "set coend oracle and subsingleton dictionary", 30, c4_coend},
      {5, "reflection theorem on the walking arrow", 30, c5_reflection},
      {6, "localisation invariants", 10, c6_localisation},
      {7, "extension along Yoneda is convolution", 30, c7_yoneda},
      {8, "extension along a localisation matches localise", 60, c8_localisation_oracle},
      {9, "isomorphism hypotheses and a non-dense counterexample", 10, c9_hypotheses},
      {10, "mutation sensitivity on the Z/2 model", 30, c10_mutations},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool ok = v.ok && in_time;
    if (!in_time) v.detail += "; over the time limit";
    std::printf("criterion %2d: %s  %-52s tolerance exact  runtime %.3f s (limit %.0f s)  %s\n",
                c.id, ok ? "PASS" : "FAIL", c.title, secs, c.limit_s, v.detail.c_str());
    std::fflush(stdout);
    if (!ok && !expected_failures.count(c.id)) ++unexpected;
  }
  if (!expected_failures.empty()) {
    std::printf("expected failures:");
    for (int k : expected_failures) std::printf(" %d", k);
    std::printf("\n");
  }
  return unexpected == 0 ? 0 : 1;
}
