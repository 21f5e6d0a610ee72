#include <catch_amalgamated.hpp>

#include <chrono>
#include <numeric>
#include <vector>

#include <probicat/probicat.hpp>

using namespace probicat;

namespace {

QuantalePtr boolean() { return std::make_shared<const Quantale>(Quantale::boolean()); }
QuantalePtr chain3() { return std::make_shared<const Quantale>(Quantale::chain(3)); }

const std::vector<int> z2_table{0, 1, 1, 0};

// (F∘G)(c) = ⋁_{a·b = c} F(a) ⊗ G(b), straight from the table.
std::vector<int> oracle_compose(const Quantale& q, const std::vector<int>& f,
                                const std::vector<int>& g) {
  std::vector<int> out(2, q.bottom());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const int c = z2_table[a * 2 + b];
      out[c] = q.join(out[c], q.tensor(f[a], g[b]));
    }
  return out;
}

// (H/G)(a) = ⋀_b [G(b), H(a·b)].
std::vector<int> oracle_right(const Quantale& q, const std::vector<int>& h,
                              const std::vector<int>& g) {
  std::vector<int> out(2, q.top());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out[a] = q.meet(out[a], q.residual(g[b], h[z2_table[a * 2 + b]]));
  return out;
}

// (F\H)(b) = ⋀_a [F(a), H(a·b)].
std::vector<int> oracle_left(const Quantale& q, const std::vector<int>& f,
                             const std::vector<int>& h) {
  std::vector<int> out(2, q.top());
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < 2; ++a)
      out[b] = q.meet(out[b], q.residual(f[a], h[z2_table[a * 2 + b]]));
  return out;
}

// Profunctor composite over a finite category A, computed by an explicit
// union-find on triples (b, f, g) with f ∈ F(b, c), g ∈ G(a, b) for fixed
// (a, c). F, G are presheaves on A^op × A with object (x, y) = x·n + y.
int oracle_profunctor_size(const FinCategory& a, const SetPresheaf& f,
                           const SetPresheaf& g, int x, int z) {
  const int n = a.num_objects(), m = a.num_morphisms();
  struct Elt { int b, u, v; };
  std::vector<Elt> elts;
  for (int b = 0; b < n; ++b)
    for (int u = 0; u < f.size(b * n + z); ++u)
      for (int v = 0; v < g.size(x * n + b); ++v) elts.push_back({b, u, v});
  std::vector<int> parent(elts.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  auto index = [&](int b, int u, int v) {
    for (std::size_t i = 0; i < elts.size(); ++i)
      if (elts[i].b == b && elts[i].u == u && elts[i].v == v) return int(i);
    return -1;
  };
  const int idx = a.identity(x), idz = a.identity(z);
  // For k: b → b′ the coend identifies (b, F(k, id) u, v) with
  // (b′, u, G(id, k) v).
  for (int k = 0; k < m; ++k) {
    const int b = a.source(k), b2 = a.target(k);
    // In A^op × A the morphism (k, id_z) runs from (b′, z) to (b, z).
    const int fk = k * m + idz;
    const int gk = idx * m + k;
    for (int u = 0; u < f.size(b2 * n + z); ++u)
      for (int v = 0; v < g.size(x * n + b); ++v) {
        const int i = index(b, f.apply(fk, u), v);
        const int j = index(b2, u, g.apply(gk, v));
        parent[find(i)] = find(j);
      }
  }
  int classes = 0;
  for (std::size_t i = 0; i < elts.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++classes;
  return classes;
}

}  // namespace

TEST_CASE("Boolean Z/2: convolution and residuals match the table formulas") {
  auto q = boolean();
  auto p = delooped_monoid(q, 2, z2_table, 0, {"e", "s"});
  const auto all = enumerate_presheaves(p.hom(0, 0));
  REQUIRE(all.size() == 4);
  for (const auto& f : all)
    for (const auto& g : all) {
      CHECK(conv_compose(p, 0, 0, 0, f, g).values() ==
            oracle_compose(*q, f.values(), g.values()));
      CHECK(right_residual(p, 0, 0, 0, f, g).values() ==
            oracle_right(*q, f.values(), g.values()));
      CHECK(left_residual(p, 0, 0, 0, f, g).values() ==
            oracle_left(*q, f.values(), g.values()));
    }
  const VCatPtr& a = p.hom(0, 0);
  CHECK(conv_compose(p, 0, 0, 0, VPresheaf(a, {0, 1}), VPresheaf(a, {0, 1}))
            .values() == std::vector<int>{1, 0});
  CHECK(conv_identity(p, 0).values() == std::vector<int>{1, 0});
  CHECK(right_residual(p, 0, 0, 0, VPresheaf(a, {1, 0}), VPresheaf(a, {1, 1}))
            .values() == std::vector<int>{0, 0});
}

TEST_CASE("quantale validation covers the whole carrier") {
  SECTION("Boolean: 4^3 adjunction triples") {
    auto p = delooped_monoid(boolean(), 2, z2_table, 0);
    const Report r = check_probicat(p, default_scope(p));
    CHECK(r.passed());
    CHECK(r.at("adjunction[000]").witness.at("triples") == 64);
  }
  SECTION("three-element chain: 9^3 adjunction triples") {
    auto q = chain3();
    auto p = delooped_monoid(q, 2, z2_table, 0);
    const Report r = check_probicat(p, default_scope(p));
    CHECK(r.passed());
    CHECK(r.at("adjunction[000]").witness.at("triples") == 729);
    // Oracle values on the chain as well.
    for (const auto& f : enumerate_presheaves(p.hom(0, 0)))
      for (const auto& g : enumerate_presheaves(p.hom(0, 0)))
        CHECK(conv_compose(p, 0, 0, 0, f, g).values() ==
              oracle_compose(*q, f.values(), g.values()));
  }
}

TEST_CASE("a mutated structure table is rejected") {
  auto q = boolean();
  auto p = delooped_monoid(q, 2, z2_table, 0);
  std::vector<int> v = p.P(0, 0, 0).values();
  REQUIRE(v[0] == q->unit());
  v[0] = q->bottom();  // e·e no longer lands on e
  auto bad = p.with_structure(0, 0, 0, VPresheaf(p.P(0, 0, 0).base_ptr(), v));
  const Report r = check_probicat(bad, default_scope(bad));
  CHECK_FALSE(r.passed());
  REQUIRE(r.first_failure());
  CHECK(r.first_failure()->result.witness.contains("F"));
}

TEST_CASE("set backend: convolution over a delooped monoid") {
  SECTION("trivial monoid multiplies cardinalities") {
    auto p = delooped_monoid(1, {0}, 0);
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b) {
        SetPresheaf f = constant_presheaf(p.hom(0, 0), a);
        SetPresheaf g = constant_presheaf(p.hom(0, 0), b);
        CHECK(conv_compose(p, 0, 0, 0, f, g).size(0) == a * b);
      }
    CHECK(conv_identity(p, 0).size(0) == 1);
  }
  SECTION("Z/2 as a discrete monoid: disjoint unions over the table") {
    auto p = delooped_monoid(2, z2_table, 0);
    for (const auto& f : enumerate_presheaves(p.hom(0, 0), 2))
      for (const auto& g : enumerate_presheaves(p.hom(0, 0), 2)) {
        const SetPresheaf fg = conv_compose(p, 0, 0, 0, f, g);
        for (int c = 0; c < 2; ++c) {
          int expected = 0;
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
              if (z2_table[a * 2 + b] == c) expected += f.size(a) * g.size(b);
          CHECK(fg.size(c) == expected);
        }
      }
    CHECK(check_probicat(p, default_scope(p, 2)).passed());
  }
}

TEST_CASE("from_monoidal: walking arrow with meet") {
  auto a = share(walking_arrow());
  const MonoidalData m = thin_monoidal(*a, {0, 0, 0, 1}, 1);
  CHECK(check_monoidal(*a, m).ok);
  auto p = from_monoidal(a, m);
  const SetPresheaf j = conv_identity(p, 0);
  CHECK(j.sizes() == std::vector<int>{0, 1});
  const Report r = check_probicat(p, default_scope(p, 2));
  INFO(r.to_json().dump());
  CHECK(r.passed());
}

TEST_CASE("from_monoidal rejects incoherent data") {
  auto a = share(walking_arrow());
  MonoidalData m = thin_monoidal(*a, {0, 0, 0, 1}, 1);
  m.left_unitor[1] = 1;  // s: 0 → 1 is not a component I⊗1 → 1
  CHECK_FALSE(check_monoidal(*a, m).ok);
  CHECK_THROWS_AS(from_monoidal(a, m), InputError);
}

TEST_CASE("check_probicat names a broken action") {
  auto c = share(delooping(2, z2_table, 0, {"e", "s"}));
  MonoidalData m;
  m.tensor_objects = {0};
  m.tensor_morphisms = z2_table;
  m.unit = 0;
  m.associator = {0};
  m.left_unitor = {0};
  m.right_unitor = {0};
  auto p = from_monoidal(c, m);
  CHECK(check_probicat(p, default_scope(p, 2)).passed());

  const SetPresheaf& pp = p.P(0, 0, 0);
  auto act = pp.action();
  const int s = c->find_morphism("s");
  const int mk = c->num_morphisms();
  const int broken = (s * mk + 0) * mk + 0;
  act[broken] = {0, 0};
  auto bad = p.with_structure(0, 0, 0, SetPresheaf(pp.base_ptr(), pp.sizes(), act));
  const Report r = check_probicat(bad, default_scope(bad, 1));
  REQUIRE_FALSE(r.passed());
  const auto& failure = r.first_failure()->result;
  CHECK(failure.law == "functoriality");
  CHECK(failure.witness.contains("morphism"));
}

TEST_CASE("manifold composition is profunctor composition") {
  auto a = share(walking_arrow());
  auto p = manifold({a});
  for (int x = 0; x < 1; ++x) CHECK(check_presheaf(p.P(0, 0, 0)).ok);
  // J is the hom profunctor, and so is the unit for composition.
  const SetPresheaf j = conv_identity(p, 0);
  CHECK(isomorphic(j, p.J(0)));
  const auto scope = enumerate_presheaves(p.hom(0, 0), 1);
  for (const auto& f : scope)
    for (const auto& g : scope) {
      const SetPresheaf fg = conv_compose(p, 0, 0, 0, f, g);
      for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
          CHECK(fg.size(x * 2 + z) == oracle_profunctor_size(*a, f, g, x, z));
    }
}

TEST_CASE("manifold over two objects") {
  auto a = share(walking_arrow());
  auto one = share(terminal_category());
  auto p = manifold({a, one});
  Scope<SetV> s = default_scope(p, 1);
  const Report r = check_probicat(p, s);
  INFO(r.to_json().dump());
  CHECK(r.passed());
}

TEST_CASE("quantale manifold is V-profunctor composition") {
  auto q = boolean();
  auto a = share(enriched_chain(q, 2));
  auto p = manifold({a});
  const Report r = check_probicat(p, default_scope(p));
  CHECK(r.passed());
  // (F∘G)(x, z) = ⋁_b F(b, z) ∧ G(x, b).
  for (const auto& f : enumerate_presheaves(p.hom(0, 0)))
    for (const auto& g : enumerate_presheaves(p.hom(0, 0))) {
      const VPresheaf fg = conv_compose(p, 0, 0, 0, f, g);
      for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z) {
          int v = q->bottom();
          for (int b = 0; b < 2; ++b)
            v = q->join(v, q->tensor(f[b * 2 + z], g[x * 2 + b]));
          CHECK(fg[x * 2 + z] == v);
        }
    }
}

TEST_CASE("induced maps on composites and residuals") {
  auto p = delooped_monoid(2, z2_table, 0);
  const CatPtr& a = p.hom(0, 0);
  SetPresheaf f(a, {1, 0}, {{0}, {}});
  SetPresheaf f2(a, {1, 1}, {{0}, {0}});
  SetPresheaf g(a, {0, 1}, {{}, {0}});
  // f ⇒ f2 includes the single element.
  const Components alpha{{0}, {}};
  const Components id_g = identity_components(g);
  const SetPresheaf fg = conv_compose(p, 0, 0, 0, f, g);
  const SetPresheaf f2g = conv_compose(p, 0, 0, 0, f2, g);
  const Components m = conv_compose_map(p, 0, 0, 0, f, g, f2, g, alpha, id_g);
  CHECK(check_natural(fg, f2g, m).ok);

  SetPresheaf h(a, {2, 1}, {{0, 1}, {0}});
  const SetResidual r_f2 = left_residual_data(p, 0, 0, 0, f2, h);
  const SetResidual r_f = left_residual_data(p, 0, 0, 0, f, h);
  const Components back = left_residual_map(r_f2, r_f, alpha, 2, 2);
  CHECK(check_natural(r_f2.value(), r_f.value(), back).ok);

  const SetResidual q_g2 = right_residual_data(p, 0, 0, 0, h, f2);
  const SetResidual q_g = right_residual_data(p, 0, 0, 0, h, f);
  const Components back2 = right_residual_map(q_g2, q_g, alpha, 2, 2);
  CHECK(check_natural(q_g2.value(), q_g.value(), back2).ok);
}
