#include <catch_amalgamated.hpp>

#include <set>
#include <vector>

#include <probicat/localise.hpp>

using namespace probicat;

namespace {

// The walking arrow 0 → 1 with ∧ as tensor and 1 as unit.
Probicategory<SetV> walking_arrow_meet() {
  auto a = share(walking_arrow());
  return from_monoidal(a, thin_monoidal(*a, {0, 0, 0, 1}, 1));
}

Probicategory<QuantaleV> boolean_arrow() {
  auto q = std::make_shared<const Quantale>(Quantale::boolean());
  return from_monoidal(share(enriched_chain(q, 2)), {0, 0, 0, 1}, 1);
}

}  // namespace

TEST_CASE("locality") {
  auto p = walking_arrow_meet();
  const CatPtr& a = p.hom(0, 0);
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  SECTION("every presheaf is local for the empty set") {
    for (const auto& f : enumerate_presheaves(a, 2))
      CHECK(is_local({}, 0, 0, f).ok);
  }
  SECTION("bijection test and witness") {
    CHECK(is_local(sigma, 0, 0, SetPresheaf(a, {2, 2}, {{0, 1}, {0, 1}, {0, 1}})).ok);
    const Validation v =
        is_local(sigma, 0, 0, SetPresheaf(a, {2, 1}, {{0, 1}, {0, 0}, {0}}));
    CHECK_FALSE(v.ok);
    CHECK(v.witness.at("morphism") == 1);
  }
  SECTION("the representable at the target is not local") {
    CHECK_FALSE(is_local(sigma, 0, 0, representable(a, 1)).ok);
  }
  CHECK_THROWS_AS(make_sigma(p, 0, 0, 7), InputError);
}

TEST_CASE("set reflection on the walking arrow agrees with the Kan extension") {
  // Inverting s collapses 2 onto 1; Lan along 2 → 1 of F is its colimit,
  // which is F(1) because 1 is terminal. So ψF is F(1) at both objects.
  auto p = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  for (const auto& f : enumerate_presheaves(p.hom(0, 0), 3)) {
    const Reflection<SetV> r = localise_reflect(sigma, 0, 0, f);
    CHECK(r.value.size(0) == f.size(1));
    CHECK(r.value.size(1) == f.size(1));
    CHECK(is_local(sigma, 0, 0, r.value).ok);
    CHECK(check_natural(f, r.value, r.unit).ok);
    CHECK(is_bijective({r.unit[1]}, SetPresheaf(share(terminal_category()),
                                                {r.value.size(1)},
                                                {std::vector<int>(r.value.size(1))})) ==
          true);
  }
  SECTION("the documented collapse") {
    SetPresheaf f(p.hom(0, 0), {2, 1}, {{0, 1}, {0, 0}, {0}});
    const Reflection<SetV> r = localise_reflect(sigma, 0, 0, f);
    CHECK(r.value.sizes() == std::vector<int>{1, 1});
    CHECK(r.unit[0] == std::vector<int>{0, 0});
  }
  SECTION("local presheaves are fixed") {
    SetPresheaf f(p.hom(0, 0), {2, 2}, {{0, 1}, {1, 0}, {0, 1}});
    const Reflection<SetV> r = localise_reflect(sigma, 0, 0, f);
    CHECK(r.value == f);
    CHECK(r.unit == identity_components(f));
    CHECK(r.sweeps == 0);
  }
}

TEST_CASE("set reflection: idempotence and the universal property") {
  auto p = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  const auto scope = enumerate_presheaves(p.hom(0, 0), 2);
  std::vector<SetPresheaf> local;
  for (const auto& g : scope)
    if (is_local(sigma, 0, 0, g).ok) local.push_back(g);
  REQUIRE(local.size() >= 3);
  for (const auto& f : scope) {
    const Reflection<SetV> r = localise_reflect(sigma, 0, 0, f);
    const Reflection<SetV> rr = localise_reflect(sigma, 0, 0, r.value);
    CHECK(rr.value == r.value);
    CHECK(rr.unit == identity_components(r.value));
    for (const auto& g : local) {
      // Precomposition with η is a bijection hom(ψF, G) → hom(F, G).
      const auto from = natural_transformations(r.value, g);
      const auto to = natural_transformations(f, g);
      std::set<Components> image;
      for (const auto& phi : from) image.insert(compose_components(phi, r.unit));
      CHECK(image.size() == from.size());
      CHECK(std::set<Components>(to.begin(), to.end()) == image);
    }
  }
}

TEST_CASE("ψ on maps commutes with the units") {
  auto p = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  const auto scope = enumerate_presheaves(p.hom(0, 0), 2);
  for (const auto& f : scope)
    for (const auto& g : scope)
      for (const auto& beta : natural_transformations(f, g)) {
        const auto rf = localise_reflect(sigma, 0, 0, f);
        const auto rg = localise_reflect(sigma, 0, 0, g);
        const Components m = psi_map(rf, rg, beta);
        CHECK(check_natural(rf.value, rg.value, m).ok);
        CHECK(compose_components(m, rf.unit) == compose_components(rg.unit, beta));
      }
}

TEST_CASE("a free inverse on a parallel pair diverges") {
  // Inverting both arrows of 0 ⇉ 1 makes A(0, −) infinite (a Z-torsor).
  auto pp = share(parallel_pair());
  const SigmaSet sigma{{0, 0, 0, 1, 1}, {0, 0, 0, 1, 2}};
  CHECK_THROWS_AS(localise_reflect(sigma, 0, 0, representable(pp, 0)),
                  DivergenceError);
  try {
    localise_reflect(sigma, 0, 0, representable(pp, 0), 5);
  } catch (const DivergenceError& e) {
    CHECK(e.sweeps() == 5);
  }
  // Inverting f alone still diverges: f⁻¹g is a free endomorphism of 0.
  const SigmaSet one{{0, 0, 0, 1, 1}};
  CHECK_THROWS_AS(localise_reflect(one, 0, 0, representable(pp, 0)), DivergenceError);
  // The terminal presheaf is local and fixed.
  const SetPresheaf t(pp, {1, 1}, {{0}, {0}, {0}, {0}});
  CHECK(localise_reflect(one, 0, 0, t).value == t);
}

TEST_CASE("quantale reflection") {
  auto p = boolean_arrow();
  const SigmaSet sigma{make_sigma(p, 0, 0, 0, 1)};
  const VCatPtr& a = p.hom(0, 0);
  SECTION("the documented closure") {
    const auto r = localise_reflect(sigma, 0, 0, VPresheaf(a, {0, 1}));
    CHECK(r.value.values() == std::vector<int>{1, 1});
  }
  SECTION("lattice-height bound, idempotence and universal property") {
    auto q = std::make_shared<const Quantale>(Quantale::chain(3));
    auto c = share(enriched_chain(q, 3));
    auto p3 = from_monoidal(c, {0, 0, 0, 0, 1, 1, 0, 1, 2}, 2);
    const SigmaSet s3{make_sigma(p3, 0, 0, 0, 2)};
    for (const auto& f : enumerate_presheaves(c)) {
      const auto r = localise_reflect(s3, 0, 0, f);
      CHECK(r.sweeps <= q->size() * c->num_objects());
      CHECK(is_local(s3, 0, 0, r.value).ok);
      CHECK(pointwise_leq(f, r.value));
      CHECK(localise_reflect(s3, 0, 0, r.value).value == r.value);
      for (const auto& g : enumerate_presheaves(c))
        if (is_local(s3, 0, 0, g).ok)
          CHECK(presheaf_hom(r.value, g) == presheaf_hom(f, g));
    }
  }
  CHECK_THROWS_AS(make_sigma(p, 0, 0, 1, 0), InputError);
}

TEST_CASE("localising the walking arrow") {
  auto p = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  const Localisation<SetV> l = localise_probicat(p, sigma, default_scope(p, 2));
  INFO(l.report.to_json().dump());
  CHECK(l.report.passed());
  REQUIRE(l.condition > 0);
  REQUIRE(l.structure);
  // ψ(yA ∘ yA′) ≅ ψyA ∘_C ψyA′ on generators.
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const SetPresheaf ya = representable(p.hom(0, 0), a);
      const SetPresheaf yb = representable(p.hom(0, 0), b);
      const auto& psi = l.setup.psi;
      const SetPresheaf lhs =
          psi.reflect(0, 0, conv_compose(p, 0, 0, 0, ya, yb)).value;
      const SetPresheaf rhs = l.structure->compose(
          0, 0, 0, psi.reflect(0, 0, ya).value, psi.reflect(0, 0, yb).value);
      CHECK(isomorphic(lhs, rhs));
    }
}

TEST_CASE("trivial localisations") {
  auto p = walking_arrow_meet();
  const auto scope = default_scope(p, 2);
  SECTION("empty Σ returns the convolution structure") {
    const Localisation<SetV> l = localise_probicat(p, {}, scope);
    CHECK(l.report.passed());
    CHECK(l.condition == 1);
    for (const auto& f : scope.at(0, 0))
      for (const auto& g : scope.at(0, 0))
        CHECK(l.structure->compose(0, 0, 0, f, g) == conv_compose(p, 0, 0, 0, f, g));
  }
  SECTION("an invertible 2-cell gives the identity localisation") {
    const SigmaSet ids{make_sigma(p, 0, 0, 0)};
    const Localisation<SetV> l = localise_probicat(p, ids, scope);
    CHECK(l.report.passed());
    CHECK(l.setup.local.at(0, 0).size() == scope.at(0, 0).size());
  }
}

TEST_CASE("quantale localisation of the Boolean arrow") {
  auto p = boolean_arrow();
  const SigmaSet sigma{make_sigma(p, 0, 0, 0, 1)};
  const Localisation<QuantaleV> l = localise_probicat(p, sigma, default_scope(p));
  INFO(l.report.to_json().dump());
  CHECK(l.report.passed());
  CHECK(l.condition > 0);
}
