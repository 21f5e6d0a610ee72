#include <catch_amalgamated.hpp>

#include <vector>

#include <probicat/extend.hpp>

using namespace probicat;

namespace {

QuantalePtr boolean() {
  return std::make_shared<const Quantale>(Quantale::boolean());
}

Probicategory<QuantaleV> z2(QuantalePtr q) {
  return delooped_monoid(std::move(q), 2, {0, 1, 1, 0}, 0);
}

Scope<QuantaleV> every_presheaf(const Probicategory<QuantaleV>& p) {
  return Scope<QuantaleV>{1, {enumerate_presheaves(p.hom(0, 0))}};
}

Probicategory<SetV> walking_arrow_meet() {
  auto a = share(walking_arrow());
  return from_monoidal(a, thin_monoidal(*a, {0, 0, 0, 1}, 1));
}

}  // namespace

TEST_CASE("extension along Yoneda on Boolean Z/2") {
  auto p = z2(boolean());
  const auto s = yoneda_extension(p, every_presheaf(p));
  CHECK(s.density.passed());
  SECTION("the documented values") {
    CHECK(ext_Q(s, 0, 0, 0, 1, 1).values() == std::vector<int>{1, 0});
    CHECK(ext_Q(s, 0, 0, 0, 0, 1).values() == std::vector<int>{0, 1});
    CHECK(ext_identity(s, 0).values() == std::vector<int>{1, 0});
  }
  SECTION("Q is P(A, A′, −)") {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          CHECK(ext_Q(s, 0, 0, 0, a, b)[c] == p.P(0, 0, 0)[(a * 2 + b) * 2 + c]);
  }
  SECTION("H at a representable is the residual by that representable") {
    for (const auto& c : s.scope.at(0, 0))
      for (int a = 0; a < 2; ++a) {
        const auto ya = representable(p.hom(0, 0), a);
        CHECK(ext_HK(s, HK::H, 0, 0, 0, a, c) == right_residual(p, 0, 0, 0, c, ya));
        CHECK(ext_HK(s, HK::K, 0, 0, 0, a, c) == left_residual(p, 0, 0, 0, ya, c));
      }
  }
  SECTION("the theorem and the oracle") {
    CHECK(ext_iso_check(s).passed());
    const Extension<QuantaleV> e = extend_structure(s);
    INFO(e.report.to_json().dump());
    CHECK(e.report.passed());
    REQUIRE(e.structure);
    const Report r = compare_with_oracle(s, OracleMode::yoneda);
    CHECK(r.passed());
    CHECK(r.at("compose[000]").witness.at("pairs") == 16);
  }
  SECTION("unit and initial objects") {
    const Structure<QuantaleV> t = extension_structure(s);
    const VPresheaf unit = t.identity(0);
    const VPresheaf bottom(p.hom(0, 0), {0, 0});
    const VPresheaf top(p.hom(0, 0), {1, 1});
    for (const auto& c : s.scope.at(0, 0)) {
      CHECK(t.right_residual(0, 0, 0, c, unit) == c);
      CHECK(t.compose(0, 0, 0, c, bottom) == bottom);
      CHECK(t.right_residual(0, 0, 0, c, bottom) == top);
    }
  }
}

TEST_CASE("extension along Yoneda on chain(3) Z/2") {
  auto p = z2(std::make_shared<const Quantale>(Quantale::chain(3)));
  const auto s = yoneda_extension(p, every_presheaf(p));
  CHECK(s.density.passed());
  CHECK(ext_iso_check(s).passed());
  const Report r = compare_with_oracle(s, OracleMode::yoneda);
  CHECK(r.passed());
  CHECK(r.at("compose[000]").witness.at("pairs") == 81);
}

TEST_CASE("extension along Yoneda in the set backend") {
  SECTION("Z/2") {
    auto p = delooped_monoid(2, {0, 1, 1, 0}, 0);
    const auto s = yoneda_extension(p, default_scope(p, 2));
    CHECK(s.density.passed());
    const Extension<SetV> e = extend_structure(s);
    INFO(e.report.to_json().dump());
    CHECK(e.report.passed());
    CHECK(compare_with_oracle(s, OracleMode::yoneda).passed());
  }
  SECTION("the trivial probicategory extends trivially") {
    auto p = delooped_monoid(1, {0}, 0);
    const auto s = yoneda_extension(p, default_scope(p, 3));
    const Extension<SetV> e = extend_structure(s);
    CHECK(e.report.passed());
    REQUIRE(e.structure);
    for (const auto& f : s.scope.at(0, 0))
      for (const auto& g : s.scope.at(0, 0))
        CHECK(e.structure->compose(0, 0, 0, f, g).size(0) == f.size(0) * g.size(0));
    CHECK(e.structure->identity(0).size(0) == 1);
  }
  SECTION("walking arrow with meet") {
    auto p = walking_arrow_meet();
    const auto s = yoneda_extension(p, default_scope(p, 2));
    CHECK(ext_iso_check(s).passed());
    CHECK(compare_with_oracle(s, OracleMode::yoneda).passed());
  }
}

TEST_CASE("extension along Yoneda followed by a localisation") {
  auto p = walking_arrow_meet();
  const SigmaSet sigma{make_sigma(p, 0, 0, 1)};
  const auto s = localisation_extension(p, sigma, default_scope(p, 2));
  REQUIRE(s.scope.at(0, 0).size() == 4);
  SECTION("N is ψ∘y and dense on the local presheaves") {
    CHECK(s.density.passed());
    // Both representables reflect to the terminal presheaf.
    for (int a = 0; a < 2; ++a) CHECK(s.N_at(0, 0, a).sizes() == std::vector<int>{1, 1});
  }
  SECTION("hypotheses and the oracle") {
    CHECK(ext_iso_check(s).passed());
    const Extension<SetV> e = extend_structure(s);
    INFO(e.report.to_json().dump());
    CHECK(e.report.passed());
    const Report r = compare_with_oracle(s, OracleMode::localisation);
    INFO(r.to_json().dump());
    CHECK(r.passed());
  }
  SECTION("the oracle needs Σ") {
    const auto y = yoneda_extension(p, default_scope(p, 1));
    CHECK_THROWS_AS(compare_with_oracle(y, OracleMode::localisation), InputError);
  }
}

TEST_CASE("a non-dense family") {
  auto p = z2(boolean());
  const VCatPtr& a = p.hom(0, 0);
  // N 0 = (1, 0), N 1 = (0, 0): nothing reaches the second coordinate.
  const VPresheaf n(prod(op(a), a), {1, 0, 0, 0});
  const auto s = make_extension(p, {a}, identity_reflector<QuantaleV>(), {n},
                                every_presheaf(p));
  const Report d = s.density;
  REQUIRE_FALSE(d.passed());
  CHECK(d.first_failure()->result.witness.contains("object"));
  const Extension<QuantaleV> e = extend_structure(s);
  CHECK_FALSE(e.structure);
  CHECK(e.report.first_failure()->name == "density[00]");
  // With density forced off the isomorphism hypotheses fail with a witness.
  const Report iso = ext_iso_check(s);
  REQUIRE_FALSE(iso.passed());
  const json w = iso.first_failure()->result.witness;
  CHECK(w.contains("C"));
  CHECK(w.contains("A"));
  CHECK_FALSE(extend_structure(s, false).structure);
}
